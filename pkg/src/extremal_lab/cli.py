"""Command-line entry point: ``extremal-lab <subcommand> ...``.

Exit status: 0 success, 1 usage error, 2 precondition failure, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Any

from . import catalog as cat
from . import constructions as cons
from . import drc as drc_mod
from . import ramsey as ram
from . import regularity as reg
from . import rtsearch as rts
from . import weighting as wt
from .errors import BudgetExceeded, PreconditionError
from .graph import (
    Graph,
    circulant_graph,
    clique_number,
    complete_graph,
    cycle_graph,
    empty_graph,
    from_adjacency_json,
    from_graph6,
    independence_number,
    maximum_clique,
    maximum_independent_set,
    path_graph,
    to_adjacency_json,
    to_graph6,
)
from .labeled import default_workers

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3
FORMATS = ("json", "csv", "graph6", "table")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# value rendering

def rational(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "value": f"{x.numerator}/{x.denominator}",
            "decimal": float(x)}


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, Graph):
        return to_graph6(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    return obj


def _flat(v: Any) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, Graph):
        return to_graph6(v)
    if isinstance(v, (list, tuple, set, frozenset, dict)):
        return json.dumps(_jsonable(v), separators=(",", ":"))
    return "" if v is None else str(v)


class Result:
    def __init__(self, payload: dict, rows: list[dict] | None = None, graph: Graph | None = None):
        self.payload, self.rows, self.graph = payload, rows, graph

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(_jsonable(self.payload), indent=2) + "\n"
        if fmt == "graph6":
            if self.graph is None:
                raise UsageError("this command produces no graph; choose json, csv or table")
            return to_graph6(self.graph) + "\n"
        rows = self.rows if self.rows is not None else [{"key": k, "value": v} for k, v in self.payload.items()]
        if not rows:
            return ""
        cols = list(rows[0])
        for r in rows[1:]:
            cols += [c for c in r if c not in cols]
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({c: _flat(r.get(c)) for c in cols})
            return buf.getvalue()
        cells = [[c for c in cols]] + [[_flat(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
        return "".join("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() + "\n" for row in cells)


# ---------------------------------------------------------------------------
# inputs

def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="ascii") as fh:
        return fh.read()


def read_graph(path: str) -> Graph:
    text = read_text(path).strip()
    if text.startswith("{"):
        return from_adjacency_json(text)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise PreconditionError(f"no graph found in {path}")
    return from_graph6(lines[0].strip())


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


_FUNCS = {"sqrt": math.sqrt, "log": math.log2, "floor": math.floor, "ceil": math.ceil, "min": min, "max": max}


def evaluate_budget_expr(expr: str, n: int) -> int:
    """Evaluate an independence budget such as ``n/2``, ``c*sqrt(n*log(n))`` or ``Q(3,n)``.

    ``log`` is base 2; ``Q(t, k)`` is the exact inverse Ramsey number for t <= 3
    and small k. The result is floored to an integer.
    """
    tree = ast.parse(expr, mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name):
            if node.id == "n":
                return n
            raise PreconditionError(f"unknown name {node.id!r} in budget expression")
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
            a, b = ev(node.left), ev(node.right)
            return {ast.Add: a + b, ast.Sub: a - b, ast.Mult: a * b,
                    ast.Div: a / b if b else math.inf, ast.Pow: a ** b}[type(node.op)]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            args = [ev(a) for a in node.args]
            if node.func.id == "Q":
                return _q_value(*[int(x) for x in args])
            if node.func.id in _FUNCS:
                return _FUNCS[node.func.id](*args)
        raise PreconditionError(f"unsupported budget expression: {expr!r}")

    return math.floor(ev(tree) + 1e-12)


def _q_value(t: int, k: int) -> int:
    if t <= 2:
        return 1 if t == 2 else 0
    if t != 3 or k > 13:
        raise PreconditionError("Q(t, n) is only evaluated exactly for t <= 3 and n <= 13")
    table = ram.RamseyTable.build([(3, 3), (3, 4), (3, 5)])
    return ram.inverse_ramsey_q(3, k, table)


# ---------------------------------------------------------------------------
# subcommands

def _graph_from_args(args) -> Graph:
    if args.family:
        fam, n = args.family, args.n
        if n is None:
            raise UsageError("--family needs --n")
        if fam == "turan":
            return cons.turan_graph(n, args.r or 2)
        if fam == "circulant":
            return circulant_graph(n, args.jumps or [1])
        return {"complete": complete_graph, "cycle": cycle_graph, "path": path_graph, "empty": empty_graph}[fam](n)
    if args.input is None:
        raise UsageError("give --in FILE (or '-') or --family")
    return read_graph(args.input)


def cmd_graph(args) -> Result:
    g = _graph_from_args(args)
    omega = maximum_clique(g, limit=args.limit)
    alpha = maximum_independent_set(g, limit=args.limit)
    payload = {"n": g.n, "edges": g.num_edges(), "graph6": to_graph6(g), "degrees": g.degrees(),
               "clique_number": len(omega), "max_clique": sorted(omega),
               "independence_number": len(alpha), "max_independent_set": sorted(alpha)}
    if args.adjacency:
        payload["adjacency"] = json.loads(to_adjacency_json(g))
    return Result(payload, graph=g)


def _weight_rows(w: wt.WeightAssignment) -> list[dict]:
    return [{"u": u, "v": v, "weight": x, "decimal": float(x)} for (u, v), x in sorted(w.weights.items())]


def cmd_weight(args) -> Result:
    if args.mode == "scan":
        if args.n is None:
            raise UsageError("weight scan needs --n")
        res = wt.extremal_heavy_free_scan(args.n, args.a, seed=args.seed, iterations=args.iterations)
        return Result(res.to_json(), graph=res.witness)
    g = _graph_from_args(args)
    if args.mode == "standard":
        w = wt.standard_weighting(g)
        rep = wt.verify_quarter_bound(g)
        payload = {"n": g.n, "total": w.total, "bound": rep.bound, "holds": rep.holds,
                   "weights": [{"u": u, "v": v, "weight": x} for (u, v), x in sorted(w.weights.items())]}
        return Result(payload, _weight_rows(w), g)
    if args.mode == "chubby":
        w = wt.chubby_weighting_k5free(g)
        payload = {"n": g.n, "total": w.total, "reference": Fraction(4, 15) * g.n * g.n,
                   "weights": [{"u": u, "v": v, "weight": x} for (u, v), x in sorted(w.weights.items())]}
        return Result(payload, _weight_rows(w), g)
    opt = wt.heavy_free_optimum(wt.HeavyFreeInstance(g, args.a))
    payload = {"n": g.n, "a": args.a, "value": opt.value, "cover": [list(e) for e in sorted(opt.cover)],
               "weights": [{"u": u, "v": v, "weight": x} for (u, v), x in sorted(opt.witness.weights.items())]}
    return Result(payload, _weight_rows(opt.witness), g)


def cmd_construct(args) -> Result:
    if args.spec:
        spec = cons.ConstructionSpec.from_json(read_text(args.spec))
    else:
        if args.kind is None or args.n is None:
            raise UsageError("give --spec FILE or both --kind and --n")
        spec = cons.ConstructionSpec(args.kind, args.n, args.s, (), tuple(args.inner or ()), args.seed)
    g, report = cons.build(spec)
    return Result({"kind": spec.kind, **cons.construction_json(g, report)}, graph=g)


def cmd_ramsey(args) -> Result:
    if args.inverse is not None:
        table = ram.RamseyTable()
        m = 3
        while True:
            e = ram.ramsey_exact(args.t, m, args.budget, args.workers)
            table.add(e)
            if e.lower > args.inverse or e.status != ram.EXACT:
                break
            m += 1
        q = ram.inverse_ramsey_q(args.t, args.inverse, table)
        return Result({"t": args.t, "n": args.inverse, "Q": q, "table": table.to_json()})
    if args.m is None:
        raise UsageError("ramsey needs --m (or --inverse N)")
    e = ram.ramsey_exact(args.t, args.m, args.budget, args.workers)
    return Result(e.to_json(), graph=e.witness)


def cmd_rt(args) -> Result:
    alpha = evaluate_budget_expr(args.alpha, args.n)
    q = rts.RTQuery(args.n, args.s, alpha)
    if args.mode == "exact":
        rec = rts.rt_exact(q, workers=args.workers, seed=args.seed)
    elif args.mode == "heuristic":
        rec = rts.rt_heuristic_lower(q, seed=args.seed, iterations=args.iterations)
    else:
        return Result({"n": q.n, "s": q.s, "alpha_budget": q.alpha_budget, "upper": rts.rt_upper_trivial(q)})
    return Result(rec.to_json(), graph=rec.witness)


def _drc_params(args) -> drc_mod.DRCParams:
    if args.params:
        d = json.loads(read_text(args.params))
        return drc_mod.DRCParams(int(d["k"]), int(d["n"]), Fraction(str(d["gamma"])), Fraction(str(d["c"])), int(d["t"]))
    return drc_mod.DRCParams(args.k, args.n, args.gamma, args.c, args.t)


def cmd_drc(args) -> Result:
    p = _drc_params(args)
    if args.input:
        if args.parts is None:
            raise UsageError("a host graph needs --parts (one part index per vertex)")
        host = drc_mod.Host.from_labels(read_graph(args.input), args.parts)
    else:
        host = drc_mod.random_multipartite_host(p.k, p.n, args.density, args.host_seed)
    ident = drc_mod.drc_expectation_identities(p)
    q_real, q = drc_mod.drc_sample_size_q(p)
    common = {"k": p.k, "n": p.n, "gamma": p.gamma, "c": p.c, "t": p.t, "a": drc_mod.drc_exponent_a(p),
              "q_real": q_real, "q": q, "identities_hold": ident.holds, "c_below_4_over_log_n": p.c_small}
    if args.mode == "run":
        out = drc_mod.drc_run(host, p, args.seed)
        return Result({**common, **out.to_json()})
    rep = drc_mod.drc_monte_carlo(host, p, args.trials, args.seed, args.workers)
    return Result({**common, **rep.to_json()})


def _partition(args, g: Graph) -> reg.Equipartition:
    if args.partition:
        return reg.Equipartition.from_labels(json.loads(read_text(args.partition)))
    if args.m is None:
        raise UsageError("give --partition FILE or --m for contiguous parts")
    return reg.Equipartition.contiguous(g.n, args.m)


def cmd_reg(args) -> Result:
    if args.mode == "hierarchy":
        h = reg.ParamHierarchy(args.n0, args.n, args.delta, args.M_prime, args.eps, args.gamma)
        rep = reg.validate_hierarchy(h)
        return Result({"ok": rep.ok, "links": [{"link": k, "ok": v} for k, v in rep.links]},
                      [{"link": k, "ok": v} for k, v in rep.links])
    if args.mode == "account" and args.input is None:
        if args.n is None or args.m is None:
            raise UsageError("reg account needs --n and --m (or --in with a partition)")
        b = reg.residual_edge_bound(args.n, args.m, args.eps, args.gamma)
        return Result({"n": args.n, "m": args.m, "exact_sum": b.exact_sum, "chained": b.chained, "final": b.final,
                       "coefficient": b.coefficient, "gamma_third": b.gamma_third})
    if args.input is None:
        raise UsageError(f"reg {args.mode} needs --in")
    g = read_graph(args.input)
    part = _partition(args, g)
    if args.mode == "check":
        if args.pair is None or len(args.pair) != 2:
            raise UsageError("reg check needs --pair I,J")
        i, j = args.pair
        cert = reg.check_pair_regular(g, part.parts[i], part.parts[j], args.eps, args.cert, args.samples, args.seed)
        return Result(cert.to_json())
    r = reg.build_cluster_graph(g, part, args.eps, args.gamma, args.cert, args.samples, args.seed)
    if args.mode == "build":
        payload = r.to_json()
        payload["heavy_triangles"] = reg.detect_heavy_triangles(r, args.threshold, args.gamma)
        payload["chubby_triangles"] = reg.detect_chubby(r, args.threshold, args.gamma, 3)
        return Result(payload)
    if args.mode == "lift":
        if args.clique is None:
            raise UsageError("reg lift needs --clique I,J,...")
        found = reg.lift_clique(g, part, r, args.clique, args.p)
        return Result({"cluster_clique": args.clique, "p": args.p, "found": found is not None,
                       "clique": None if found is None else sorted(found)})
    dec = reg.edge_decomposition(g, part, r)
    return Result({"edges": g.num_edges(), "cluster_part": dec.cluster_part, "residual_part": dec.residual_part,
                   "cluster_bound": dec.cluster_bound})


def cmd_catalog(args) -> Result:
    entries = cat.catalog_lookup(args.s, args.f) if args.s is not None else list(cat.ENTRIES)
    rows = [e.to_json() for e in entries]
    return Result({"s": args.s, "f_class": args.f, "entries": rows}, rows)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default $EXTREMAL_LAB_WORKERS or 1)")
    common.add_argument("--format", choices=FORMATS, default="json", help="output format")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")

    parser = Parser(prog="extremal-lab", description="Ramsey-Turán computations at desk scale.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    def graph_source(p):
        p.add_argument("--in", dest="input", help="graph6 or adjacency-JSON file, '-' for stdin")
        p.add_argument("--family", choices=("complete", "cycle", "path", "empty", "turan", "circulant"))
        p.add_argument("--n", type=int)
        p.add_argument("--r", type=int, help="parts for --family turan")
        p.add_argument("--jumps", type=parse_int_list, help="jumps for --family circulant")

    p = sub.add_parser("graph", parents=[common], help="invariants and conversion")
    graph_source(p)
    p.add_argument("--limit", type=int, default=None, help="exact-search vertex limit (default 64)")
    p.add_argument("--adjacency", action="store_true", help="include adjacency JSON")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("weight", parents=[common], help="edge weightings and heavy-free optima")
    p.add_argument("mode", choices=("standard", "chubby", "heavyfree", "scan"))
    graph_source(p)
    p.add_argument("--a", type=parse_fraction, default=Fraction(2, 3), help="heavy threshold (default 2/3)")
    p.add_argument("--iterations", type=int, default=2000, help="local-search iterations for large scans")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("construct", parents=[common], help="lower-bound constructions")
    p.add_argument("--spec", help="ConstructionSpec JSON file")
    p.add_argument("--kind", choices=cons.KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--inner", type=parse_int_list, help="inner forbidden clique orders")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("ramsey", parents=[common], help="exact Ramsey numbers and Q(t, n)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--inverse", type=int, metavar="N", help="report Q(t, N) instead")
    p.add_argument("--budget", type=int, help="vertex budget for the search")
    p.set_defaults(func=cmd_ramsey)

    p = sub.add_parser("rt", parents=[common], help="Ramsey-Turán numbers")
    p.add_argument("mode", choices=("exact", "heuristic", "upper"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", required=True, help="independence budget: integer or expression in n")
    p.add_argument("--iterations", type=int, default=50)
    p.set_defaults(func=cmd_rt)

    p = sub.add_parser("drc", parents=[common], help="dependent random choice")
    p.add_argument("mode", choices=("run", "mc"))
    p.add_argument("--params", help="JSON file with k, n, gamma, c, t")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--gamma", type=parse_fraction, default=Fraction(1, 2))
    p.add_argument("--c", type=parse_fraction, default=Fraction(2, 3))
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--in", dest="input", help="host graph (graph6), '-' for stdin")
    p.add_argument("--parts", type=parse_int_list, help="part index per host vertex")
    p.add_argument("--density", type=float, default=0.7, help="random host density when no --in")
    p.add_argument("--host-seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_drc)

    p = sub.add_parser("reg", parents=[common], help="regular pairs, cluster graphs, accounting")
    p.add_argument("mode", choices=("build", "check", "lift", "account", "hierarchy"))
    p.add_argument("--in", dest="input")
    p.add_argument("--partition", help="JSON vector of part indices")
    p.add_argument("--m", type=int, help="number of contiguous parts")
    p.add_argument("--n", type=int)
    p.add_argument("--eps", type=parse_fraction, default=Fraction(1, 10))
    p.add_argument("--gamma", type=parse_fraction, default=Fraction(1, 10))
    p.add_argument("--threshold", type=parse_fraction, default=Fraction(2, 3))
    p.add_argument("--cert", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=reg.DEFAULT_SAMPLES)
    p.add_argument("--pair", type=parse_int_list)
    p.add_argument("--clique", type=parse_int_list)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--n0", type=parse_fraction)
    p.add_argument("--delta", type=parse_fraction)
    p.add_argument("--M-prime", dest="M_prime", type=parse_fraction)
    p.set_defaults(func=cmd_reg)

    p = sub.add_parser("catalog", parents=[common], help="known Ramsey-Turán densities")
    p.add_argument("--s", type=int)
    p.add_argument("--f", help="independence-bound tag, e.g. 'o(Q(4,n))'")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers is None:
        args.workers = default_workers()
    if args.workers < 1:
        sys.stderr.write("error: --workers must be at least 1\n")
        return EXIT_USAGE
    try:
        text = args.func(args).render(args.format)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (PreconditionError, ValueError) as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
