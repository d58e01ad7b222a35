"""Exception types shared by every module (and mapped to CLI exit codes)."""


class PreconditionError(ValueError):
    """An operation was called with inputs outside its contract."""


class BudgetExceeded(RuntimeError):
    """An exact search refused to run because the instance is over its limit."""


class Graph6Error(ValueError):
    """Malformed graph6 text; ``offset`` is the index of the offending byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset
