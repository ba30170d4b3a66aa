from __future__ import annotations

import enum


class Decision(enum.Enum):
    YES = "YES"
    NO = "NO"
    PROMISE_VIOLATION = "PROMISE_VIOLATION"

    def __str__(self) -> str:
        return self.value


class ParseError(ValueError):
    """Malformed instance file."""


class CapExceeded(RuntimeError):
    """An exhaustive search or allocation would exceed its configured cap."""


class ReductionError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    """Rejection sampling ran out of attempts."""
