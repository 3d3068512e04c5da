"""Exception types shared across the package."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed.

    Raised when a data structure or engine detects that one of its own
    invariants no longer holds (as opposed to ValueError, which signals
    bad input from the caller).
    """
