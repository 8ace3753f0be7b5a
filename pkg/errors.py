"""
Error hierarchy shared by every compact3 module.

Each error carries the process exit code the CLI reports for it.
Statuses that are part of a normal answer (absent contour values, ambiguous
intercepts, stalled growth, exhausted search budgets) are NOT errors and are
returned as values instead.
"""


class Compact3Error(Exception):
    exit_code = 1


class UsageError(Compact3Error, ValueError):
    """Bad flags, unknown subcommands, unknown predicate names."""
    exit_code = 2


class DomainError(Compact3Error, ValueError):
    """Radii or cosine-rule arguments outside their domain."""
    exit_code = 2


class PreconditionError(Compact3Error, ValueError):
    """An operation was called on inputs its contract excludes."""
    exit_code = 2


class ResourceBudgetError(Compact3Error):
    exit_code = 3

    def __init__(self, message: str, used: int = 0, cap: int = 0):
        super().__init__(message)
        self.used = used
        self.cap = cap


class EliminationError(Compact3Error):
    """Resultant vanished identically: the inputs share a component."""
    exit_code = 4


class VerificationFailure(Compact3Error):
    exit_code = 4
