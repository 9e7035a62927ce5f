"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI: InputError -> 2, BudgetError -> 3,
DisagreementError (a verified property that fails to hold) -> 1.
"""


class ArclocusError(Exception):
    """Base class for all library errors."""


class InputError(ArclocusError, ValueError):
    """Malformed or inconsistent input data (programs, documents, flags)."""


class BudgetError(ArclocusError, RuntimeError):
    """An enumeration or search would exceed the configured budget."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class LiftingObstructionError(ArclocusError, RuntimeError):
    """The leading Jacobian coefficients vanish in the working field."""


class DisagreementError(ArclocusError, RuntimeError):
    """Two independent computation routes returned incompatible results."""
