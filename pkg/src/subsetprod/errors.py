"""Exception types shared across the package.

The CLI maps these onto exit codes: usage/input errors exit 2, a solver
that exhausts its search or budget exits 3, capability errors exit 4.
"""


class SubsetProdError(Exception):
    """Base class for all package errors."""


class UsageError(SubsetProdError):
    """Caller violated a precondition (bad arguments, mismatched backends)."""


class InputError(SubsetProdError):
    """Malformed external input (config values, hex strings, files)."""


class CapabilityError(SubsetProdError):
    """The request exceeds a documented scale or memory bound."""


class NotFoundError(SubsetProdError):
    """A solver finished without an answer.

    budget_exhausted distinguishes a spent step/restart budget from an
    exhaustive scan that proved no answer exists.
    """

    def __init__(self, message: str, *, budget_exhausted: bool = False):
        super().__init__(message)
        self.budget_exhausted = budget_exhausted


class InternalError(SubsetProdError):
    """A solver produced an answer that failed re-verification (a bug)."""
