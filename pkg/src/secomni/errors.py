"""Shared exception types."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class ContextMismatchError(InvalidArgumentError):
    """Elements or matrices from different field contexts were mixed."""


class ResourceLimitError(RuntimeError):
    """An exact computation would exceed its documented size budget."""


class InternalCheckError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""


class SchemeSearchError(RuntimeError):
    """A randomized scheme search exhausted its attempt budget.

    Attributes:
        diagnostics: Dict with per-reason failure counts and search settings.
        best: Best partial result found, or None.
    """

    def __init__(self, message, diagnostics=None, best=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
        self.best = best
