"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class NoBoundStateError(DomainError):
    """Bound states require omega*k*m > 0 and |m| >= 1."""


class UnderResolvedGridError(DomainError):
    """The radial grid is too coarse for the requested problem."""

    def __init__(self, message: str, suggested_npts: int):
        super().__init__(message)
        self.suggested_npts = suggested_npts


class AssemblyError(ValueError):
    """The potential could not be placed on the grid (non-finite value)."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to converge."""
