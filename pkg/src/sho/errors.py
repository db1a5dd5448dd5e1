"""Exception hierarchy shared by every module of the package."""


class SHOError(ValueError):
    """Base class for all errors raised by :mod:`sho`."""


class DomainError(SHOError):
    """A parameter lies outside the domain where the model is defined."""


class BranchError(SHOError):
    """An operation was asked to use an inadmissible or degenerate branch."""


class BracketError(SHOError):
    """An energy bracket does not straddle a sign change."""


class ResolutionError(SHOError):
    """A finite-difference grid is too coarse for the requested tolerance."""


class PreconditionError(SHOError):
    """A documented precondition does not hold (e.g. energy is an eigenvalue)."""


class OrderingError(SHOError):
    """Coefficient ratios violate ``A_j >= B_j > 0`` inside the checked window."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(SHOError):
    """An iterative numerical procedure ran out of budget.

    The best estimate reached so far is kept in :attr:`partial`.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivergenceError(SHOError):
    """A requested integral does not exist (non-integrable singularity)."""


class StepError(DomainError):
    """A finite-difference step leaves the parameter domain."""
