"""Exception types shared across the toolkit."""


class StgoError(Exception):
    """Base class for all toolkit errors."""


class DomainError(StgoError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class SingularityError(DomainError):
    """Pointwise evaluation requested at a genuine singularity."""


class DistributionalError(DomainError):
    """Classical (pointwise) evaluation of a distribution-valued object."""


class BoundaryError(DomainError):
    """Two-range expansion evaluated on the |r_<| = |r_>| boundary."""


class ParameterSingularityError(DomainError):
    """A prefactor of the requested expansion is singular for these parameters."""


class CapabilityError(StgoError):
    """A radial profile cannot supply the requested derivative order."""


class UnsupportedError(StgoError):
    """Operation outside the implemented scope (rejected explicitly)."""


class ConvergenceError(StgoError):
    """An iterative evaluation failed to reach the requested tolerance."""
