"""Exception types raised across evaplab."""


class EvaplabError(Exception):
    """Base class for all package-specific failures."""


class CapacityError(EvaplabError):
    """A register or sample would exceed the configured amplitude budget."""


class NumericalValidityError(EvaplabError):
    """An operator that should be physical fails a tolerance check."""


class UncertaintyViolationError(NumericalValidityError):
    """A Gaussian covariance has a symplectic eigenvalue below 1/2."""


class RegulatorError(EvaplabError):
    """The dynamical matrix of a lattice is singular (IR divergence)."""


class InsufficientDataError(EvaplabError):
    """Too few usable points for a fit."""
