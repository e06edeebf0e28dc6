"""Entropy bookkeeping for evaporating black holes: Page curves, firewall
bounds, no-communication circuits and lattice vacuum entanglement."""

from .errors import (
    CapacityError,
    EvaplabError,
    InsufficientDataError,
    NumericalValidityError,
    RegulatorError,
    UncertaintyViolationError,
)
from .qstate import (
    DensityMatrix,
    PureState,
    TensorRegister,
    Unitary,
    apply_unitary,
    haar_random_pure,
    haar_random_unitary,
    mutual_information,
    partial_trace,
    ssa_margin,
    subsystem_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"
