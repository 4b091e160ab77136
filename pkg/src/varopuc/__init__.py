"""Orthogonal and paraorthogonal polynomials on the unit circle with varying coefficients."""

__version__ = "0.1.0"

from .errors import (
    BranchSelectionError,
    ClusteringError,
    ConfigError,
    ConvergenceError,
    DegenerateEvaluationError,
    DomainError,
    NearZeroDenominatorError,
    OnSpectrumError,
    OutOfRangeError,
    ProximityError,
    ToleranceNotMetError,
    UnsupportedVariantError,
    VaropucError,
)
from .schedules import Constant, Periodic, SampledFunction, Table, coefficient, coefficients
