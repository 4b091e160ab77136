"""Exception hierarchy shared by all modules."""


class VaropucError(Exception):
    """Base class for package errors."""


class DomainError(VaropucError, ValueError):
    pass


class OutOfRangeError(VaropucError, IndexError):
    pass


class UnsupportedVariantError(VaropucError, TypeError):
    pass


class ConfigError(VaropucError, ValueError):
    pass


class OnSpectrumError(DomainError):
    """Evaluation point lies on the support of the limiting measure."""


class DegenerateEvaluationError(VaropucError, ArithmeticError):
    pass


class NearZeroDenominatorError(DegenerateEvaluationError):
    pass


class ProximityError(DomainError):
    """Evaluation point too close to the support of a measure."""


class BranchSelectionError(VaropucError, ArithmeticError):
    pass


class ConvergenceError(VaropucError, RuntimeError):
    """Iteration failed to converge.

    ``partial`` carries whatever was computed before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ToleranceNotMetError(ConvergenceError):
    def __init__(self, message, achieved=None, partial=None):
        super().__init__(message, partial)
        self.achieved = achieved


class ClusteringError(ConvergenceError):
    pass
