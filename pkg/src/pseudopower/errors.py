"""Exception hierarchy shared by every module."""


class PseudopowerError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PseudopowerError, ValueError):
    """An argument or configuration is inconsistent; raised before computing."""


class DimensionError(ValidationError):
    pass


class PrecisionError(ValidationError):
    """Operands live in different backends, or a backend cannot hold a value."""


class SingularMatrixError(PseudopowerError, ArithmeticError):
    pass


class ConvergenceError(PseudopowerError, ArithmeticError):
    """An iterative method hit its iteration cap.

    ``iterations`` and ``estimate`` hold the state at the cap so callers can
    decide whether the partial answer is usable.
    """

    def __init__(self, msg, iterations=None, estimate=None):
        super().__init__(msg)
        self.iterations = iterations
        self.estimate = estimate


class ToleranceError(ConvergenceError):
    """Requested tolerance cannot be met at the active mantissa width."""

    def __init__(self, msg, required_bits):
        super().__init__(msg)
        self.required_bits = required_bits
