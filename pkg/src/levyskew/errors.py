"""Exception and warning types raised across the package."""


class LevySkewError(Exception):
    """Base class for all package errors."""


class ParameterOutOfRange(LevySkewError, ValueError):
    pass


class StripViolation(LevySkewError, ValueError):
    """Evaluation point lies outside the strip of finite exponential moments."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NotMeanCorrected(LevySkewError, ValueError):
    pass


class NoJumps(LevySkewError, ValueError):
    pass


class WrongFamily(LevySkewError, ValueError):
    pass


class DegeneratePut(LevySkewError, ArithmeticError):
    def __init__(self, strike, price):
        super().__init__(f"put price {price:.3e} at strike {strike:.6g} is below the ratio floor")
        self.strike = strike
        self.price = price


class PricingError(LevySkewError, ArithmeticError):
    """Fourier inversion produced a non-finite value."""


class InsufficientPoints(LevySkewError, ValueError):
    pass


class ExtrapolationRequest(LevySkewError, ValueError):
    pass


class EmptyTable(LevySkewError, ValueError):
    pass


class ChainFormatError(LevySkewError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TruncationWarning(UserWarning):
    """The Fourier integrand has not decayed below tolerance at the cutoff."""
