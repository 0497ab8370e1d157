"""Exception and warning types shared across the package."""


class EffbathError(Exception):
    """Base class for all package-specific errors."""


class MissingKeyError(EffbathError, KeyError):
    """A required parameter key is absent from the input mapping."""


class NonPositiveError(EffbathError, ValueError):
    """A strictly positive quantity (Omega, M, mu, beta) is zero or negative."""


class NegativeRateError(EffbathError, ValueError):
    """A nonnegative quantity (gamma, alpha, Delta) is negative."""


class ZeroLengthError(EffbathError, ValueError):
    """A length scale used in a coupling conversion is zero."""


class ZeroDriveError(EffbathError, ValueError):
    """Susceptibility reconstruction requested with vanishing drive amplitude."""


class ZeroDampingError(EffbathError, ValueError):
    """Closed-form correlation coefficients are singular at zero damping."""


class QuadratureNonConvergence(EffbathError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the achieved absolute-error estimate in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class StepTooLargeError(EffbathError, ValueError):
    """Time step too coarse to resolve the fastest oscillation."""


class NonFiniteStateError(EffbathError, RuntimeError):
    """The population trace left the finite range during time stepping."""


class TruncationInvalidError(EffbathError, ValueError):
    """Kernel-series truncation condition |u0| < 1 violated (strict mode)."""


class ComplexFrequencyError(EffbathError, ValueError):
    """Undamped pole equation produced non-real oscillation frequencies."""


class NoConvergenceError(EffbathError, RuntimeError):
    """Newton iteration on the pole equation did not converge."""


class RootSwapError(EffbathError, RuntimeError):
    """Newton iteration drifted to the pole belonging to the other seed."""


class TooShortError(EffbathError, ValueError):
    """Time series too short for spectral analysis."""


class NoPeaksError(EffbathError, ValueError):
    """No local maxima found in a magnitude spectrum."""


class RegimeWarning(UserWarning):
    """A physical-regime assumption is violated; results may be unreliable."""
