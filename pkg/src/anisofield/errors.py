"""Exception hierarchy shared across the package.

Validation problems (bad parameters, malformed inputs) raise ModelError;
numerical failures (non-convergent quadrature, factorization breakdown,
internal consistency violations) raise the RuntimeError branch; broken
files raise the OSError branch.  The CLI maps the three branches to exit
codes 1, 2 and 3.
"""


class AnisoFieldError(Exception):
    """Base class for all package errors."""


class ModelError(AnisoFieldError, ValueError):
    """Invalid model parameters or malformed user input."""


class SingularDensityError(ModelError):
    """Spectral density evaluated at a singular point (e.g. fBm at 0)."""


class QuadratureError(AnisoFieldError, RuntimeError):
    """Quadrature error estimate exceeded the requested tolerance."""

    def __init__(self, message, value=None, err=None):
        super().__init__(message)
        self.value = value
        self.err = err


class FactorizationError(AnisoFieldError, RuntimeError):
    """Covariance matrix could not be factorized, even with jitter."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class ConsistencyError(AnisoFieldError, RuntimeError):
    """Two routes to the same quantity disagreed beyond tolerance."""


class FileFormatError(AnisoFieldError, OSError):
    """File exists but its content is not in the expected format."""
