"""Exception hierarchy shared by all sgweyl modules.

The CLI maps these onto its exit-code taxonomy (validation -> 2,
numerical non-convergence -> 3, I/O -> 4).
"""


class SgweylError(Exception):
    """Base class for all sgweyl errors."""


class ValidationError(SgweylError, ValueError):
    """Invalid argument, configuration, or out-of-domain query."""


class OutOfWindowError(ValidationError):
    """Counting-function query beyond the trusted spectral window."""


class RankDeficientFitError(ValidationError):
    """Least-squares basis is numerically rank deficient (window too narrow)."""


class NonConvergenceError(SgweylError, RuntimeError):
    """A quadrature, extrapolation, or eigensolver failed to converge."""
