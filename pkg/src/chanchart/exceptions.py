"""Exception hierarchy for the chanchart toolkit.

Every error raised on a contract violation derives from :class:`ChartingError`
so callers can catch toolkit failures with a single except clause. The leaf
classes mirror the distinct failure modes of the pipeline stages: bad
configuration, out-of-domain arguments, degenerate numerical inputs, and
benchmark aborts.
"""


class ChartingError(Exception):
    """Base class for all chanchart errors."""


class ConfigurationError(ChartingError, ValueError):
    """Invalid configuration (non-positive sizes, inconsistent parameters)."""


class DomainError(ChartingError, ValueError):
    """Argument outside the documented domain of an operation."""


class DegenerateInputError(ChartingError, ValueError):
    """Input that is formally valid but numerically degenerate (e.g. all zero)."""


class DegenerateSplitError(ChartingError, ValueError):
    """Subspace split left no noise subspace."""


class DegenerateWeightError(ChartingError, ValueError):
    """Minimum-Norm weight vector vanished (first basis vector lies in the signal subspace)."""


class NotPositiveDefiniteError(ChartingError, ValueError):
    """Cholesky factorization hit a non-positive pivot."""


class InsufficientApertureError(ChartingError, ValueError):
    """Distance estimation requested without inter-subcarrier phase (n_sub < 2)."""


class FitError(ChartingError, ValueError):
    """Regression fit impossible (too few points or degenerate abscissae)."""


class AssemblyError(ChartingError, ValueError):
    """Chart assembly got an inconsistent estimate set (missing or duplicate UE)."""


class BenchmarkError(ChartingError, RuntimeError):
    """A timed pipeline failed; the message names the failing UE."""
