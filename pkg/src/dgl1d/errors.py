"""Exception taxonomy shared by all modules."""


class NumericsError(Exception):
    """Base class for numerical failures in dgl1d."""


class NoSignChange(NumericsError):
    """Root bracket endpoints have the same sign."""


class MaxIterations(NumericsError):
    """Iteration budget exhausted before the tolerance was reached."""


class UnsupportedRange(NumericsError):
    """Argument outside the supported evaluation range."""


class PoleOrder(NumericsError):
    """Gamma-pole configuration the series representation cannot resolve."""


class ConvergenceFailure(NumericsError):
    """An iterative solver failed to converge."""


class LengthMismatch(NumericsError):
    """Sample array length does not match the grid."""


class BracketFailure(NumericsError):
    """Could not isolate the requested eigenvalue root."""


class BoundViolated(NumericsError):
    """A proven inequality failed numerically: indicates a bug."""


class GridMismatch(NumericsError):
    """Profile/operator grids or parameters are inconsistent."""


class HypothesisFailed(NumericsError):
    """Gap hypothesis of the spectral lower bound is not met."""


class NotStationary(NumericsError):
    """Requested point is not a stationary point of the first eigenvalue."""


class MultipleMinimaWarning(UserWarning):
    """More than one near-optimal minimum detected in the energy scan."""


class UsageError(Exception):
    """Command-line usage error (exit code 2)."""
