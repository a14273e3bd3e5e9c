"""Exception types shared across the toolkit."""


class RtekitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RtekitError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceRangeError(DomainError):
    """Requested Renyi order is outside the estimator's convergence range."""


class DegenerateSampleError(RtekitError, ValueError):
    """Zero nearest-neighbor distances make the estimate undefined."""


class DivergenceError(RtekitError, RuntimeError):
    """Trajectory integration diverged or the solver failed.

    Attributes
    ----------
    time : float
        Integration time at which the failure was detected.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class RankDeficiencyError(RtekitError, ValueError):
    """The regression design matrix is numerically rank deficient."""


class ConfigError(RtekitError, ValueError):
    """A sweep configuration file or value is invalid."""
