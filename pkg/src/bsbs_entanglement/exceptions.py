"""Exception types raised across the package."""


class ParameterError(ValueError):
    """A physical parameter lies outside its domain."""


class UnsupportedFeatureError(NotImplementedError):
    """The requested model feature is not implemented."""


class UnstableSystemError(ValueError):
    """The drift matrix is not Hurwitz stable, so no steady state exists."""


class SolverError(RuntimeError):
    """The Lyapunov solve failed or missed its residual tolerance."""


class DivergenceError(RuntimeError):
    """Transient integration produced non-finite values.

    Attributes
    ----------
    step : int
        Number of completed integration steps when the failure was detected.
    """

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class NumericalError(RuntimeError):
    """An eigen-decomposition or similar dense kernel did not converge."""


class UnphysicalStateError(ValueError):
    """A covariance matrix violates the uncertainty principle."""


class ConfigError(ValueError):
    """Malformed run configuration (unknown key, bad value, bad axis)."""
