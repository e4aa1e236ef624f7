class TrainerError(Exception):
    """Base class for trainer errors."""


class DivergenceDetected(TrainerError):
    """A loss became non-finite during training."""


class NonConvergentSqrt(TrainerError):
    """The covariance matrix square root did not converge."""
