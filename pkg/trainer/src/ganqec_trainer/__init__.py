"""GAN trainer for the toric-code decoder generator."""

from .errors import DivergenceDetected, NonConvergentSqrt, TrainerError
from .fid import FeatureExtractor, FidReport, fid, frechet_distance
from .networks import Discriminator, Generator, build_networks
from .train import TrainConfig, TrainResult, train

__all__ = [
    "Discriminator",
    "DivergenceDetected",
    "FeatureExtractor",
    "FidReport",
    "Generator",
    "NonConvergentSqrt",
    "TrainConfig",
    "TrainResult",
    "TrainerError",
    "build_networks",
    "fid",
    "frechet_distance",
    "train",
]
