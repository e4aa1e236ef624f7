"""Fréchet distance between feature distributions of correction images.

Features come from a fixed-seed random-weight convolutional embedding
(identifier recorded alongside every report), so scores are deterministic
and comparable across runs without a pretrained classifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import torch
import torch.nn.functional as F

from .errors import NonConvergentSqrt

EXTRACTOR_ID = "randconv64-v1-s20240"
_EXTRACTOR_SEED = 20240
FEATURE_DIM = 64


@dataclass
class FidReport:
    iteration: int
    value: float
    extractor: str = EXTRACTOR_ID


class FeatureExtractor:
    """Three fixed random strided convs, LReLU, global average pool."""

    def __init__(self, seed: int = _EXTRACTOR_SEED):
        rng = np.random.default_rng(seed)

        def kernel(c_out, c_in, k):
            w = rng.standard_normal((c_out, c_in, k, k)) / np.sqrt(c_in * k * k)
            return torch.tensor(w, dtype=torch.float32)

        self.k1 = kernel(16, 1, 5)
        self.k2 = kernel(32, 16, 5)
        self.k3 = kernel(FEATURE_DIM, 32, 3)

    @torch.no_grad()
    def __call__(self, images: torch.Tensor) -> np.ndarray:
        """(N, 1, 128, 128) image batch -> (N, 64) float64 features."""
        t = images.float()
        t = F.leaky_relu(F.conv2d(t, self.k1, stride=4, padding=2), 0.2)
        t = F.leaky_relu(F.conv2d(t, self.k2, stride=4, padding=2), 0.2)
        t = F.leaky_relu(F.conv2d(t, self.k3, stride=2, padding=1), 0.2)
        return t.mean(dim=(2, 3)).double().numpy()


def frechet_distance(mu_t, cov_t, mu_g, cov_g) -> float:
    """Squared mean distance plus the covariance trace term."""
    mu_t = np.asarray(mu_t, dtype=np.float64)
    mu_g = np.asarray(mu_g, dtype=np.float64)
    diff = mu_t - mu_g
    prod = np.asarray(cov_t) @ np.asarray(cov_g)
    sqrt_prod, _ = scipy.linalg.sqrtm(prod, disp=False)
    if not np.isfinite(sqrt_prod).all():
        # retry with a small diagonal offset before giving up
        eps = 1e-9 * np.eye(prod.shape[0])
        sqrt_prod, _ = scipy.linalg.sqrtm((cov_t + eps) @ (cov_g + eps), disp=False)
        if not np.isfinite(sqrt_prod).all():
            raise NonConvergentSqrt("matrix square root did not converge")
    if np.iscomplexobj(sqrt_prod):
        if np.abs(sqrt_prod.imag).max() > 1e-6 * max(np.abs(sqrt_prod.real).max(), 1.0):
            raise NonConvergentSqrt("matrix square root has a large imaginary part")
        sqrt_prod = sqrt_prod.real
    value = diff @ diff + np.trace(cov_t + cov_g - 2.0 * sqrt_prod)
    return float(max(value, 0.0))


def fid(target_images: torch.Tensor, generated_images: torch.Tensor,
        extractor: FeatureExtractor) -> float:
    """FID between two image batches (each at least 16 samples)."""
    if len(target_images) < 16 or len(generated_images) < 16:
        raise ValueError("fid needs batches of at least 16 samples")
    ft = extractor(target_images)
    fg = extractor(generated_images)
    mu_t, mu_g = ft.mean(axis=0), fg.mean(axis=0)
    cov_t = np.cov(ft, rowvar=False)
    cov_g = np.cov(fg, rowvar=False)
    return frechet_distance(mu_t, cov_t, mu_g, cov_g)
