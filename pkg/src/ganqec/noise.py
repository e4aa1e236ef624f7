"""Pauli noise samplers with per-trial counter-based streams.

Trial ``t`` of an experiment draws from stream ``t`` (see :mod:`ganqec.rng`),
so results do not depend on batching or thread scheduling. Draw layout
within a stream is fixed per sampler and documented below; samplers never
share draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import ToricLayout
from .rng import Stream, uniforms

NOISE_MODELS = ("independent_xz", "depolarizing")


@dataclass(frozen=True)
class NoiseConfig:
    """Noise parameters shared by sweeps and the teleportation pipeline."""

    model: str = "independent_xz"
    p: float = 0.0        # per-qubit error probability (code capacity)
    gate_p: float = 0.0   # per noisy gate location (teleportation)
    seed: int = 0

    def __post_init__(self):
        if self.model not in NOISE_MODELS:
            raise ValueError(f"unknown noise model {self.model!r}")
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"p must be in [0, 1), got {self.p}")
        if not 0.0 <= self.gate_p < 1.0:
            raise ValueError(f"gate_p must be in [0, 1), got {self.gate_p}")


def sample_iid(layout: ToricLayout, p: float, stream: Stream) -> np.ndarray:
    """One i.i.d. bit-flip pattern: edge ``e`` uses draw ``e`` of the stream."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must be in [0, 1), got {p}")
    u = stream.uniforms(layout.n_edges)
    return (u < p).astype(np.uint8)


def sample_iid_batch(
    layout: ToricLayout, p: float, seed: int, first_stream: int, count: int
) -> np.ndarray:
    """Patterns for streams ``[first_stream, first_stream + count)``, (T, n_edges).

    Row ``t`` is bit-identical to ``sample_iid`` on stream ``first_stream + t``.
    """
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must be in [0, 1), got {p}")
    streams = np.arange(first_stream, first_stream + count, dtype=np.uint64)
    u = uniforms(seed, streams, layout.n_edges)
    return (u < p).astype(np.uint8)


def _depolarize(u: np.ndarray, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Map uniforms to (x, z) bits: X, Y, Z each with probability p/3."""
    x = (u < 2.0 * p / 3.0)                     # X or Y
    z = (u >= p / 3.0) & (u < p)                # Y or Z
    return x.astype(np.uint8), z.astype(np.uint8)


def sample_depolarizing(
    layout: ToricLayout, p: float, stream: Stream
) -> tuple[np.ndarray, np.ndarray]:
    """One depolarizing sample: qubit ``e`` uses draw ``e``; Y sets both bits."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must be in [0, 1), got {p}")
    u = stream.uniforms(layout.n_edges)
    return _depolarize(u, p)


def sample_depolarizing_batch(
    layout: ToricLayout, p: float, seed: int, first_stream: int, count: int
) -> tuple[np.ndarray, np.ndarray]:
    """Batched :func:`sample_depolarizing`, two (T, n_edges) arrays."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must be in [0, 1), got {p}")
    streams = np.arange(first_stream, first_stream + count, dtype=np.uint64)
    u = uniforms(seed, streams, layout.n_edges)
    return _depolarize(u, p)
