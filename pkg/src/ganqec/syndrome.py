"""Stabilizer syndromes from error patterns (code-capacity model).

Checks are evaluated algebraically from the incidence tables; syndrome
extraction itself is noiseless. Bit ``v`` of a syndrome is the parity of
the pattern restricted to the star of vertex ``v``, so the map is linear
over GF(2) and every syndrome has an even number of defects.
"""

from __future__ import annotations

import numpy as np

from .lattice import ToricLayout


def compute_syndrome(layout: ToricLayout, pattern: np.ndarray) -> np.ndarray:
    """Defect bit-set of a single pattern, length ``d*d``."""
    layout.check_pattern(pattern)
    return (pattern[layout.vertex_edges].sum(axis=1) & 1).astype(np.uint8)


def compute_syndromes_batch(layout: ToricLayout, patterns: np.ndarray) -> np.ndarray:
    """Defect bit-sets for a (T, n_edges) batch of patterns, shape (T, d*d)."""
    if patterns.ndim != 2 or patterns.shape[1] != layout.n_edges:
        raise ValueError(f"expected (T, {layout.n_edges}) batch, got {patterns.shape}")
    return (patterns[:, layout.vertex_edges].sum(axis=2) & 1).astype(np.uint8)
