"""Exact minimum-weight perfect matching decoder (the classical baseline).

Defects are paired at minimum total torus Manhattan distance, then each
pair is joined by a deterministic shortest path whose edges form the
correction. Matching is exact: a subset-DP matcher handles up to
``DP_LIMIT`` defects (every case that occurs at the distances studied
here); beyond that an O(n^3) blossom matching from networkx takes over.
Tests check both against exhaustive pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _batch
from .exceptions import OddDefectCount
from .lattice import ToricLayout, logical_windings
from .syndrome import compute_syndrome

# 2^18 * 18 DP steps ~ milliseconds; past this the blossom matcher is faster.
DP_LIMIT = 18


def torus_distance(layout: ToricLayout, v1: int, v2: int) -> int:
    """Shortest-path length between two vertices on the periodic lattice."""
    d = layout.d
    r1, c1 = divmod(int(v1), d)
    r2, c2 = divmod(int(v2), d)
    dr = abs(r1 - r2)
    dc = abs(c1 - c2)
    return min(dr, d - dr) + min(dc, d - dc)


@dataclass
class Matching:
    """Defect pairing: lexicographically ordered vertex-index pairs."""

    pairs: list[tuple[int, int]] = field(default_factory=list)
    weights: list[int] = field(default_factory=list)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)


def _match_networkx(layout: ToricLayout, defects: np.ndarray) -> np.ndarray:
    import networkx as nx

    n = len(defects)
    big = 4 * layout.d  # larger than any pair distance, keeps weights positive
    g = nx.Graph()
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j, weight=big - torus_distance(layout, defects[i], defects[j]))
    mate = nx.max_weight_matching(g, maxcardinality=True)
    partner = np.full(n, -1, dtype=np.int64)
    for i, j in mate:
        partner[i] = j
        partner[j] = i
    return partner


def mwpm_match(layout: ToricLayout, syndrome: np.ndarray) -> Matching:
    """Minimum-weight perfect matching of the syndrome's defects."""
    layout.check_syndrome(syndrome)
    defects = np.flatnonzero(syndrome)
    if len(defects) % 2:
        raise OddDefectCount(f"{len(defects)} defects cannot be paired")
    if len(defects) == 0:
        return Matching()
    if len(defects) <= DP_LIMIT:
        d = layout.d
        rows = (defects // d).astype(np.int64)
        cols = (defects % d).astype(np.int64)
        partner = _batch.dp_partner(rows, cols, d)
    else:
        partner = _match_networkx(layout, defects)
    matching = Matching()
    for i in range(len(defects)):
        j = int(partner[i])
        if j > i:
            v1, v2 = int(defects[i]), int(defects[j])
            matching.pairs.append((v1, v2))
            matching.weights.append(torus_distance(layout, v1, v2))
    return matching


def pairing_to_correction(layout: ToricLayout, matching: Matching) -> np.ndarray:
    """Realize each pair as a shortest path and XOR the paths together.

    Paths move horizontally along the first defect's row (shorter wrap
    direction; d odd means no ties), then vertically along the second
    defect's column. The correction's boundary is exactly the defect set.
    """
    correction = layout.empty_pattern()
    d = layout.d
    for v1, v2 in matching.pairs:
        r1, c1 = divmod(v1, d)
        r2, c2 = divmod(v2, d)
        _batch.xor_path(correction, r1, c1, r2, c2, d)
    return correction


@dataclass
class DecodeOutcome:
    """Correction plus verdicts; winding class and success need the true error
    and are filled by :func:`ganqec.homology.judge`."""

    correction: np.ndarray
    valid: bool
    logical_class: tuple[int, int] | None = None
    success: bool | None = None


def decode_mwpm(layout: ToricLayout, syndrome: np.ndarray, error: np.ndarray | None = None) -> DecodeOutcome:
    """Full baseline decode; pass the true ``error`` to also judge success."""
    matching = mwpm_match(layout, syndrome)
    correction = pairing_to_correction(layout, matching)
    valid = bool(np.array_equal(compute_syndrome(layout, correction), syndrome))
    outcome = DecodeOutcome(correction=correction, valid=valid)
    if error is not None:
        residual = error ^ correction
        outcome.logical_class = logical_windings(layout, residual)
        outcome.valid = valid and not compute_syndrome(layout, residual).any()
        outcome.success = outcome.valid and outcome.logical_class == (0, 0)
    return outcome


def brute_force_min_weight(layout: ToricLayout, syndrome: np.ndarray) -> int:
    """Exhaustive minimum pairing weight; independent oracle for tests.

    Enumerates all (n-1)!! pairings, so keep n <= 10 or so.
    """
    defects = [int(v) for v in np.flatnonzero(syndrome)]
    if len(defects) % 2:
        raise OddDefectCount(f"{len(defects)} defects cannot be paired")

    def best(rest: tuple[int, ...]) -> int:
        if not rest:
            return 0
        first, tail = rest[0], rest[1:]
        total = None
        for k, other in enumerate(tail):
            w = torus_distance(layout, first, other) + best(tail[:k] + tail[k + 1:])
            if total is None or w < total:
                total = w
        return total

    return best(tuple(defects))
