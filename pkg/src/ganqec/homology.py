"""Outcome classification and exact small-distance oracles.

A decode succeeds when error XOR correction is a sum of face boundaries
(trivial cycle). At d=3 the full 2^18 pattern space is enumerated once
into a (syndrome, winding class, weight) count table, which then gives
exact syndrome probabilities, the maximum-likelihood coset success rate,
and the exact success rate of any deterministic decoder, all as cheap
polynomial evaluations in p.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .exceptions import DistanceTooLarge
from .lattice import ToricLayout, logical_windings
from .mwpm import DecodeOutcome, decode_mwpm
from .syndrome import compute_syndrome

_ENUM_MAX_D = 3
_tables: dict[int, np.ndarray] = {}


def judge(layout: ToricLayout, error: np.ndarray, correction: np.ndarray) -> DecodeOutcome:
    """Classify a correction against the true error."""
    layout.check_pattern(error)
    layout.check_pattern(correction)
    residual = error ^ correction
    valid = not compute_syndrome(layout, residual).any()
    logical_class = logical_windings(layout, residual)
    return DecodeOutcome(
        correction=correction,
        valid=valid,
        logical_class=logical_class,
        success=valid and logical_class == (0, 0),
    )


def _require_enumerable(layout: ToricLayout) -> None:
    if layout.d > _ENUM_MAX_D:
        raise DistanceTooLarge(
            f"exhaustive enumeration is capped at d={_ENUM_MAX_D}, got d={layout.d}"
        )


def syndrome_to_int(syndrome: np.ndarray) -> int:
    """Pack a defect bit-set into an integer, bit v = check v."""
    out = 0
    for v in np.flatnonzero(syndrome):
        out |= 1 << int(v)
    return out


def int_to_syndrome(layout: ToricLayout, s: int) -> np.ndarray:
    out = layout.empty_syndrome()
    for v in range(layout.n_vertices):
        out[v] = (s >> v) & 1
    return out


def pattern_counts(layout: ToricLayout) -> np.ndarray:
    """Exhaustive count table N[s, cls, k]: patterns with packed syndrome s,
    winding class cls = 2*w_h + w_v, and weight k. Built once per distance."""
    _require_enumerable(layout)
    if layout.d in _tables:
        return _tables[layout.d]
    n_edges = layout.n_edges
    n_checks = layout.n_vertices
    total = 1 << n_edges

    # incidence matrix H[v, e] and cut indicator rows
    h_mat = np.zeros((n_checks, n_edges), dtype=np.uint8)
    for v in range(n_checks):
        h_mat[v, layout.vertex_edges[v]] = 1

    idx_all = np.arange(total, dtype=np.uint32)
    bits = ((idx_all[:, None] >> np.arange(n_edges, dtype=np.uint32)) & 1).astype(np.uint8)
    weights = bits.sum(axis=1, dtype=np.int64)
    synd = bits @ h_mat.T.astype(np.uint8) & 1  # (total, n_checks), sums <= 4 fit in uint8
    s_int = synd.astype(np.uint64) @ (np.uint64(1) << np.arange(n_checks, dtype=np.uint64))
    w_h = bits[:, layout.cut_h].sum(axis=1, dtype=np.int64) & 1
    w_v = bits[:, layout.cut_v].sum(axis=1, dtype=np.int64) & 1
    cls = 2 * w_h + w_v

    combined = (s_int.astype(np.int64) * 4 + cls) * (n_edges + 1) + weights
    flat = np.bincount(combined, minlength=(1 << n_checks) * 4 * (n_edges + 1))
    table = flat.reshape(1 << n_checks, 4, n_edges + 1)
    table.flags.writeable = False
    _tables[layout.d] = table
    return table


def class_masses(layout: ToricLayout, p: float) -> np.ndarray:
    """M[s, cls] = total probability of errors with syndrome s in class cls."""
    table = pattern_counts(layout)
    n_edges = layout.n_edges
    k = np.arange(n_edges + 1)
    if p == 0.0:
        wk = np.where(k == 0, 1.0, 0.0)
    else:
        # direct evaluation: with n_edges = 18 nothing approaches underflow
        wk = (p ** k) * ((1.0 - p) ** (n_edges - k))
    return table @ wk


def syndrome_probability(layout: ToricLayout, syndrome: np.ndarray, p: float) -> float:
    """Exact probability of observing ``syndrome`` under i.i.d. noise (d=3)."""
    layout.check_syndrome(syndrome)
    masses = class_masses(layout, p)
    return float(masses[syndrome_to_int(syndrome)].sum())


def optimal_success(layout: ToricLayout, p: float) -> float:
    """Success probability of maximum-likelihood coset decoding (d=3).

    For each syndrome the decoder commits to the winding class with the
    largest probability mass; degeneracy within the class is free.
    """
    masses = class_masses(layout, p)
    return float(masses.max(axis=1).sum())


def exact_decoder_success(
    layout: ToricLayout,
    p: float,
    correction_fn: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """Exact success probability of a deterministic syndrome decoder (d=3).

    The decoder succeeds on error E iff E lies in the same winding class as
    its correction for syndrome(E), so only the 2^(d*d-1) realizable
    syndromes need decoding. Defaults to the MWPM baseline.
    """
    masses = class_masses(layout, p)
    if correction_fn is None:
        correction_fn = lambda s: decode_mwpm(layout, s).correction
    total = 0.0
    for s in range(masses.shape[0]):
        if masses[s].sum() == 0.0:
            continue
        syndrome = int_to_syndrome(layout, s)
        correction = correction_fn(syndrome)
        w_h, w_v = logical_windings(layout, correction)
        total += masses[s, 2 * w_h + w_v]
    return float(total)


def kernel_size(layout: ToricLayout) -> int:
    """Number of zero-syndrome patterns, counted exhaustively (d=3)."""
    table = pattern_counts(layout)
    return int(table[0].sum())
