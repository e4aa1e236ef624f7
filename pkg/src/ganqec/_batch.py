"""Numba kernels for the Monte Carlo hot path.

The subset-DP matcher is exact: ``dp[mask]`` is the cheapest pairing of the
defects in ``mask``, built by always pairing the lowest-indexed defect first
and keeping the first partner that attains the minimum, which makes the
tie-break lexicographic and deterministic. Cost is O(2^n * n); trials whose
defect count exceeds ``dp_limit`` are flagged for the caller to decode with
the general matcher instead.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_INF = np.int64(1) << np.int64(60)


@njit(cache=True)
def torus_dist(r1, c1, r2, c2, d):
    dr = abs(r1 - r2)
    dc = abs(c1 - c2)
    return min(dr, d - dr) + min(dc, d - dc)


@njit(cache=True)
def dp_partner(rows, cols, d):
    """Exact minimum-weight pairing of defects; returns partner[i] = j."""
    n = rows.shape[0]
    partner = np.full(n, -1, np.int64)
    if n == 0:
        return partner
    dist = np.empty((n, n), np.int64)
    for i in range(n):
        for j in range(n):
            dist[i, j] = torus_dist(rows[i], cols[i], rows[j], cols[j], d)
    full = (np.int64(1) << n) - 1
    dp = np.full(full + 1, _INF, np.int64)
    choice = np.full(full + 1, -1, np.int64)
    dp[0] = 0
    for mask in range(2, full + 1):
        i = 0
        while not (mask >> i) & 1:
            i += 1
        rem = mask & ~(np.int64(1) << i)
        if rem == 0:
            continue  # odd-popcount mask, unreachable
        best = _INF
        best_j = -1
        j = i + 1
        m = rem >> (i + 1)
        while m:
            if m & 1:
                prev = dp[rem & ~(np.int64(1) << j)]
                if prev < _INF:
                    cost = prev + dist[i, j]
                    if cost < best:
                        best = cost
                        best_j = j
            m >>= 1
            j += 1
        dp[mask] = best
        choice[mask] = best_j
    mask = full
    while mask:
        i = 0
        while not (mask >> i) & 1:
            i += 1
        j = choice[mask]
        partner[i] = j
        partner[j] = i
        mask &= ~((np.int64(1) << i) | (np.int64(1) << j))
    return partner


@njit(cache=True)
def xor_path(residual, r1, c1, r2, c2, d):
    """XOR a shortest path into ``residual``: horizontal moves along row r1
    first (shorter wrap direction), then vertical moves along column c2."""
    d2 = d * d
    dc = (c2 - c1) % d
    if dc != 0:
        if dc <= d // 2:
            for k in range(dc):
                residual[r1 * d + (c1 + k) % d] ^= 1
        else:
            for k in range(d - dc):
                residual[r1 * d + (c1 - 1 - k) % d] ^= 1
    dr = (r2 - r1) % d
    if dr != 0:
        if dr <= d // 2:
            for k in range(dr):
                residual[d2 + ((r1 + k) % d) * d + c2] ^= 1
        else:
            for k in range(d - dr):
                residual[d2 + ((r1 - 1 - k) % d) * d + c2] ^= 1


@njit(cache=True, parallel=True)
def decode_batch_mwpm(d, syndromes, errors, cut_h, cut_v, dp_limit):
    """Decode a batch and judge against the true errors.

    Returns (fail, overflow): ``fail[t]=1`` iff the residual after MWPM
    correction is a nontrivial cycle; ``overflow[t]=1`` marks trials whose
    defect count exceeded ``dp_limit`` (left undecoded for the caller).
    """
    n_trials = syndromes.shape[0]
    n_checks = syndromes.shape[1]
    n_edges = errors.shape[1]
    fail = np.zeros(n_trials, np.uint8)
    overflow = np.zeros(n_trials, np.uint8)
    for t in prange(n_trials):
        n_def = 0
        for v in range(n_checks):
            if syndromes[t, v]:
                n_def += 1
        if n_def > dp_limit or n_def % 2 == 1:
            # odd counts cannot happen for real patterns; route to the
            # Python path, which raises OddDefectCount
            overflow[t] = 1
            continue
        residual = np.empty(n_edges, np.uint8)
        for e in range(n_edges):
            residual[e] = errors[t, e]
        if n_def > 0:
            rows = np.empty(n_def, np.int64)
            cols = np.empty(n_def, np.int64)
            k = 0
            for v in range(n_checks):
                if syndromes[t, v]:
                    rows[k] = v // d
                    cols[k] = v % d
                    k += 1
            partner = dp_partner(rows, cols, d)
            for i in range(n_def):
                j = partner[i]
                if j > i:
                    xor_path(residual, rows[i], cols[i], rows[j], cols[j], d)
        w_h = 0
        for i in range(cut_h.shape[0]):
            w_h ^= residual[cut_h[i]]
        w_v = 0
        for i in range(cut_v.shape[0]):
            w_v ^= residual[cut_v[i]]
        if w_h or w_v:
            fail[t] = 1
    return fail, overflow


@njit(cache=True)
def windings_of_rows(patterns, cut_h, cut_v):
    """(T, n_edges) -> (T, 2) winding parities."""
    n = patterns.shape[0]
    out = np.zeros((n, 2), np.uint8)
    for t in range(n):
        w_h = 0
        for i in range(cut_h.shape[0]):
            w_h ^= patterns[t, cut_h[i]]
        w_v = 0
        for i in range(cut_v.shape[0]):
            w_v ^= patterns[t, cut_v[i]]
        out[t, 0] = w_h
        out[t, 1] = w_v
    return out
