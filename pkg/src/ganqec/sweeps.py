"""Monte Carlo sweeps, Wilson intervals and threshold estimation.

Trials are independent and stream-indexed, so a sweep point can be chunked
arbitrarily and still produce identical counts. ``GQ_THREADS`` caps the
worker threads used by the batched decoder (default: all cores).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import _batch
from .exceptions import NoCrossing
from .gan_decoder import CachedGanDecoder
from .lattice import build_layout, windings_batch
from .mwpm import DP_LIMIT, decode_mwpm
from .noise import sample_iid_batch
from .syndrome import compute_syndromes_batch
from .weights_io import ModelWeights

DECODERS = ("mwpm", "gan", "none")
_CHUNK = 16384


def resolve_threads() -> int:
    env = os.environ.get("GQ_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * np.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class SweepPoint:
    d: int
    p: float
    trials: int
    failures: int
    fidelity: float
    wilson_low: float
    wilson_high: float


@dataclass
class SweepResult:
    decoder: str
    seed: int
    points: list[SweepPoint] = field(default_factory=list)

    def curve(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        ps = np.array([pt.p for pt in self.points if pt.d == d])
        fs = np.array([pt.fidelity for pt in self.points if pt.d == d])
        order = np.argsort(ps)
        return ps[order], fs[order]


def _failures_one_point(layout, p, trials, decoder, seed, weights) -> int:
    failures = 0
    gan_decoder = None
    if decoder == "gan":
        gan_decoder = CachedGanDecoder(layout, weights, p)
    try:
        import numba

        numba.set_num_threads(resolve_threads())
    except (ImportError, ValueError):
        pass
    for start in range(0, trials, _CHUNK):
        count = min(_CHUNK, trials - start)
        errors = sample_iid_batch(layout, p, seed, start, count)
        syndromes = compute_syndromes_batch(layout, errors)
        if decoder == "none":
            w = windings_batch(layout, errors)
            bad = syndromes.any(axis=1) | w.any(axis=1)
            failures += int(bad.sum())
        elif decoder == "mwpm":
            fail, overflow = _batch.decode_batch_mwpm(
                layout.d, syndromes, errors, layout.cut_h, layout.cut_v, DP_LIMIT
            )
            for t in np.flatnonzero(overflow):
                outcome = decode_mwpm(layout, syndromes[t], error=errors[t])
                fail[t] = 0 if outcome.success else 1
            failures += int(fail.sum())
        else:
            for t in range(count):
                correction = gan_decoder(syndromes[t])
                residual = errors[t] ^ correction
                w = windings_batch(layout, residual[None, :])[0]
                failures += int(w.any())
    return failures


def sweep(
    ds,
    ps,
    trials: int,
    decoder: str = "mwpm",
    seed: int = 0,
    weights: ModelWeights | None = None,
) -> SweepResult:
    """Logical-fidelity sweep over code distances and error rates.

    Per (d, p) point: sample i.i.d. single-species errors, decode, judge;
    trial t always uses stream t, so reruns are bit-identical. Wilson
    intervals are meaningful from roughly 1000 trials up.
    """
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {DECODERS}, got {decoder!r}")
    if decoder == "gan" and weights is None:
        raise ValueError("gan decoder needs weights")
    result = SweepResult(decoder=decoder, seed=seed)
    for d in ds:
        layout = build_layout(d)
        for p in ps:
            failures = _failures_one_point(layout, p, trials, decoder, seed, weights)
            lo, hi = wilson_interval(trials - failures, trials)
            result.points.append(SweepPoint(
                d=d, p=float(p), trials=trials, failures=failures,
                fidelity=1.0 - failures / trials, wilson_low=lo, wilson_high=hi,
            ))
    return result


@dataclass
class ThresholdEstimate:
    p: float
    bracket_low: float
    bracket_high: float


def estimate_threshold(result: SweepResult, d_low: int, d_high: int) -> ThresholdEstimate:
    """Crossing of the two distances' linearly interpolated fidelity curves.

    Returns the interpolated root inside the first grid cell where the
    curves change order (or touch), with the cell as the uncertainty.
    """
    p_lo, f_lo = result.curve(d_low)
    p_hi, f_hi = result.curve(d_high)
    if len(p_lo) == 0 or len(p_hi) == 0:
        raise NoCrossing(f"missing curve for d={d_low} or d={d_high}")
    if len(p_lo) != len(p_hi) or not np.allclose(p_lo, p_hi):
        raise NoCrossing("curves must share the same p grid")
    diff = f_hi - f_lo
    for k in range(len(diff) - 1):
        a, b = diff[k], diff[k + 1]
        if a == 0.0:
            return ThresholdEstimate(float(p_lo[k]),
                                     float(p_lo[max(k - 1, 0)]), float(p_lo[k + 1]))
        if a * b < 0.0:
            root = p_lo[k] + a * (p_lo[k + 1] - p_lo[k]) / (a - b)
            return ThresholdEstimate(float(root), float(p_lo[k]), float(p_lo[k + 1]))
    if diff[-1] == 0.0:
        return ThresholdEstimate(float(p_lo[-1]), float(p_lo[-2]), float(p_lo[-1]))
    raise NoCrossing("fidelity curves do not cross on the sampled grid")


SWEEP_COLUMNS = ("d", "p", "trials", "failures", "fidelity",
                 "wilson_low", "wilson_high", "decoder", "seed")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def sweep_to_csv(result: SweepResult, path) -> None:
    lines = [",".join(SWEEP_COLUMNS)]
    for pt in result.points:
        lines.append(",".join(_fmt(v) for v in (
            pt.d, pt.p, pt.trials, pt.failures, pt.fidelity,
            pt.wilson_low, pt.wilson_high, result.decoder, result.seed,
        )))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sweep_csv(path) -> SweepResult:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != SWEEP_COLUMNS:
            raise ValueError(f"unexpected sweep CSV header: {header}")
        result = SweepResult(decoder="", seed=0)
        for line in fh:
            if not line.strip():
                continue
            vals = line.strip().split(",")
            row = dict(zip(SWEEP_COLUMNS, vals))
            result.decoder = row["decoder"]
            result.seed = int(row["seed"])
            result.points.append(SweepPoint(
                d=int(row["d"]), p=float(row["p"]), trials=int(row["trials"]),
                failures=int(row["failures"]), fidelity=float(row["fidelity"]),
                wilson_low=float(row["wilson_low"]), wilson_high=float(row["wilson_high"]),
            ))
    return result
