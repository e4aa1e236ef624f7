import numpy as np
import pytest

from ganqec.exceptions import NoCrossing
from ganqec.homology import exact_decoder_success
from ganqec.sweeps import (
    SweepPoint,
    SweepResult,
    estimate_threshold,
    read_sweep_csv,
    sweep,
    sweep_to_csv,
    wilson_interval,
)


def _synthetic_result(ps, f3, f5):
    result = SweepResult(decoder="mwpm", seed=0)
    for p, f in zip(ps, f3):
        result.points.append(SweepPoint(3, float(p), 1000, 0, float(f), 0.0, 1.0))
    for p, f in zip(ps, f5):
        result.points.append(SweepPoint(5, float(p), 1000, 0, float(f), 0.0, 1.0))
    return result


def test_wilson_interval_basic():
    lo, hi = wilson_interval(90, 100)
    assert 0.8 < lo < 0.9 < hi < 0.96
    lo0, hi0 = wilson_interval(0, 50)
    assert lo0 == 0.0 and hi0 > 0.0
    lo1, hi1 = wilson_interval(50, 50)
    assert hi1 == 1.0 and lo1 < 1.0


def test_sweep_p_zero_perfect(lay3):
    result = sweep(ds=[3], ps=[0.0], trials=500, decoder="mwpm", seed=1)
    assert result.points[0].fidelity == 1.0
    result = sweep(ds=[3], ps=[0.0], trials=500, decoder="none", seed=1)
    assert result.points[0].fidelity == 1.0


def test_sweep_matches_exact_oracle(lay3):
    # Monte Carlo at d=3, p=0.05 within 4 sigma of the 2^18 enumeration
    trials = 20000
    result = sweep(ds=[3], ps=[0.05], trials=trials, decoder="mwpm", seed=3)
    exact = exact_decoder_success(lay3, 0.05)
    sigma = np.sqrt(exact * (1 - exact) / trials)
    assert abs(result.points[0].fidelity - exact) < 4 * sigma


def test_sweep_none_decoder_counts_any_damage(lay3):
    # without correction, success only for errors that are trivial cycles
    trials = 5000
    result = sweep(ds=[3], ps=[0.05], trials=trials, decoder="none", seed=5)
    # P(trivial) is dominated by the empty pattern, (1-p)^18 = 0.397...
    assert 0.3 < result.points[0].fidelity < 0.5


def test_sweep_deterministic_and_chunk_independent(lay3, monkeypatch):
    a = sweep(ds=[3], ps=[0.08], trials=3000, decoder="mwpm", seed=11)
    import ganqec.sweeps as sweep_mod

    monkeypatch.setattr(sweep_mod, "_CHUNK", 257)
    b = sweep(ds=[3], ps=[0.08], trials=3000, decoder="mwpm", seed=11)
    assert a.points[0].failures == b.points[0].failures


def test_threshold_synthetic_linear_curves():
    ps = np.arange(0.0, 0.101, 0.01)
    f3 = 1.0 - 2.0 * ps
    f5 = 1.0 - ps - 0.05
    est = estimate_threshold(_synthetic_result(ps, f3, f5), 3, 5)
    assert est.p == pytest.approx(0.05, abs=1e-9)
    assert est.bracket_low <= 0.05 <= est.bracket_high


def test_threshold_no_crossing():
    ps = np.arange(0.0, 0.05, 0.01)
    f3 = 1.0 - ps
    f5 = 0.9 - ps  # always below, never crosses
    with pytest.raises(NoCrossing):
        estimate_threshold(_synthetic_result(ps, f3, f5), 3, 5)


def test_threshold_requires_shared_grid():
    result = _synthetic_result([0.01, 0.02], [0.9, 0.8], [0.95, 0.7])
    result.points[2].p = 0.015
    with pytest.raises(NoCrossing):
        estimate_threshold(result, 3, 5)


def test_csv_round_trip_and_byte_identical_rerun(tmp_path):
    path_a = tmp_path / "a.csv"
    path_b = tmp_path / "b.csv"
    ra = sweep(ds=[3], ps=[0.02, 0.05], trials=2000, decoder="mwpm", seed=9)
    rb = sweep(ds=[3], ps=[0.02, 0.05], trials=2000, decoder="mwpm", seed=9)
    sweep_to_csv(ra, path_a)
    sweep_to_csv(rb, path_b)
    assert path_a.read_bytes() == path_b.read_bytes()
    back = read_sweep_csv(path_a)
    assert back.decoder == "mwpm" and back.seed == 9
    assert [(pt.d, pt.p, pt.failures) for pt in back.points] == \
           [(pt.d, pt.p, pt.failures) for pt in ra.points]


def test_gq_threads_env(monkeypatch):
    from ganqec.sweeps import resolve_threads

    monkeypatch.setenv("GQ_THREADS", "1")
    assert resolve_threads() == 1
    monkeypatch.delenv("GQ_THREADS")
    assert resolve_threads() >= 1


def test_wilson_coverage_self_check(lay3):
    # deterministic statistical self-check: over seeds 0..99 at 2000 trials
    # the 95% Wilson interval contains the exact d=3 fidelity 96 times
    exact = exact_decoder_success(lay3, 0.05)
    hits = 0
    for seed in range(100):
        pt = sweep(ds=[3], ps=[0.05], trials=2000, decoder="mwpm", seed=seed).points[0]
        if pt.wilson_low <= exact <= pt.wilson_high:
            hits += 1
    assert hits >= 95
    assert hits == 96  # frozen for these exact seeds


def test_distance_ordering_flips_across_threshold():
    # below threshold the larger distance wins, above it loses
    result = sweep(ds=[3, 5], ps=[0.05, 0.15], trials=20000, decoder="mwpm", seed=77)
    fid = {(pt.d, pt.p): pt.fidelity for pt in result.points}
    assert fid[(5, 0.05)] > fid[(3, 0.05)]
    assert fid[(5, 0.15)] < fid[(3, 0.15)]
