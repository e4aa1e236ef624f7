"""Secondary acceptance: full training-health run, gradient check,
augmentation consistency, and the trained-decoder handoff through the
primary component's sweep.

The full d=3 training run executes once per session (session fixture) and
writes its artifacts into trainer/artifacts/. Set GQTRAIN_REUSE=1 to reuse
previously written artifacts instead of retraining (e.g. when iterating on
the other tests)."""

import csv
import math
import os
from pathlib import Path

import numpy as np
import pytest
import torch

from ganqec.cli import main as ganqec_main
from ganqec.dataset import generate_dataset, write_dataset
from ganqec.gan_decoder import verify_golden
from ganqec.homology import judge
from ganqec.lattice import build_layout
from ganqec.sweeps import read_sweep_csv
from ganqec.syndrome import compute_syndrome
from ganqec.weights_io import read_weights, validate_generator

from ganqec_trainer.export import (
    emit_golden_vectors,
    write_discriminator,
    write_generator,
)
from ganqec_trainer.geometry import flip_record, lattice_maps, load_dataset
from ganqec_trainer.train import TrainConfig, train, write_log_csv

ARTIFACTS = Path(__file__).resolve().parent.parent / "artifacts"
WEIGHTS_PATH = ARTIFACTS / "generator_d3.gqwt"
DISC_PATH = ARTIFACTS / "discriminator_d3.gqwt"
GOLDEN_PATH = ARTIFACTS / "golden_d3.gqwt"
LOG_PATH = ARTIFACTS / "training_log_d3.csv"

TRAIN_SEED = 20250811
DATASET_P = 0.05
DATASET_COUNT = 20000


def _report(name, ok, detail):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def _dataset_path(tmp_factory) -> Path:
    path = tmp_factory.mktemp("trainds") / "d3_p05_ml.gqds"
    layout = build_layout(3)
    records = generate_dataset(layout, DATASET_P, DATASET_COUNT, "ml", seed=TRAIN_SEED)
    write_dataset(path, layout, DATASET_P, records)
    return path


def _read_log(path):
    rows = []
    with open(path) as fh:
        for row in csv.DictReader(fh):
            rows.append({
                "iteration": int(row["iteration"]),
                "loss_g": float(row["loss_g"]),
                "loss_d": float(row["loss_d"]),
                "fid": float(row["fid"]) if row["fid"] else math.nan,
            })
    return rows


@pytest.fixture(scope="session")
def trained(tmp_path_factory):
    """Full d=3 training run (or artifact reuse); yields (log_rows, wall_s)."""
    if os.environ.get("GQTRAIN_REUSE") == "1" and WEIGHTS_PATH.exists() and LOG_PATH.exists():
        return _read_log(LOG_PATH), None
    dataset = _dataset_path(tmp_path_factory)
    config = TrainConfig(seed=TRAIN_SEED, fid_every=50, fid_samples=64)
    result = train(dataset, config, progress=None)
    ARTIFACTS.mkdir(exist_ok=True)
    # ship the best-validated checkpoint; the health criterion below still
    # judges the full run's log
    shipped = result.best_generator if result.best_generator is not None else result.generator
    run_id = f"d3-seed{TRAIN_SEED}-best{result.best_iteration}"
    write_generator(WEIGHTS_PATH, shipped, result.d, run_id)
    write_discriminator(DISC_PATH, result.discriminator, result.d, run_id)
    emit_golden_vectors(GOLDEN_PATH, shipped, count=2, seed=TRAIN_SEED + 1,
                        stages=("conv10", "output"), d=result.d, run_id=run_id)
    write_log_csv(LOG_PATH, result)
    return _read_log(LOG_PATH), result.wall_seconds


def test_training_health(trained):
    log, wall = trained
    finite = all(math.isfinite(r["loss_g"]) and math.isfinite(r["loss_d"]) for r in log)
    assert log[-1]["iteration"] == 500
    fids = {r["iteration"]: r["fid"] for r in log if math.isfinite(r["fid"])}
    fid_early = fids[10]
    fid_final = fids[500]
    halved = fid_final < 0.5 * fid_early
    budget = f", wall {wall:.0f}s < 3600s" if wall is not None else " (artifacts reused)"
    ok = finite and halved and (wall is None or wall < 3600)
    _report("training-health", ok,
            f"500 iterations, losses finite={finite}, FID {fid_early:.5f} (iter 10) -> "
            f"{fid_final:.5f} (iter 500), ratio {fid_final / fid_early:.3f} < 0.5{budget}")


def test_trained_weights_replay_in_primary_engine(trained, tmp_path):
    weights = read_weights(WEIGHTS_PATH)
    validate_generator(weights)
    golden = read_weights(GOLDEN_PATH)
    worst_name, worst_rel, n = verify_golden(weights, golden)
    rc = ganqec_main(["verify-weights", "--weights", str(WEIGHTS_PATH),
                      "--golden", str(GOLDEN_PATH)])
    ok = worst_rel <= 1e-4 and rc == 0
    _report("trained-golden-parity", ok,
            f"{n} cases, worst rel err {worst_rel:.2e} at {worst_name} <= 1e-4; CLI rc={rc}")


def test_gradient_finite_difference_20_params(tmp_path_factory):
    # back-prop vs central differences for 20 random generator parameters on
    # a frozen micro-batch, float64, discriminator held fixed
    from ganqec_trainer.geometry import encode_input
    from ganqec_trainer.networks import build_networks
    from ganqec_trainer.train import generator_loss

    layout = build_layout(3)
    records = generate_dataset(layout, DATASET_P, 2, "ml", seed=7)
    maps = lattice_maps(3)
    torch.manual_seed(5)
    generator, discriminator = build_networks()
    generator = generator.double()
    discriminator = discriminator.double().eval()
    batch = np.stack([encode_input(maps, r.syndrome, DATASET_P) for r in records])
    x = torch.from_numpy(batch).double().permute(0, 3, 1, 2)

    def loss_value():
        logits = discriminator(torch.cat([x, generator(x)], dim=1), return_logits=True)
        return generator_loss(logits)

    loss_value().backward()
    rng = np.random.default_rng(13)
    params = list(generator.parameters())
    h = 1e-5
    worst = 0.0
    checked = 0
    while checked < 20:
        param = params[rng.integers(len(params))]
        flat = param.detach().view(-1)
        idx = int(rng.integers(flat.numel()))
        grad = param.grad.view(-1)[idx].item()
        if abs(grad) < 1e-7:
            continue
        with torch.no_grad():
            orig = flat[idx].item()
            flat[idx] = orig + h
            up = loss_value().item()
            flat[idx] = orig - h
            down = loss_value().item()
            flat[idx] = orig
        fd = (up - down) / (2 * h)
        rel = abs(fd - grad) / max(abs(grad), abs(fd), 1e-6)
        worst = max(worst, rel)
        assert abs(fd - grad) <= 1e-3 * max(abs(grad), abs(fd)) + 1e-9, (grad, fd)
        checked += 1
    _report("gradient-check", True, f"20 parameters, worst relative deviation {worst:.2e} <= 1e-3")


def test_augmentation_consistency_1000_records(tmp_path_factory):
    layout = build_layout(3)
    maps = lattice_maps(3)
    records = generate_dataset(layout, 0.08, 1000, "ml", seed=23)
    rng = np.random.default_rng(1)
    ok = True
    for rec in records:
        lr, ud = bool(rng.random() < 0.5), bool(rng.random() < 0.5)
        from ganqec_trainer.geometry import TrainingRecord

        flipped = flip_record(maps, TrainingRecord(rec.error, rec.syndrome, rec.target, 0), lr, ud)
        ok &= bool(np.array_equal(compute_syndrome(layout, flipped.error), flipped.syndrome))
        ok &= bool(judge(layout, flipped.error, flipped.target).success)
        if not ok:
            break
    _report("augmentation-consistency", ok, "1000 flipped records stay valid success pairs")


def test_handoff_trained_gan_through_primary_sweep(trained, tmp_path):
    trials = 20000
    fidelities = {}
    for decoder in ("gan", "mwpm", "none"):
        out = tmp_path / f"{decoder}.csv"
        argv = ["sweep", "--d", "3", "--p", "0.01,0.05", "--trials", str(trials),
                "--decoder", decoder, "--seed", "606", "--out", str(out)]
        if decoder == "gan":
            argv += ["--weights", str(WEIGHTS_PATH)]
        assert ganqec_main(argv) == 0
        result = read_sweep_csv(out)
        fidelities[decoder] = {pt.p: pt.fidelity for pt in result.points}
    beats_baseline = all(
        fidelities["gan"][p] >= fidelities["none"][p] for p in (0.01, 0.05)
    )
    near_mwpm = abs(fidelities["gan"][0.01] - fidelities["mwpm"][0.01]) <= 0.05
    ok = beats_baseline and near_mwpm
    detail = "; ".join(
        f"p={p}: gan={fidelities['gan'][p]:.4f} mwpm={fidelities['mwpm'][p]:.4f} "
        f"none={fidelities['none'][p]:.4f}" for p in (0.01, 0.05)
    )
    _report("handoff-trained-gan", ok, detail + "; gan >= none at both, within 5pp of mwpm at p=0.01")
