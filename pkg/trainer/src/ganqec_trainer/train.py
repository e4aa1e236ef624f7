"""Adversarial training loop.

Alternates one discriminator ascent step on (real, generated) pairs with
one generator step on the non-saturating objective:

    L_G = -mean log D(G(x))                 (minimized)
    L_D =  mean [log D(y) + log(1 - D(G(x)))]   (maximized)

The discriminator is conditional: it sees the three syndrome channels
concatenated with the correction map, real pairs coming from the dataset's
trivial-loop targets. Momentum optimizer with decay 0.5/0.999 at learning
rate 0.002, batch 4, mirror-flip augmentation at probability 0.25 per axis
applied consistently to syndrome and target.
"""

from __future__ import annotations

import copy
import math
import time
from dataclasses import dataclass, field

import numpy as np
import torch

from .errors import DivergenceDetected
from .fid import FeatureExtractor, FidReport, fid
from .geometry import encode_input, encode_target, flip_record, lattice_maps, load_dataset
from .networks import build_networks

DEFAULT_ITERATIONS = {3: 500, 5: 1800}


@dataclass
class TrainConfig:
    learning_rate: float = 0.002
    batch_size: int = 4
    flip_prob: float = 0.25
    iterations: int | None = None  # None: 500 at d=3, 1800 at d=5
    beta1: float = 0.5
    beta2: float = 0.999
    seed: int = 0
    fid_every: int = 50
    fid_samples: int = 64
    # L2 penalty on the generator's pre-sigmoid map during training. The
    # corrections are nearly all-black, so the adversarial push drives the
    # head logits deep negative where the sigmoid passes no gradient back
    # and training freezes; this keeps the head responsive. Logged losses
    # stay the pure adversarial terms. 0 disables.
    logit_reg: float = 1e-3

    def __post_init__(self):
        for name in ("learning_rate", "flip_prob", "beta1", "beta2"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {v}")
        if self.iterations is not None and self.iterations < 1:
            raise ValueError("iteration budget must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.logit_reg < 0:
            raise ValueError("logit_reg must be >= 0")

    def resolve_iterations(self, d: int) -> int:
        if self.iterations is not None:
            return self.iterations
        return DEFAULT_ITERATIONS.get(d, 500)


@dataclass
class LogRow:
    iteration: int
    loss_g: float
    loss_d: float
    fid: float = math.nan


@dataclass
class TrainResult:
    d: int
    p: float
    generator: torch.nn.Module           # state after the full budget
    discriminator: torch.nn.Module
    best_generator: torch.nn.Module | None = None  # lowest-FID checkpoint
    best_iteration: int = 0
    best_fid: float = math.inf
    log: list[LogRow] = field(default_factory=list)
    fid_reports: list[FidReport] = field(default_factory=list)
    wall_seconds: float = 0.0


class _Batcher:
    """Deterministic batch sampler with consistent flip augmentation."""

    def __init__(self, maps, records, p, config):
        self.maps = maps
        self.records = records
        self.p = p
        self.config = config
        self.rng = np.random.default_rng(config.seed)

    def sample(self, n):
        idx = self.rng.integers(0, len(self.records), size=n)
        flips = self.rng.random((n, 2)) < self.config.flip_prob
        inputs = np.empty((n, 128, 128, 3), dtype=np.float32)
        targets = np.empty((n, 128, 128, 1), dtype=np.float32)
        for k, (i, (lr, ud)) in enumerate(zip(idx, flips)):
            rec = flip_record(self.maps, self.records[i], bool(lr), bool(ud))
            inputs[k] = encode_input(self.maps, rec.syndrome, self.p)
            targets[k] = encode_target(self.maps, rec.target)
        return _to_nchw(inputs), _to_nchw(targets)


def _to_nchw(batch_hwc: np.ndarray) -> torch.Tensor:
    t = torch.from_numpy(batch_hwc).permute(0, 3, 1, 2)
    return t.contiguous(memory_format=torch.channels_last)


def _eval_fid(generator, extractor, eval_inputs, eval_targets, batch: int = 16) -> float:
    generator.eval()
    outs = []
    with torch.no_grad():
        for k in range(0, len(eval_inputs), batch):
            outs.append(generator(eval_inputs[k:k + batch]))
    generator.train()
    return fid(eval_targets, torch.cat(outs), extractor)


def generator_loss(fake_logits: torch.Tensor) -> torch.Tensor:
    """-mean log D(fake), from discriminator logits.

    softplus(-l) = -log sigmoid(l) exactly, and unlike a clamped log it
    keeps a gradient when the discriminator saturates.
    """
    return torch.nn.functional.softplus(-fake_logits).mean()


def discriminator_objective(real_logits: torch.Tensor, fake_logits: torch.Tensor) -> torch.Tensor:
    """mean [log D(real) + log(1 - D(fake))], from logits (maximized)."""
    return -(torch.nn.functional.softplus(-real_logits)
             + torch.nn.functional.softplus(fake_logits)).mean()


def train(dataset_path, config: TrainConfig, progress=None) -> TrainResult:
    d, p, records = load_dataset(dataset_path)
    if not records:
        raise ValueError("dataset is empty")
    maps = lattice_maps(d)
    torch.manual_seed(config.seed)
    generator, discriminator = build_networks(in_channels=4)
    generator = generator.to(memory_format=torch.channels_last)
    discriminator = discriminator.to(memory_format=torch.channels_last)
    opt_g = torch.optim.Adam(generator.parameters(), lr=config.learning_rate,
                             betas=(config.beta1, config.beta2))
    opt_d = torch.optim.Adam(discriminator.parameters(), lr=config.learning_rate,
                             betas=(config.beta1, config.beta2))
    batcher = _Batcher(maps, records, p, config)
    extractor = FeatureExtractor()

    # fixed evaluation set for FID: the first records, no augmentation
    n_eval = min(config.fid_samples, len(records))
    eval_inputs = _to_nchw(np.stack(
        [encode_input(maps, rec.syndrome, p) for rec in records[:n_eval]]))
    eval_targets = _to_nchw(np.stack(
        [encode_target(maps, rec.target) for rec in records[:n_eval]]))

    iterations = config.resolve_iterations(d)
    fid_points = {min(10, iterations), iterations}
    fid_points.update(range(config.fid_every, iterations + 1, config.fid_every))

    result = TrainResult(d=d, p=p, generator=generator, discriminator=discriminator)
    t0 = time.time()
    for it in range(1, iterations + 1):
        inputs, targets = batcher.sample(config.batch_size)

        # discriminator ascent step
        with torch.no_grad():
            fake = generator(inputs)
        real_logits = discriminator(torch.cat([inputs, targets], dim=1), return_logits=True)
        fake_logits = discriminator(torch.cat([inputs, fake], dim=1), return_logits=True)
        l_d = discriminator_objective(real_logits, fake_logits)
        opt_d.zero_grad(set_to_none=True)
        (-l_d).backward()
        opt_d.step()

        # generator descent on the non-saturating loss (+ head regularizer)
        capture = {}
        fake = generator(inputs, capture)
        fake_logits = discriminator(torch.cat([inputs, fake], dim=1), return_logits=True)
        l_g = generator_loss(fake_logits)
        total_g = l_g + config.logit_reg * capture["conv10"].square().mean()
        opt_g.zero_grad(set_to_none=True)
        total_g.backward()
        opt_g.step()

        loss_g = float(l_g.detach())
        loss_d = float(l_d.detach())
        if not (math.isfinite(loss_g) and math.isfinite(loss_d)):
            raise DivergenceDetected(f"non-finite loss at iteration {it}: "
                                     f"L_G={loss_g}, L_D={loss_d}")
        row = LogRow(iteration=it, loss_g=loss_g, loss_d=loss_d)
        if it in fid_points and n_eval >= 16:
            row.fid = _eval_fid(generator, extractor, eval_inputs, eval_targets)
            result.fid_reports.append(FidReport(iteration=it, value=row.fid))
            # adversarial dynamics cycle; keep the best-validated state so
            # the exported decoder is the run's best, not the last
            if row.fid < result.best_fid:
                result.best_fid = row.fid
                result.best_iteration = it
                result.best_generator = copy.deepcopy(generator)
        result.log.append(row)
        if progress is not None and (it % 10 == 0 or it == 1 or it in fid_points):
            progress(f"iter {it}/{iterations} L_G={loss_g:.4f} L_D={loss_d:.4f}"
                     + (f" FID={row.fid:.4f}" if math.isfinite(row.fid) else ""))
    result.wall_seconds = time.time() - t0
    return result


def write_log_csv(path, result: TrainResult) -> None:
    lines = ["iteration,loss_g,loss_d,fid"]
    for row in result.log:
        fid_txt = f"{row.fid:.10g}" if math.isfinite(row.fid) else ""
        lines.append(f"{row.iteration},{row.loss_g:.10g},{row.loss_d:.10g},{fid_txt}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
