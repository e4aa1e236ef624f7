import math

import pytest
import torch

from ganqec.weights_io import read_weights, validate_generator

from ganqec_trainer.export import write_generator
from ganqec_trainer.train import TrainConfig, train


def test_config_validation():
    TrainConfig()
    with pytest.raises(ValueError):
        TrainConfig(learning_rate=0.0)
    with pytest.raises(ValueError):
        TrainConfig(flip_prob=1.0)
    with pytest.raises(ValueError):
        TrainConfig(iterations=0)
    assert TrainConfig().resolve_iterations(3) == 500
    assert TrainConfig().resolve_iterations(5) == 1800
    assert TrainConfig(iterations=7).resolve_iterations(3) == 7


def test_short_training_run_smoke(small_dataset, tmp_path):
    config = TrainConfig(iterations=6, seed=1, fid_every=1000, fid_samples=16)
    result = train(small_dataset, config)
    assert len(result.log) == 6
    assert all(math.isfinite(r.loss_g) and math.isfinite(r.loss_d) for r in result.log)
    # FID measured at iteration min(10, budget) = 6 and at the end (same here)
    assert len(result.fid_reports) == 1
    assert math.isfinite(result.fid_reports[0].value)

    path = tmp_path / "short.gqwt"
    write_generator(path, result.generator, result.d, "smoke")
    validate_generator(read_weights(path))


def test_training_is_deterministic(small_dataset):
    config = TrainConfig(iterations=3, seed=9, fid_every=1000, fid_samples=16)
    a = train(small_dataset, config)
    b = train(small_dataset, config)
    assert [(r.loss_g, r.loss_d) for r in a.log] == [(r.loss_g, r.loss_d) for r in b.log]


def test_gradient_matches_finite_differences(small_dataset):
    # back-propagated dL_G/dtheta vs central differences on a frozen batch,
    # in float64 with the discriminator held fixed
    from ganqec_trainer.geometry import encode_input, lattice_maps, load_dataset
    from ganqec_trainer.networks import build_networks
    from ganqec_trainer.train import generator_loss
    import numpy as np

    d, p, records = load_dataset(small_dataset)
    maps = lattice_maps(d)
    torch.manual_seed(11)
    generator, discriminator = build_networks()
    generator = generator.double()
    discriminator = discriminator.double().eval()

    batch = np.stack([encode_input(maps, rec.syndrome, p) for rec in records[:2]])
    x = torch.from_numpy(batch).double().permute(0, 3, 1, 2)

    def loss_value():
        fake = generator(x)
        logits = discriminator(torch.cat([x, fake], dim=1), return_logits=True)
        return generator_loss(logits)

    loss = loss_value()
    loss.backward()

    rng = np.random.default_rng(3)
    params = list(generator.parameters())
    checked = 0
    h = 1e-5
    while checked < 5:
        param = params[rng.integers(len(params))]
        flat = param.detach().view(-1)
        idx = int(rng.integers(flat.numel()))
        grad = param.grad.view(-1)[idx].item()
        if abs(grad) < 1e-8:
            continue
        with torch.no_grad():
            orig = flat[idx].item()
            flat[idx] = orig + h
            up = loss_value().item()
            flat[idx] = orig - h
            down = loss_value().item()
            flat[idx] = orig
        fd = (up - down) / (2 * h)
        # 1e-3 relative with an absolute floor at central-difference noise
        # scale (truncation ~ h^2), so near-zero gradients stay checkable
        assert abs(fd - grad) <= 1e-3 * max(abs(grad), abs(fd)) + 1e-9, (checked, grad, fd)
        checked += 1
