import math

import pytest
import torch

from ganqec_trainer.train import discriminator_objective, generator_loss


def _logit(p: float) -> torch.Tensor:
    return torch.full((4, 1), math.log(p / (1 - p)), dtype=torch.float64)


def test_constant_half_discriminator_values():
    # D(x) = 0.5 everywhere, i.e. zero logits: per-sample values are exact
    zeros = torch.zeros(4, 1, dtype=torch.float64)
    assert generator_loss(zeros).item() == pytest.approx(-math.log(0.5), rel=1e-12)
    assert discriminator_objective(zeros, zeros).item() == pytest.approx(
        2 * math.log(0.5), rel=1e-12
    )


def test_losses_match_log_definitions():
    # softplus formulation equals -log D / log D + log(1-D) on probabilities
    for p_real, p_fake in ((0.9, 0.2), (0.6, 0.6), (0.01, 0.99)):
        lg = generator_loss(_logit(p_fake)).item()
        assert lg == pytest.approx(-math.log(p_fake), rel=1e-9)
        ld = discriminator_objective(_logit(p_real), _logit(p_fake)).item()
        assert ld == pytest.approx(math.log(p_real) + math.log(1 - p_fake), rel=1e-9)


def test_loss_directions():
    confident_real = _logit(0.99)
    confident_fake = _logit(0.01)
    # a discriminator that is right scores higher than one that is fooled
    good = discriminator_objective(confident_real, confident_fake)
    fooled = discriminator_objective(confident_fake, confident_real)
    assert good > fooled
    # generator loss falls as the discriminator is fooled
    assert generator_loss(confident_real) < generator_loss(confident_fake)


def test_losses_finite_and_grad_alive_at_saturation():
    # saturated discriminator: losses stay finite and the generator still
    # receives gradient through the fake logits
    logits = torch.full((4, 1), -40.0, requires_grad=True)
    loss = generator_loss(logits)
    assert torch.isfinite(loss)
    loss.backward()
    assert logits.grad.abs().min() > 0.1
