import torch

from ganqec_trainer.networks import Discriminator, Generator, SameConv2d, build_networks


def test_generator_stage_shapes():
    g = Generator()
    x = torch.zeros(2, 3, 128, 128)
    capture = {}
    out = g(x, capture)
    assert out.shape == (2, 1, 128, 128)
    assert capture["conv1"].shape == (2, 64, 128, 128)
    for i in range(1, 8):
        assert capture[f"res{i}"].shape == (2, 64, 128, 128)
    assert capture["conv9"].shape == (2, 256, 128, 128)
    assert capture["conv10"].shape == (2, 1, 128, 128)


def test_zero_generator_outputs_half():
    g = Generator()
    with torch.no_grad():
        for p in g.parameters():
            p.zero_()
    out = g(torch.rand(1, 3, 128, 128))
    assert torch.allclose(out, torch.full_like(out, 0.5))


def test_discriminator_stage_shapes():
    d = Discriminator(in_channels=4)
    shapes = {}

    def hook(name):
        def fn(_m, _inp, out):
            shapes[name] = tuple(out.shape)
        return fn

    for name in ("conv1", "conv2", "conv3", "conv4", "conv5", "conv6"):
        getattr(d, name).register_forward_hook(hook(name))
    d.eval()
    out = d(torch.rand(2, 4, 128, 128))
    assert shapes["conv1"] == (2, 64, 128, 128)
    assert shapes["conv2"] == (2, 128, 64, 64)
    assert shapes["conv3"] == (2, 256, 32, 32)
    assert shapes["conv4"] == (2, 512, 16, 16)
    assert shapes["conv5"] == (2, 256, 16, 16)
    assert shapes["conv6"] == (2, 128, 16, 16)
    assert out.shape == (2, 1)
    assert ((out > 0) & (out < 1)).all()


def test_same_conv_stride_shapes():
    conv = SameConv2d(8, 16, 3, stride=2)
    assert conv(torch.zeros(1, 8, 128, 128)).shape == (1, 16, 64, 64)
    assert conv(torch.zeros(1, 8, 13, 7)).shape == (1, 16, 7, 4)
    conv1 = SameConv2d(8, 16, 3, stride=1)
    assert conv1(torch.zeros(1, 8, 11, 11)).shape == (1, 16, 11, 11)


def test_build_networks():
    g, d = build_networks()
    assert isinstance(g, Generator) and isinstance(d, Discriminator)
