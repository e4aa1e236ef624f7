"""Generator and discriminator architectures.

Generator: Conv1 (3->64), seven shape-preserving residual blocks
(conv-ReLU-conv plus identity), Conv9 (64->256), Conv10 (256->1), sigmoid;
all 3x3, stride 1, ReLU after the standalone convs. Matches the inference
engine's schema record for record.

Discriminator (conditional: syndrome channels concatenated with the
correction map): strided convs Conv1-6 with BN after every conv except
Conv1 and LReLU activations, a residual path Res1 (1x1, 128->64), Res2,
Res3 (3x3, back to 128) with a 1x1 projection shortcut, then a fully
connected layer to one sigmoid unit.
"""

from __future__ import annotations

import torch
import torch.nn.functional as F
from torch import nn

LRELU_ALPHA = 0.2


class SameConv2d(nn.Conv2d):
    """Conv2d with TensorFlow-style SAME padding for any stride (odd padding
    goes to the bottom/right edge)."""

    def __init__(self, c_in, c_out, kernel_size, stride=1):
        super().__init__(c_in, c_out, kernel_size, stride=stride, padding=0)

    def forward(self, x):
        ih, iw = x.shape[-2:]
        kh, kw = self.kernel_size
        sh, sw = self.stride
        ph = max((-(-ih // sh) - 1) * sh + kh - ih, 0)
        pw = max((-(-iw // sw) - 1) * sw + kw - iw, 0)
        x = F.pad(x, (pw // 2, pw - pw // 2, ph // 2, ph - ph // 2))
        return self._conv_forward(x, self.weight, self.bias)


class ResidualBlock(nn.Module):
    def __init__(self, channels=64):
        super().__init__()
        self.conv1 = SameConv2d(channels, channels, 3)
        self.conv2 = SameConv2d(channels, channels, 3)

    def forward(self, x):
        return x + self.conv2(torch.relu(self.conv1(x)))


GENERATOR_STAGES = ("conv1", "res1", "res2", "res3", "res4", "res5", "res6", "res7",
                    "conv9", "conv10", "output")


class Generator(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv1 = SameConv2d(3, 64, 3)
        for i in range(1, 8):
            setattr(self, f"res{i}", ResidualBlock(64))
        self.conv9 = SameConv2d(64, 256, 3)
        self.conv10 = SameConv2d(256, 1, 3)
        # start the sigmoid head near the corrections' mostly-off prior with
        # moderate logits; a hard-saturated head passes no gradient back
        with torch.no_grad():
            self.conv10.weight.mul_(0.1)
            self.conv10.bias.fill_(-2.0)

    def forward(self, x, capture: dict | None = None):
        def grab(name, t):
            if capture is not None:
                capture[name] = t
            return t

        t = grab("conv1", torch.relu(self.conv1(x)))
        for i in range(1, 8):
            t = grab(f"res{i}", getattr(self, f"res{i}")(t))
        t = grab("conv9", torch.relu(self.conv9(t)))
        t = grab("conv10", self.conv10(t))
        return grab("output", torch.sigmoid(t))


class Discriminator(nn.Module):
    def __init__(self, in_channels: int = 4):
        super().__init__()
        self.conv1 = SameConv2d(in_channels, 64, 3, stride=1)
        self.conv2 = SameConv2d(64, 128, 3, stride=2)
        self.conv3 = SameConv2d(128, 256, 3, stride=2)
        self.conv4 = SameConv2d(256, 512, 3, stride=2)
        self.conv5 = SameConv2d(512, 256, 3, stride=1)
        self.conv6 = SameConv2d(256, 128, 1, stride=1)
        for name, ch in (("conv2", 128), ("conv3", 256), ("conv4", 512),
                         ("conv5", 256), ("conv6", 128)):
            setattr(self, f"{name}_bn", nn.BatchNorm2d(ch))
        self.res1 = SameConv2d(128, 64, 1)
        self.res1_bn = nn.BatchNorm2d(64)
        self.res2 = SameConv2d(64, 64, 3)
        self.res2_bn = nn.BatchNorm2d(64)
        self.res3 = SameConv2d(64, 128, 3)
        self.res3_bn = nn.BatchNorm2d(128)
        self.res_skip = SameConv2d(128, 128, 1)
        self.res_skip_bn = nn.BatchNorm2d(128)
        self.fc = nn.Linear(16 * 16 * 128, 1)

    def forward(self, x, return_logits: bool = False):
        a = LRELU_ALPHA
        t = F.leaky_relu(self.conv1(x), a)
        t = F.leaky_relu(self.conv2_bn(self.conv2(t)), a)
        t = F.leaky_relu(self.conv3_bn(self.conv3(t)), a)
        t = F.leaky_relu(self.conv4_bn(self.conv4(t)), a)
        t = F.leaky_relu(self.conv5_bn(self.conv5(t)), a)
        t = F.leaky_relu(self.conv6_bn(self.conv6(t)), a)
        branch = F.leaky_relu(self.res1_bn(self.res1(t)), a)
        branch = F.leaky_relu(self.res2_bn(self.res2(branch)), a)
        branch = self.res3_bn(self.res3(branch))
        shortcut = self.res_skip_bn(self.res_skip(t))
        t = F.leaky_relu(branch + shortcut, a)
        # flatten in (h, w, c) order to match the weight-file convention
        t = t.permute(0, 2, 3, 1).reshape(t.shape[0], -1)
        logits = self.fc(t)
        return logits if return_logits else torch.sigmoid(logits)


def build_networks(in_channels: int = 4) -> tuple[Generator, Discriminator]:
    return Generator(), Discriminator(in_channels)
