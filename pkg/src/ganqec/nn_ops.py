"""From-scratch forward-pass primitives for the decoder network.

Tensors are (height, width, channels) float32 numpy arrays. Convolution
kernels use the weight-file layout [out][in][kh][kw]. "same" padding is
TensorFlow-style: output spatial size ceil(in/stride), with any odd padding
going to the bottom/right edge.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .exceptions import ShapeMismatch


def _as_t3(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float32)
    if x.ndim != 3:
        raise ShapeMismatch(f"expected (h, w, c) tensor, got shape {x.shape}")
    return x


def conv2d(
    x: np.ndarray,
    kernel: np.ndarray,
    bias: np.ndarray | None = None,
    stride: int = 1,
    padding: str = "same",
) -> np.ndarray:
    """2-d convolution (cross-correlation, the deep-learning convention)."""
    x = _as_t3(x)
    kernel = np.asarray(kernel, dtype=np.float32)
    if kernel.ndim != 4:
        raise ShapeMismatch(f"kernel must be [out][in][kh][kw], got shape {kernel.shape}")
    c_out, c_in, kh, kw = kernel.shape
    h, w, c = x.shape
    if c != c_in:
        raise ShapeMismatch(f"input has {c} channels, kernel expects {c_in}")
    if padding == "same":
        out_h = -(-h // stride)
        out_w = -(-w // stride)
        pad_h = max((out_h - 1) * stride + kh - h, 0)
        pad_w = max((out_w - 1) * stride + kw - w, 0)
        x = np.pad(x, ((pad_h // 2, pad_h - pad_h // 2), (pad_w // 2, pad_w - pad_w // 2), (0, 0)))
    elif padding == "valid":
        out_h = (h - kh) // stride + 1
        out_w = (w - kw) // stride + 1
        if out_h <= 0 or out_w <= 0:
            raise ShapeMismatch(f"kernel {kh}x{kw} larger than input {h}x{w}")
    else:
        raise ValueError(f"padding must be 'same' or 'valid', got {padding!r}")
    windows = sliding_window_view(x, (kh, kw), axis=(0, 1))[::stride, ::stride]
    cols = windows.reshape(out_h * out_w, c_in * kh * kw)
    out = cols @ kernel.reshape(c_out, -1).T
    out = out.reshape(out_h, out_w, c_out)
    if bias is not None:
        bias = np.asarray(bias, dtype=np.float32)
        if bias.shape != (c_out,):
            raise ShapeMismatch(f"bias shape {bias.shape} != ({c_out},)")
        out = out + bias
    return out.astype(np.float32, copy=False)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0)


def lrelu(x: np.ndarray, alpha: float = 0.2) -> np.ndarray:
    return np.where(x > 0, x, alpha * x).astype(np.float32, copy=False)


def sigmoid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float32)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def bn_inference(
    x: np.ndarray,
    gamma: np.ndarray,
    beta: np.ndarray,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    eps: float = 1e-5,
) -> np.ndarray:
    """Per-channel batch norm in inference mode (stored statistics)."""
    x = _as_t3(x)
    c = x.shape[2]
    for name, arr in (("gamma", gamma), ("beta", beta), ("mean", running_mean), ("var", running_var)):
        if np.asarray(arr).shape != (c,):
            raise ShapeMismatch(f"bn {name} shape {np.asarray(arr).shape} != ({c},)")
    scale = (gamma / np.sqrt(running_var + eps)).astype(np.float32)
    shift = (beta - running_mean * scale).astype(np.float32)
    return x * scale + shift


def residual_block(
    x: np.ndarray,
    kernel1: np.ndarray,
    bias1: np.ndarray,
    kernel2: np.ndarray,
    bias2: np.ndarray,
) -> np.ndarray:
    """y = x + conv2(relu(conv1(x))); both convs preserve shape."""
    x = _as_t3(x)
    f = conv2d(relu(conv2d(x, kernel1, bias1)), kernel2, bias2)
    if f.shape != x.shape:
        raise ShapeMismatch(f"residual branch produced {f.shape}, input is {x.shape}")
    return x + f
