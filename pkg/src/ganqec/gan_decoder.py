"""Network-based decoding: syndrome encoding, generator forward pass,
correction read-back and the validity-restoring projection.

The raw network output is a 128x128 map in [0, 1]. Thresholding it gives a
candidate correction which need not reproduce the syndrome, so the
candidate is projected: the leftover defects (syndrome XOR candidate
boundary, always even by linearity) are repaired with the matching
decoder. The final correction is therefore always boundary-valid, and an
all-zero network degrades exactly to the MWPM baseline (constant 0.5
output, strict > threshold, empty candidate).
"""

from __future__ import annotations

import numpy as np

from .lattice import ToricLayout
from .mwpm import DecodeOutcome, mwpm_match, pairing_to_correction
from .nn_ops import conv2d, relu, residual_block, sigmoid
from .syndrome import compute_syndrome
from .weights_io import ModelWeights, read_weights, validate_generator

IMAGE_SIZE = 128
DEFAULT_THRESHOLD = 0.5


def _grid_indices(layout: ToricLayout) -> np.ndarray:
    """Nearest-neighbor source index for each output pixel: floor(i*2d/128)."""
    side = 2 * layout.d
    return (np.arange(IMAGE_SIZE) * side) // IMAGE_SIZE


def _edge_pixels(layout: ToricLayout) -> tuple[np.ndarray, np.ndarray]:
    """Pixel (row, col) on the 2d x 2d grid for each edge index.

    Vertex (r,c) sits at pixel (2r, 2c); h(r,c) at (2r, 2c+1); v(r,c) at
    (2r+1, 2c); face (r,c) at (2r+1, 2c+1).
    """
    d = layout.d
    rows = np.empty(layout.n_edges, dtype=np.int64)
    cols = np.empty(layout.n_edges, dtype=np.int64)
    for r in range(d):
        for c in range(d):
            rows[r * d + c] = 2 * r
            cols[r * d + c] = 2 * c + 1
            rows[d * d + r * d + c] = 2 * r + 1
            cols[d * d + r * d + c] = 2 * c
    return rows, cols


def encode_syndrome(layout: ToricLayout, syndrome: np.ndarray, p: float) -> np.ndarray:
    """Syndrome as a 128x128x3 tensor.

    Channel 0 marks defective vertex pixels, channel 1 is the static edge
    position mask, channel 2 is a constant plane at the error rate; all
    three are nearest-neighbor upsampled from the 2d x 2d canonical grid.
    """
    layout.check_syndrome(syndrome)
    d = layout.d
    side = 2 * d
    grid = np.zeros((side, side, 3), dtype=np.float32)
    defect = np.flatnonzero(syndrome)
    grid[2 * (defect // d), 2 * (defect % d), 0] = 1.0
    erow, ecol = _edge_pixels(layout)
    grid[erow, ecol, 1] = 1.0
    grid[:, :, 2] = p
    idx = _grid_indices(layout)
    return grid[idx][:, idx]


def generator_forward(
    weights: ModelWeights, x: np.ndarray, capture: dict | None = None
) -> np.ndarray:
    """Run the generator: Conv1, Res1-7, Conv9, Conv10, sigmoid.

    Standalone convs are followed by ReLU; the residual branches are
    conv-ReLU-conv added to their input; the head is squashed to [0, 1].
    Optionally records each stage into ``capture`` (conv10 pre-sigmoid).
    """
    validate_generator(weights)
    if x.shape != (IMAGE_SIZE, IMAGE_SIZE, 3):
        raise ValueError(f"generator input must be (128, 128, 3), got {x.shape}")

    def grab(name, t):
        if capture is not None:
            capture[name] = t
        return t

    t = grab("conv1", relu(conv2d(x, weights["conv1.kernel"], weights["conv1.bias"])))
    for i in range(1, 8):
        t = grab(f"res{i}", residual_block(
            t,
            weights[f"res{i}.conv1.kernel"], weights[f"res{i}.conv1.bias"],
            weights[f"res{i}.conv2.kernel"], weights[f"res{i}.conv2.bias"],
        ))
    t = grab("conv9", relu(conv2d(t, weights["conv9.kernel"], weights["conv9.bias"])))
    t = grab("conv10", conv2d(t, weights["conv10.kernel"], weights["conv10.bias"]))
    return grab("output", sigmoid(t))


def read_correction(
    layout: ToricLayout, output: np.ndarray, threshold: float = DEFAULT_THRESHOLD
) -> np.ndarray:
    """Average the output over each edge pixel's preimage block; strictly
    above threshold sets the edge bit."""
    if output.shape != (IMAGE_SIZE, IMAGE_SIZE, 1):
        raise ValueError(f"expected (128, 128, 1) output, got {output.shape}")
    side = 2 * layout.d
    idx = _grid_indices(layout)
    counts = np.bincount(idx, minlength=side).astype(np.float64)
    # preimage blocks are contiguous index ranges, so reduce rows then columns
    starts = np.searchsorted(idx, np.arange(side))
    plane = output[:, :, 0].astype(np.float64)
    block = np.add.reduceat(np.add.reduceat(plane, starts, axis=0), starts, axis=1)
    means = block / np.outer(counts, counts)
    erow, ecol = _edge_pixels(layout)
    return (means[erow, ecol] > threshold).astype(np.uint8)


def project_correction(
    layout: ToricLayout, candidate: np.ndarray, syndrome: np.ndarray
) -> np.ndarray:
    """Repair a candidate so its boundary matches the syndrome exactly."""
    layout.check_pattern(candidate)
    layout.check_syndrome(syndrome)
    mismatch = syndrome ^ compute_syndrome(layout, candidate)
    if not mismatch.any():
        return candidate
    repair = pairing_to_correction(layout, mwpm_match(layout, mismatch))
    return candidate ^ repair


def decode_gan(
    layout: ToricLayout,
    weights: ModelWeights,
    syndrome: np.ndarray,
    p: float,
    threshold: float = DEFAULT_THRESHOLD,
    error: np.ndarray | None = None,
) -> DecodeOutcome:
    """encode -> forward -> read-back -> projection (-> judge with error)."""
    x = encode_syndrome(layout, syndrome, p)
    raw = generator_forward(weights, x)
    candidate = read_correction(layout, raw, threshold)
    correction = project_correction(layout, candidate, syndrome)
    outcome = DecodeOutcome(correction=correction, valid=True)
    if error is not None:
        from .homology import judge

        outcome = judge(layout, error, correction)
    return outcome


class CachedGanDecoder:
    """Syndrome-keyed memo around :func:`decode_gan` for Monte Carlo use.

    The network is deterministic per (syndrome, p), so sweeps only pay for
    one forward pass per distinct syndrome (at most 2^(d*d-1) of them).
    """

    def __init__(self, layout: ToricLayout, weights: ModelWeights, p: float,
                 threshold: float = DEFAULT_THRESHOLD):
        validate_generator(weights)
        self.layout = layout
        self.weights = weights
        self.p = p
        self.threshold = threshold
        self._cache: dict[bytes, np.ndarray] = {}

    def __call__(self, syndrome: np.ndarray) -> np.ndarray:
        key = syndrome.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            hit = decode_gan(self.layout, self.weights, syndrome, self.p, self.threshold).correction
            self._cache[key] = hit
        return hit


def verify_golden(weights: ModelWeights, golden: ModelWeights, tol: float = 1e-4):
    """Replay golden vectors; returns (worst_name, worst_rel_err, n_cases).

    Relative error per tensor is max|a-b| / max(max|ref|, 1), so tensors
    that live in [0, 1] are held to an absolute 1e-4.
    """
    cases: dict[str, dict[str, np.ndarray]] = {}
    for rec in golden.records:
        case, _, point = rec.name.partition(".")
        cases.setdefault(case, {})[point] = rec.data
    worst = ("", 0.0)
    for case, points in sorted(cases.items()):
        if "input" not in points:
            raise ValueError(f"golden case {case} has no input tensor")
        capture: dict[str, np.ndarray] = {}
        generator_forward(weights, points["input"].astype(np.float32), capture)
        for point, ref in points.items():
            if point == "input":
                continue
            if point not in capture:
                raise ValueError(f"golden case {case} references unknown stage {point!r}")
            err = float(np.max(np.abs(capture[point] - ref)))
            rel = err / max(float(np.max(np.abs(ref))), 1.0)
            if rel > worst[1]:
                worst = (f"{case}.{point}", rel)
    return worst[0], worst[1], len(cases)
