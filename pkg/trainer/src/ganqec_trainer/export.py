"""GQWT container writer and golden-vector emission.

Writes the shared weight format from its documented layout (magic
``GQWT``, version u32, JSON metadata, then name/kind/dims/float32 payload
records; conv kernels [out][in][kh][kw]); the inference engine on the
other side of the contract has its own reader.
"""

from __future__ import annotations

import json
import struct

import numpy as np
import torch

from .networks import Discriminator, Generator

MAGIC = b"GQWT"
VERSION = 1
KIND_CONV = 0
KIND_BN = 1
KIND_FC = 2

GOLDEN_STAGES = ("conv1", "res4", "res7", "conv10", "output")


def write_container(path, metadata: dict, records) -> None:
    """records: iterable of (name, kind, float32 ndarray)."""
    meta = json.dumps(metadata, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, len(meta)))
        fh.write(meta)
        for name, kind, data in records:
            arr = np.ascontiguousarray(data, dtype="<f4")
            encoded = name.encode("utf-8")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack("<BB", kind, arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            fh.write(arr.tobytes())


def _conv_pair(name: str, module) -> list:
    weight = module.weight.detach().cpu().contiguous().numpy()
    bias = module.bias.detach().cpu().numpy()
    return [(f"{name}.kernel", KIND_CONV, weight), (f"{name}.bias", KIND_CONV, bias)]


def generator_records(model: Generator) -> list:
    records = _conv_pair("conv1", model.conv1)
    for i in range(1, 8):
        block = getattr(model, f"res{i}")
        records += _conv_pair(f"res{i}.conv1", block.conv1)
        records += _conv_pair(f"res{i}.conv2", block.conv2)
    records += _conv_pair("conv9", model.conv9)
    records += _conv_pair("conv10", model.conv10)
    return records


def _bn_records(name: str, bn) -> list:
    return [
        (f"{name}.bn.gamma", KIND_BN, bn.weight.detach().cpu().numpy()),
        (f"{name}.bn.beta", KIND_BN, bn.bias.detach().cpu().numpy()),
        (f"{name}.bn.mean", KIND_BN, bn.running_mean.detach().cpu().numpy()),
        (f"{name}.bn.var", KIND_BN, bn.running_var.detach().cpu().numpy()),
    ]


def discriminator_records(model: Discriminator) -> list:
    records = []
    for name in ("conv1", "conv2", "conv3", "conv4", "conv5", "conv6"):
        records += _conv_pair(name, getattr(model, name))
        if name != "conv1":
            records += _bn_records(name, getattr(model, f"{name}_bn"))
    for name in ("res1", "res2", "res3", "res_skip"):
        records += _conv_pair(name, getattr(model, name))
        records += _bn_records(name, getattr(model, f"{name}_bn"))
    # fc weight stored (n_in, 1) over (h, w, c)-ordered inputs, as documented
    fc_weight = model.fc.weight.detach().cpu().numpy().T.copy()
    records.append(("fc.kernel", KIND_FC, fc_weight))
    records.append(("fc.bias", KIND_FC, model.fc.bias.detach().cpu().numpy()))
    return records


def write_generator(path, model: Generator, d: int, run_id: str) -> None:
    records = generator_records(model)
    metadata = {"d": d, "run": run_id, "layers": len(records), "model": "generator"}
    write_container(path, metadata, records)


def write_discriminator(path, model: Discriminator, d: int, run_id: str) -> None:
    records = discriminator_records(model)
    metadata = {"d": d, "run": run_id, "layers": len(records), "model": "discriminator"}
    write_container(path, metadata, records)


@torch.no_grad()
def emit_golden_vectors(path, model: Generator, count: int, seed: int,
                        stages=GOLDEN_STAGES, d: int = 0, run_id: str = "") -> None:
    """Fixed-seed inputs with recorded stage outputs, for cross-engine replay.

    Inputs are uniform [0, 1) tensors in the engine's (h, w, c) layout;
    stages are stored in the same layout. ``conv10`` is pre-sigmoid,
    ``output`` post-sigmoid.
    """
    rng = np.random.default_rng(seed)
    model.eval()
    records = []
    for case in range(count):
        x_hwc = rng.random((128, 128, 3)).astype(np.float32)
        records.append((f"g{case}.input", KIND_CONV, x_hwc))
        x = torch.from_numpy(x_hwc).permute(2, 0, 1).unsqueeze(0)
        capture: dict[str, torch.Tensor] = {}
        model(x, capture)
        for stage in stages:
            out = capture[stage][0].permute(1, 2, 0).contiguous().numpy()
            records.append((f"g{case}.{stage}", KIND_CONV, out))
    metadata = {"d": d, "run": run_id, "layers": len(records),
                "kind": "golden", "cases": count}
    write_container(path, metadata, records)
