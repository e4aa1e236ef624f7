"""Shared binary containers for network weights and golden vectors.

Weight container (magic ``GQWT``), little-endian throughout::

    "GQWT" | version u32 | meta_len u32 | metadata (UTF-8 JSON)
    then per tensor record:
        name_len u16 | name bytes | kind u8 (0=conv, 1=bn, 2=fc)
        rank u8 | dims u32 x rank | payload float32 x prod(dims), row-major

Conv kernels are stored [out][in][kh][kw]. The generator and discriminator
record sequences are pinned below; loading validates names, kinds and
shapes in order and rejects anything else.

Golden-vector files reuse the container: records are named
``g{case}.{point}`` where point is ``input``, each generator stage
(``conv1``, ``res1`` .. ``res7``, ``conv9``, ``conv10`` pre-sigmoid) or
``output`` (post-sigmoid). Metadata carries ``kind: "golden"``.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .exceptions import SchemaMismatch

MAGIC = b"GQWT"
FORMAT_VERSION = 1

KIND_CONV = 0
KIND_BN = 1
KIND_FC = 2
_KIND_NAMES = {KIND_CONV: "conv", KIND_BN: "bn", KIND_FC: "fc"}


@dataclass
class Record:
    name: str
    kind: int
    data: np.ndarray  # float32, row-major

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.data.shape)


@dataclass
class ModelWeights:
    records: list[Record] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        for rec in self.records:
            if rec.name == name:
                return rec.data
        raise KeyError(name)

    def names(self) -> list[str]:
        return [rec.name for rec in self.records]


def write_weights(path, weights: ModelWeights) -> None:
    meta = json.dumps(weights.metadata, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<I", len(meta)))
        fh.write(meta)
        for rec in weights.records:
            name = rec.name.encode("utf-8")
            data = np.ascontiguousarray(rec.data, dtype="<f4")
            fh.write(struct.pack("<H", len(name)))
            fh.write(name)
            fh.write(struct.pack("<BB", rec.kind, data.ndim))
            fh.write(struct.pack(f"<{data.ndim}I", *data.shape))
            fh.write(data.tobytes())


def read_weights(path) -> ModelWeights:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise SchemaMismatch(f"bad magic {blob[:4]!r}, expected {MAGIC!r}")
    (version,) = struct.unpack_from("<I", blob, 4)
    if version != FORMAT_VERSION:
        raise SchemaMismatch(f"unsupported format version {version}")
    (meta_len,) = struct.unpack_from("<I", blob, 8)
    off = 12
    metadata = json.loads(blob[off:off + meta_len].decode("utf-8"))
    off += meta_len
    records = []
    while off < len(blob):
        (name_len,) = struct.unpack_from("<H", blob, off)
        off += 2
        name = blob[off:off + name_len].decode("utf-8")
        off += name_len
        kind, rank = struct.unpack_from("<BB", blob, off)
        off += 2
        dims = struct.unpack_from(f"<{rank}I", blob, off)
        off += 4 * rank
        count = int(np.prod(dims)) if rank else 1
        data = np.frombuffer(blob, dtype="<f4", count=count, offset=off).reshape(dims)
        off += 4 * count
        records.append(Record(name=name, kind=kind, data=data.copy()))
    return ModelWeights(records=records, metadata=metadata)


def generator_schema() -> list[tuple[str, int, tuple[int, ...]]]:
    """Expected (name, kind, shape) sequence for the generator.

    Conv1 maps the 3-channel input to 64 features, seven shape-preserving
    residual blocks follow, then a 256-feature conv and the 1-channel head.
    """
    schema = [
        ("conv1.kernel", KIND_CONV, (64, 3, 3, 3)),
        ("conv1.bias", KIND_CONV, (64,)),
    ]
    for i in range(1, 8):
        for j in (1, 2):
            schema.append((f"res{i}.conv{j}.kernel", KIND_CONV, (64, 64, 3, 3)))
            schema.append((f"res{i}.conv{j}.bias", KIND_CONV, (64,)))
    schema += [
        ("conv9.kernel", KIND_CONV, (256, 64, 3, 3)),
        ("conv9.bias", KIND_CONV, (256,)),
        ("conv10.kernel", KIND_CONV, (1, 256, 3, 3)),
        ("conv10.bias", KIND_CONV, (1,)),
    ]
    return schema


def discriminator_schema(in_channels: int = 4) -> list[tuple[str, int, tuple[int, ...]]]:
    """Expected record sequence for the conditional discriminator.

    Strided convs Conv1-6 (BN after every conv except Conv1), a residual
    path Res1 (1x1) -> Res2 -> Res3 with a 1x1 projection shortcut, then a
    fully connected layer to one logit.
    """
    convs = [
        ("conv1", 64, in_channels, 3),
        ("conv2", 128, 64, 3),
        ("conv3", 256, 128, 3),
        ("conv4", 512, 256, 3),
        ("conv5", 256, 512, 3),
        ("conv6", 128, 256, 1),
    ]
    schema = []
    for name, c_out, c_in, k in convs:
        schema.append((f"{name}.kernel", KIND_CONV, (c_out, c_in, k, k)))
        schema.append((f"{name}.bias", KIND_CONV, (c_out,)))
        if name != "conv1":
            for p in ("gamma", "beta", "mean", "var"):
                schema.append((f"{name}.bn.{p}", KIND_BN, (c_out,)))
    res = [("res1", 64, 128, 1), ("res2", 64, 64, 3), ("res3", 128, 64, 3), ("res_skip", 128, 128, 1)]
    for name, c_out, c_in, k in res:
        schema.append((f"{name}.kernel", KIND_CONV, (c_out, c_in, k, k)))
        schema.append((f"{name}.bias", KIND_CONV, (c_out,)))
        for p in ("gamma", "beta", "mean", "var"):
            schema.append((f"{name}.bn.{p}", KIND_BN, (c_out,)))
    schema.append(("fc.kernel", KIND_FC, (16 * 16 * 128, 1)))
    schema.append(("fc.bias", KIND_FC, (1,)))
    return schema


def validate_schema(weights: ModelWeights, schema) -> None:
    got = [(r.name, r.kind, r.shape) for r in weights.records]
    want = [(name, kind, shape) for name, kind, shape in schema]
    if got == want:
        return
    for i, (g, w) in enumerate(zip(got, want)):
        if g != w:
            raise SchemaMismatch(f"record {i}: have {g}, schema wants {w}")
    raise SchemaMismatch(f"record count {len(got)} != schema count {len(want)}")


def validate_generator(weights: ModelWeights) -> None:
    validate_schema(weights, generator_schema())


def _filled_generator(fill_fn) -> ModelWeights:
    records = [Record(name, kind, fill_fn(shape)) for name, kind, shape in generator_schema()]
    return ModelWeights(records=records, metadata={"d": 0, "run": "synthetic", "layers": len(records), "model": "generator"})


def zero_generator_weights(d: int = 0) -> ModelWeights:
    """All-zero generator; its output is the constant 0.5 after the sigmoid."""
    w = _filled_generator(lambda shape: np.zeros(shape, dtype=np.float32))
    w.metadata["d"] = d
    return w


def random_generator_weights(seed: int, d: int = 0, scale: float = 0.05) -> ModelWeights:
    rng = np.random.default_rng(seed)
    w = _filled_generator(lambda shape: (scale * rng.standard_normal(shape)).astype(np.float32))
    w.metadata["d"] = d
    w.metadata["run"] = f"random-{seed}"
    return w
