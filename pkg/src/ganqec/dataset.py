"""Training dataset generation and the GQDS container.

Each record is an (error, syndrome, target) triple where the target is a
correction that closes a trivial loop with that error, so every stored
record is a success example. Targets come from the maximum-likelihood
coset oracle (d=3 only) or from the MWPM baseline; sampled errors whose
class disagrees with the target's class are skipped and resampled, which
keeps syndrome frequencies carrying the noise distribution while storing
only decodable pairs.

File layout (little-endian)::

    "GQDS" | version u32 | d u32 | p f64 | count u64
    per record: error bits, syndrome bits, target bits (each packed
    little-endian bit order, ceil(bits/8) bytes) | source u8

Source byte: 0 = ml_oracle, 1 = mwpm.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .exceptions import DistanceTooLarge
from .homology import class_masses, judge, syndrome_to_int
from .lattice import ToricLayout, build_layout, logical_windings
from .mwpm import decode_mwpm
from .noise import sample_iid_batch
from .syndrome import compute_syndromes_batch

DS_MAGIC = b"GQDS"
DS_VERSION = 1
SOURCE_ML = 0
SOURCE_MWPM = 1
_SOURCE_NAMES = {"ml": SOURCE_ML, "ml_oracle": SOURCE_ML, "mwpm": SOURCE_MWPM}


@dataclass
class DatasetRecord:
    error: np.ndarray
    syndrome: np.ndarray
    target: np.ndarray
    source: int


def _ml_class_picks(layout: ToricLayout, p: float) -> np.ndarray:
    """argmax winding class per packed syndrome, from the exhaustive table."""
    masses = class_masses(layout, p)
    return masses.argmax(axis=1)


def _adjust_class(layout: ToricLayout, correction: np.ndarray, want_cls: int) -> np.ndarray:
    """XOR logical cycles onto a correction to move it into a target class."""
    w_h, w_v = logical_windings(layout, correction)
    have = 2 * w_h + w_v
    need = have ^ want_cls
    out = correction.copy()
    if need & 2:
        out[layout.cycle_h] ^= 1
    if need & 1:
        out[layout.cycle_v] ^= 1
    return out


def generate_dataset(
    layout: ToricLayout,
    p: float,
    count: int,
    target_source: str,
    seed: int,
) -> list[DatasetRecord]:
    """Draw records until ``count`` valid (error, target) pairs are stored.

    Attempt ``k`` uses stream ``k``, so output is reproducible byte for
    byte. ml targets need the d=3 enumeration table.
    """
    source = _SOURCE_NAMES.get(target_source)
    if source is None:
        raise ValueError(f"target_source must be 'ml' or 'mwpm', got {target_source!r}")
    if source == SOURCE_ML and layout.d > 3:
        raise DistanceTooLarge("ml_oracle targets need the exhaustive table, d=3 only")

    ml_picks = _ml_class_picks(layout, p) if source == SOURCE_ML else None
    records: list[DatasetRecord] = []
    attempt = 0
    chunk = max(256, min(8192, 2 * count))
    while len(records) < count:
        errors = sample_iid_batch(layout, p, seed, attempt, chunk)
        syndromes = compute_syndromes_batch(layout, errors)
        attempt += chunk
        for t in range(chunk):
            if len(records) >= count:
                break
            error, syndrome = errors[t], syndromes[t]
            base = decode_mwpm(layout, syndrome).correction
            if source == SOURCE_ML:
                target = _adjust_class(layout, base, int(ml_picks[syndrome_to_int(syndrome)]))
            else:
                target = base
            if judge(layout, error, target).success:
                records.append(DatasetRecord(
                    error=error.copy(), syndrome=syndrome.copy(),
                    target=target, source=source,
                ))
    return records


def _pack(bits: np.ndarray) -> bytes:
    return np.packbits(bits.astype(np.uint8), bitorder="little").tobytes()


def _unpack(blob: bytes, n_bits: int) -> np.ndarray:
    return np.unpackbits(np.frombuffer(blob, dtype=np.uint8), bitorder="little")[:n_bits]


def write_dataset(path, layout: ToricLayout, p: float, records: list[DatasetRecord]) -> None:
    with open(path, "wb") as fh:
        fh.write(DS_MAGIC)
        fh.write(struct.pack("<IId", DS_VERSION, layout.d, p))
        fh.write(struct.pack("<Q", len(records)))
        for rec in records:
            fh.write(_pack(rec.error))
            fh.write(_pack(rec.syndrome))
            fh.write(_pack(rec.target))
            fh.write(struct.pack("<B", rec.source))


def read_dataset(path):
    """Returns (layout, p, records)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != DS_MAGIC:
        raise ValueError(f"bad magic {blob[:4]!r}, expected {DS_MAGIC!r}")
    version, d, p = struct.unpack_from("<IId", blob, 4)
    if version != DS_VERSION:
        raise ValueError(f"unsupported dataset version {version}")
    (count,) = struct.unpack_from("<Q", blob, 20)
    layout = build_layout(d)
    e_bytes = (layout.n_edges + 7) // 8
    s_bytes = (layout.n_vertices + 7) // 8
    off = 28
    records = []
    for _ in range(count):
        error = _unpack(blob[off:off + e_bytes], layout.n_edges)
        off += e_bytes
        syndrome = _unpack(blob[off:off + s_bytes], layout.n_vertices)
        off += s_bytes
        target = _unpack(blob[off:off + e_bytes], layout.n_edges)
        off += e_bytes
        (source,) = struct.unpack_from("<B", blob, off)
        off += 1
        records.append(DatasetRecord(error=error, syndrome=syndrome, target=target, source=source))
    return layout, p, records
