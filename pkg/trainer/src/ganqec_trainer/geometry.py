"""Lattice conventions and file formats, implemented from their documented
definitions (independent of the decoder package, which is the other side
of the contract).

Edge indexing on the distance-d torus: horizontal edge h(r,c) = r*d + c,
vertical edge v(r,c) = d*d + r*d + c; vertex (r,c) = r*d + c. Pixel
embedding on the 2d x 2d grid: vertex (r,c) at (2r, 2c), h at (2r, 2c+1),
v at (2r+1, 2c), face at (2r+1, 2c+1); images are nearest-neighbor
upsampled to 128 x 128 with source index floor(i * 2d / 128).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

IMAGE_SIZE = 128
DS_MAGIC = b"GQDS"


@dataclass(frozen=True)
class LatticeMaps:
    d: int
    edge_rows: np.ndarray    # pixel row of each edge on the 2d x 2d grid
    edge_cols: np.ndarray
    upsample_idx: np.ndarray  # 128 -> 2d source index
    flip_lr_edges: np.ndarray  # involutive permutations
    flip_lr_checks: np.ndarray
    flip_ud_edges: np.ndarray
    flip_ud_checks: np.ndarray

    @property
    def n_edges(self) -> int:
        return 2 * self.d * self.d

    @property
    def n_checks(self) -> int:
        return self.d * self.d


def lattice_maps(d: int) -> LatticeMaps:
    d2 = d * d

    def h(r, c):
        return (r % d) * d + (c % d)

    def v(r, c):
        return d2 + (r % d) * d + (c % d)

    edge_rows = np.empty(2 * d2, dtype=np.int64)
    edge_cols = np.empty(2 * d2, dtype=np.int64)
    for r in range(d):
        for c in range(d):
            edge_rows[h(r, c)] = 2 * r
            edge_cols[h(r, c)] = 2 * c + 1
            edge_rows[v(r, c)] = 2 * r + 1
            edge_cols[v(r, c)] = 2 * c

    upsample_idx = (np.arange(IMAGE_SIZE) * 2 * d) // IMAGE_SIZE

    # mirror about column 0 (c -> -c) and about row 0 (r -> -r); both are
    # lattice automorphisms, so syndrome/target pairs stay consistent
    flip_lr_edges = np.empty(2 * d2, dtype=np.int64)
    flip_ud_edges = np.empty(2 * d2, dtype=np.int64)
    flip_lr_checks = np.empty(d2, dtype=np.int64)
    flip_ud_checks = np.empty(d2, dtype=np.int64)
    for r in range(d):
        for c in range(d):
            flip_lr_checks[r * d + c] = r * d + (-c) % d
            flip_ud_checks[r * d + c] = ((-r) % d) * d + c
            flip_lr_edges[h(r, c)] = h(r, -c - 1)
            flip_lr_edges[v(r, c)] = v(r, -c)
            flip_ud_edges[h(r, c)] = h(-r, c)
            flip_ud_edges[v(r, c)] = v(-r - 1, c)
    return LatticeMaps(
        d=d,
        edge_rows=edge_rows,
        edge_cols=edge_cols,
        upsample_idx=upsample_idx,
        flip_lr_edges=flip_lr_edges,
        flip_lr_checks=flip_lr_checks,
        flip_ud_edges=flip_ud_edges,
        flip_ud_checks=flip_ud_checks,
    )


def encode_input(maps: LatticeMaps, syndrome: np.ndarray, p: float) -> np.ndarray:
    """Generator input (128, 128, 3): defects, edge mask, error-rate plane."""
    d = maps.d
    side = 2 * d
    grid = np.zeros((side, side, 3), dtype=np.float32)
    defect = np.flatnonzero(syndrome)
    grid[2 * (defect // d), 2 * (defect % d), 0] = 1.0
    grid[maps.edge_rows, maps.edge_cols, 1] = 1.0
    grid[:, :, 2] = p
    idx = maps.upsample_idx
    return grid[idx][:, idx]


def encode_target(maps: LatticeMaps, target: np.ndarray) -> np.ndarray:
    """Target correction as a (128, 128, 1) edge-pixel image."""
    side = 2 * maps.d
    grid = np.zeros((side, side, 1), dtype=np.float32)
    on = np.flatnonzero(target)
    grid[maps.edge_rows[on], maps.edge_cols[on], 0] = 1.0
    idx = maps.upsample_idx
    return grid[idx][:, idx]


@dataclass
class TrainingRecord:
    error: np.ndarray
    syndrome: np.ndarray
    target: np.ndarray
    source: int


def load_dataset(path):
    """Read a GQDS dataset file; returns (d, p, records)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != DS_MAGIC:
        raise ValueError(f"not a GQDS file: magic {blob[:4]!r}")
    version, d, p = struct.unpack_from("<IId", blob, 4)
    if version != 1:
        raise ValueError(f"unsupported GQDS version {version}")
    (count,) = struct.unpack_from("<Q", blob, 20)
    n_edges = 2 * d * d
    n_checks = d * d
    e_bytes = (n_edges + 7) // 8
    s_bytes = (n_checks + 7) // 8
    off = 28
    records = []
    for _ in range(count):
        error = np.unpackbits(np.frombuffer(blob, np.uint8, e_bytes, off),
                              bitorder="little")[:n_edges]
        off += e_bytes
        syndrome = np.unpackbits(np.frombuffer(blob, np.uint8, s_bytes, off),
                                 bitorder="little")[:n_checks]
        off += s_bytes
        target = np.unpackbits(np.frombuffer(blob, np.uint8, e_bytes, off),
                               bitorder="little")[:n_edges]
        off += e_bytes
        (source,) = struct.unpack_from("<B", blob, off)
        off += 1
        records.append(TrainingRecord(error, syndrome, target, source))
    return d, p, records


def flip_record(maps: LatticeMaps, rec: TrainingRecord, lr: bool, ud: bool) -> TrainingRecord:
    """Apply mirror flips consistently to error, syndrome and target."""
    error, syndrome, target = rec.error, rec.syndrome, rec.target
    if lr:
        error = error[maps.flip_lr_edges]
        syndrome = syndrome[maps.flip_lr_checks]
        target = target[maps.flip_lr_edges]
    if ud:
        error = error[maps.flip_ud_edges]
        syndrome = syndrome[maps.flip_ud_checks]
        target = target[maps.flip_ud_edges]
    return TrainingRecord(error, syndrome, target, rec.source)
