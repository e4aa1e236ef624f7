"""Periodic d x d toric lattice: qubit indexing, incidence, windings.

Qubits live on edges, one check per vertex, one per face. A single error
species is simulated per lattice; the dual species reuses the same layout
through the edge permutation in :attr:`ToricLayout.dual_to_primal`.

Indexing convention (fixed so serialized bit-sets are well defined):

* horizontal edge ``h(r, c)`` has index ``r*d + c`` and joins vertices
  ``(r, c)`` and ``(r, (c+1) % d)``;
* vertical edge ``v(r, c)`` has index ``d*d + r*d + c`` and joins
  ``(r, c)`` and ``((r+1) % d, c)``;
* vertex ``(r, c)`` has index ``r*d + c``; its star is
  ``{h(r,c), h(r,(c-1)%d), v(r,c), v((r-1)%d,c)}``;
* face ``(r, c)`` has index ``r*d + c``; its boundary is
  ``{h(r,c), h((r+1)%d,c), v(r,c), v(r,(c+1)%d)}``.

Error patterns, corrections and syndromes are plain ``uint8`` numpy arrays
over these indices (length ``2*d*d`` for edge sets, ``d*d`` for check sets);
XOR of two patterns is again a pattern.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidDistance, SizeMismatch


@dataclass(frozen=True)
class ToricLayout:
    """Immutable geometry tables for one code distance."""

    d: int
    vertex_edges: np.ndarray = field(repr=False)  # (d*d, 4) star of each vertex
    face_edges: np.ndarray = field(repr=False)    # (d*d, 4) boundary of each face
    cut_h: np.ndarray = field(repr=False)  # transversal cut detecting horizontal winding
    cut_v: np.ndarray = field(repr=False)  # transversal cut detecting vertical winding
    cycle_h: np.ndarray = field(repr=False)  # logical support: row 0 of horizontal edges
    cycle_v: np.ndarray = field(repr=False)  # logical support: column 0 of vertical edges
    dual_to_primal: np.ndarray = field(repr=False)  # dual edge index -> primal edge index

    @property
    def n_edges(self) -> int:
        return 2 * self.d * self.d

    @property
    def n_vertices(self) -> int:
        return self.d * self.d

    @property
    def n_faces(self) -> int:
        return self.d * self.d

    @property
    def n_independent_stabilizers(self) -> int:
        # one vertex and one face generator are products of the others
        return 2 * self.d * self.d - 2

    @property
    def n_logical_qubits(self) -> int:
        return 2

    def h_index(self, r: int, c: int) -> int:
        return (r % self.d) * self.d + (c % self.d)

    def v_index(self, r: int, c: int) -> int:
        return self.d * self.d + (r % self.d) * self.d + (c % self.d)

    def vertex_index(self, r: int, c: int) -> int:
        return (r % self.d) * self.d + (c % self.d)

    def edge_coords(self, e: int) -> tuple[str, int, int]:
        """Inverse of the edge indexing: ('h'|'v', row, col)."""
        d2 = self.d * self.d
        if e < d2:
            return "h", e // self.d, e % self.d
        e -= d2
        return "v", e // self.d, e % self.d

    def empty_pattern(self) -> np.ndarray:
        return np.zeros(self.n_edges, dtype=np.uint8)

    def empty_syndrome(self) -> np.ndarray:
        return np.zeros(self.n_vertices, dtype=np.uint8)

    def face_boundary(self, r: int, c: int) -> np.ndarray:
        pattern = self.empty_pattern()
        pattern[self.face_edges[self.vertex_index(r, c)]] ^= 1
        return pattern

    def check_pattern(self, pattern: np.ndarray) -> None:
        if pattern.shape != (self.n_edges,):
            raise SizeMismatch(
                f"pattern has shape {pattern.shape}, layout d={self.d} needs ({self.n_edges},)"
            )

    def check_syndrome(self, syndrome: np.ndarray) -> None:
        if syndrome.shape != (self.n_vertices,):
            raise SizeMismatch(
                f"syndrome has shape {syndrome.shape}, layout d={self.d} needs ({self.n_vertices},)"
            )


def build_layout(d: int) -> ToricLayout:
    """Build the layout for odd code distance ``d >= 3``."""
    if d < 3 or d % 2 == 0:
        raise InvalidDistance(f"code distance must be an odd integer >= 3, got {d}")

    d2 = d * d

    def h(r, c):
        return (r % d) * d + (c % d)

    def v(r, c):
        return d2 + (r % d) * d + (c % d)

    vertex_edges = np.empty((d2, 4), dtype=np.int32)
    face_edges = np.empty((d2, 4), dtype=np.int32)
    for r in range(d):
        for c in range(d):
            vertex_edges[r * d + c] = (h(r, c), h(r, c - 1), v(r, c), v(r - 1, c))
            face_edges[r * d + c] = (h(r, c), h(r + 1, c), v(r, c), v(r, c + 1))

    # A pattern's horizontal winding parity is its crossing count with a fixed
    # vertical cut line, i.e. the horizontal edges of column 0; a full row of
    # horizontal edges crosses it exactly once. Likewise the vertical winding
    # is read off the vertical edges of row 0. Both cuts meet every face
    # boundary an even number of times, so they are invariant on cosets.
    cut_h = np.array([h(r, 0) for r in range(d)], dtype=np.int32)
    cut_v = np.array([v(0, c) for c in range(d)], dtype=np.int32)

    # Canonical nontrivial cycles: winding class (1,0) and (0,1) respectively.
    cycle_h = np.array([h(0, c) for c in range(d)], dtype=np.int32)
    cycle_v = np.array([v(r, 0) for r in range(d)], dtype=np.int32)

    # Dual lattice: dual vertex (r,c) = face (r,c). The dual edge joining
    # faces (r,c)-(r,c+1) is the primal edge they share, v(r,c+1); the dual
    # edge joining faces (r,c)-(r+1,c) is h(r+1,c). Under this permutation
    # the dual vertex stars coincide with the primal face boundaries, so the
    # face-check species decodes on the same layout.
    dual_to_primal = np.empty(2 * d2, dtype=np.int32)
    for r in range(d):
        for c in range(d):
            dual_to_primal[r * d + c] = v(r, c + 1)        # dual h(r,c)
            dual_to_primal[d2 + r * d + c] = h(r + 1, c)   # dual v(r,c)

    for arr in (vertex_edges, face_edges, cut_h, cut_v, cycle_h, cycle_v, dual_to_primal):
        arr.flags.writeable = False

    return ToricLayout(
        d=d,
        vertex_edges=vertex_edges,
        face_edges=face_edges,
        cut_h=cut_h,
        cut_v=cut_v,
        cycle_h=cycle_h,
        cycle_v=cycle_v,
        dual_to_primal=dual_to_primal,
    )


def logical_windings(layout: ToricLayout, pattern: np.ndarray) -> tuple[int, int]:
    """Winding parities (w_h, w_v) of a pattern against the fixed cuts.

    For zero-syndrome patterns this is the homology class; (0, 0) iff the
    pattern is a sum of face boundaries. XOR of patterns XORs the windings.
    """
    layout.check_pattern(pattern)
    w_h = int(pattern[layout.cut_h].sum() & 1)
    w_v = int(pattern[layout.cut_v].sum() & 1)
    return w_h, w_v


def windings_batch(layout: ToricLayout, patterns: np.ndarray) -> np.ndarray:
    """Vectorized :func:`logical_windings`: (T, n_edges) -> (T, 2) uint8."""
    if patterns.ndim != 2 or patterns.shape[1] != layout.n_edges:
        raise SizeMismatch(f"patterns shape {patterns.shape} does not match d={layout.d}")
    w_h = patterns[:, layout.cut_h].sum(axis=1, dtype=np.int64) & 1
    w_v = patterns[:, layout.cut_v].sum(axis=1, dtype=np.int64) & 1
    return np.stack([w_h, w_v], axis=1).astype(np.uint8)


def to_dual(layout: ToricLayout, pattern: np.ndarray) -> np.ndarray:
    """Re-express an edge set in dual-lattice indexing (face checks become
    vertex checks there)."""
    layout.check_pattern(pattern)
    return pattern[layout.dual_to_primal]


def from_dual(layout: ToricLayout, dual_pattern: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_dual`."""
    layout.check_pattern(dual_pattern)
    out = np.empty_like(dual_pattern)
    out[layout.dual_to_primal] = dual_pattern
    return out
