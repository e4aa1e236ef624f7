import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ganqec.exceptions import InvalidDistance, SizeMismatch
from ganqec.lattice import build_layout, from_dual, logical_windings, to_dual, windings_batch


@pytest.mark.parametrize("d,n_edges", [(3, 18), (5, 50), (7, 98)])
def test_counts(d, n_edges):
    lay = build_layout(d)
    assert lay.n_edges == n_edges
    assert lay.n_vertices == d * d
    assert lay.n_faces == d * d
    assert lay.n_independent_stabilizers == 2 * d * d - 2
    assert lay.n_logical_qubits == 2


@pytest.mark.parametrize("d", [2, 4, 1, 0, -3])
def test_rejects_bad_distance(d):
    with pytest.raises(InvalidDistance):
        build_layout(d)


def test_every_edge_in_two_stars_and_two_faces(lay3, lay5):
    for lay in (lay3, lay5):
        star_counts = np.bincount(lay.vertex_edges.ravel(), minlength=lay.n_edges)
        face_counts = np.bincount(lay.face_edges.ravel(), minlength=lay.n_edges)
        assert (star_counts == 2).all()
        assert (face_counts == 2).all()


def test_documented_incidence_convention(lay3):
    lay = lay3
    # star(1,0) = {h(1,0), h(1,2), v(1,0), v(0,0)}
    assert sorted(lay.vertex_edges[lay.vertex_index(1, 0)]) == sorted(
        [lay.h_index(1, 0), lay.h_index(1, 2), lay.v_index(1, 0), lay.v_index(0, 0)]
    )
    # face(2,2) = {h(2,2), h(0,2), v(2,2), v(2,0)}
    assert sorted(lay.face_edges[lay.vertex_index(2, 2)]) == sorted(
        [lay.h_index(2, 2), lay.h_index(0, 2), lay.v_index(2, 2), lay.v_index(2, 0)]
    )


def test_cut_sets_have_d_edges_and_small_cross_species_overlap(lay3, lay5):
    for lay in (lay3, lay5):
        assert len(lay.cut_h) == lay.d
        assert len(lay.cut_v) == lay.d
        dual_cut_h = lay.dual_to_primal[lay.cut_h]
        dual_cut_v = lay.dual_to_primal[lay.cut_v]
        for primal in (lay.cut_h, lay.cut_v):
            for dual in (dual_cut_h, dual_cut_v):
                assert len(set(primal) & set(dual)) <= 1


def test_windings_of_empty_and_face(lay5):
    assert logical_windings(lay5, lay5.empty_pattern()) == (0, 0)
    assert logical_windings(lay5, lay5.face_boundary(1, 1)) == (0, 0)


def test_windings_of_nontrivial_cycles(lay3, lay5):
    for lay in (lay3, lay5):
        for r in range(lay.d):
            row = lay.empty_pattern()
            for c in range(lay.d):
                row[lay.h_index(r, c)] = 1
            # full row of horizontal edges crosses the vertical cut once
            assert logical_windings(lay, row) == (1, 0)
        for c in range(lay.d):
            col = lay.empty_pattern()
            for r in range(lay.d):
                col[lay.v_index(r, c)] = 1
            assert logical_windings(lay, col) == (0, 1)


def test_windings_size_mismatch(lay3):
    with pytest.raises(SizeMismatch):
        logical_windings(lay3, np.zeros(10, dtype=np.uint8))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**18 - 1), st.integers(0, 2**18 - 1))
def test_windings_linear_over_xor(a_bits, b_bits):
    lay = build_layout(3)
    a = np.array([(a_bits >> e) & 1 for e in range(18)], dtype=np.uint8)
    b = np.array([(b_bits >> e) & 1 for e in range(18)], dtype=np.uint8)
    wa = logical_windings(lay, a)
    wb = logical_windings(lay, b)
    wab = logical_windings(lay, a ^ b)
    assert wab == (wa[0] ^ wb[0], wa[1] ^ wb[1])


def test_windings_batch_matches_scalar(lay5):
    rng = np.random.default_rng(0)
    pats = (rng.random((40, lay5.n_edges)) < 0.3).astype(np.uint8)
    batch = windings_batch(lay5, pats)
    for i in range(len(pats)):
        assert tuple(batch[i]) == logical_windings(lay5, pats[i])


def test_star_parities_sum_to_zero(lay5):
    # each edge sits in exactly two stars, so the defect count is even
    rng = np.random.default_rng(1)
    from ganqec.syndrome import compute_syndrome

    for _ in range(20):
        pattern = (rng.random(lay5.n_edges) < 0.4).astype(np.uint8)
        assert compute_syndrome(lay5, pattern).sum() % 2 == 0


def test_dual_map_is_permutation_conjugating_faces_to_stars(lay3, lay5):
    from ganqec.syndrome import compute_syndrome

    for lay in (lay3, lay5):
        perm = lay.dual_to_primal
        assert sorted(perm) == list(range(lay.n_edges))
        rng = np.random.default_rng(2)
        pattern = (rng.random(lay.n_edges) < 0.4).astype(np.uint8)
        # face-check parities of the pattern == vertex-check parities in dual indexing
        face_syndrome = (pattern[lay.face_edges].sum(axis=1) & 1).astype(np.uint8)
        assert np.array_equal(compute_syndrome(lay, to_dual(lay, pattern)), face_syndrome)
        assert np.array_equal(from_dual(lay, to_dual(lay, pattern)), pattern)


def test_layout_cycles_are_cycles(lay5):
    from ganqec.syndrome import compute_syndrome

    for cyc, cls in ((lay5.cycle_h, (1, 0)), (lay5.cycle_v, (0, 1))):
        pattern = lay5.empty_pattern()
        pattern[cyc] = 1
        assert not compute_syndrome(lay5, pattern).any()
        assert logical_windings(lay5, pattern) == cls
