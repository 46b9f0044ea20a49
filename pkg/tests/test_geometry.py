import numpy as np
import pytest
from hypothesis import given, strategies as st

from somalab import geometry as g


def test_cell_index_is_a_bijection():
    seen = {g.cell_index(x, y, z) for x, y, z in g.CELLS}
    assert seen == set(range(27))
    assert g.cell_index(1, 0, 2) == 9 * 1 + 3 * 0 + 2


def test_rotation_matrices_are_the_24_proper_rotations():
    mats = g.rotation_matrices()
    assert len(mats) == 24
    arrays = [np.array(m) for m in mats]
    # distinct, orthogonal, determinant +1
    assert len({a.tobytes() for a in arrays}) == 24
    for a in arrays:
        assert np.array_equal(a @ a.T, np.eye(3, dtype=int))
        assert round(np.linalg.det(a)) == 1


def test_rotation_set_is_closed_under_composition():
    mats = {np.array(m).tobytes() for m in g.rotation_matrices()}
    arrays = [np.array(m) for m in g.rotation_matrices()]
    for a in arrays[:6]:
        for b in arrays:
            assert (a @ b).tobytes() in mats


def test_symmetry_permutations_count_and_validity():
    perms = g.symmetry_permutations()
    assert len(perms) == 48
    assert sum(1 for _, reflected in perms if reflected) == 24
    for perm, _ in perms:
        assert sorted(perm) == list(range(27))
    # all 48 are distinct permutations
    assert len({tuple(p) for p, _ in perms}) == 48


def test_normalize_cells_anchors_at_origin():
    cells = [(2, 1, 1), (2, 2, 1), (2, 1, 2)]
    norm = g.normalize_cells(cells)
    assert min(c[0] for c in norm) == 0
    assert min(c[1] for c in norm) == 0
    assert min(c[2] for c in norm) == 0
    # shape preserved
    assert g.normalize_cells(norm) == norm


@given(st.integers(min_value=0, max_value=(1 << 27) - 1))
def test_mask_cells_round_trip(mask):
    assert g.cells_to_mask(g.mask_to_cells(mask)) == mask


@given(st.sets(st.tuples(*[st.integers(0, 2)] * 3), min_size=1, max_size=27))
def test_rotate_cells_preserves_cardinality(cells):
    for mat in g.rotation_matrices():
        assert len(set(g.rotate_cells(mat, cells))) == len(cells)


def test_full_mask_covers_box():
    assert g.FULL_MASK == (1 << 27) - 1
    assert g.cells_to_mask(g.CELLS) == g.FULL_MASK
