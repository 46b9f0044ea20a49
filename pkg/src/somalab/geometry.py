"""Cube geometry: cells, linear indexing, and the 48 box symmetries.

The 3x3x3 box is indexed repo-wide by ``idx = 9*x + 3*y + z``. Every other
module (placement tables, CNF variable naming, solution text format) relies
on this single linearization.
"""

from __future__ import annotations

from functools import lru_cache

N = 3
NUM_CELLS = N * N * N

CELLS = [(x, y, z) for x in range(N) for y in range(N) for z in range(N)]


def cell_index(x, y, z):
    """Linear index of cell (x,y,z), fixed as 9x + 3y + z."""
    return 9 * x + 3 * y + z


def in_bounds(cell):
    x, y, z = cell
    return 0 <= x < N and 0 <= y < N and 0 <= z < N


def cells_to_mask(cells):
    """Pack an iterable of (x,y,z) cells into a 27-bit occupancy word."""
    mask = 0
    for c in cells:
        mask |= 1 << cell_index(*c)
    return mask


def mask_to_cells(mask):
    return [CELLS_BY_INDEX[i] for i in range(NUM_CELLS) if mask >> i & 1]


CELLS_BY_INDEX = sorted(CELLS, key=lambda c: cell_index(*c))

FULL_MASK = (1 << NUM_CELLS) - 1


def _mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def _apply_mat(mat, cell):
    return tuple(sum(mat[i][j] * cell[j] for j in range(3)) for i in range(3))


_IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
_ROT_X = ((1, 0, 0), (0, 0, -1), (0, 1, 0))
_ROT_Y = ((0, 0, 1), (0, 1, 0), (-1, 0, 0))
_REFLECT_X = ((-1, 0, 0), (0, 1, 0), (0, 0, 1))


@lru_cache(maxsize=None)
def rotation_matrices():
    """The 24 proper rotations of the cube, generated by closure from
    quarter turns about x and y. Deterministic order."""
    mats = {_IDENTITY}
    frontier = [_IDENTITY]
    while frontier:
        m = frontier.pop()
        for g in (_ROT_X, _ROT_Y):
            nm = _mat_mul(g, m)
            if nm not in mats:
                mats.add(nm)
                frontier.append(nm)
    assert len(mats) == 24
    return tuple(sorted(mats))


def rotate_cells(mat, cells):
    return [_apply_mat(mat, c) for c in cells]


def normalize_cells(cells):
    """Translate a cell set so its minimum coordinates sit at the origin."""
    cells = list(cells)
    mx = min(c[0] for c in cells)
    my = min(c[1] for c in cells)
    mz = min(c[2] for c in cells)
    return sorted((x - mx, y - my, z - mz) for x, y, z in cells)


@lru_cache(maxsize=None)
def symmetry_permutations():
    """Cell permutations for the 48 box symmetries (24 rotations, each
    optionally composed with the x-reflection).

    Returns a tuple of (perm, reflected) pairs where perm[i] is the index
    the cell at linear index i maps to. The box is mapped onto itself by
    rotating about its center.
    """
    perms = []
    center = (1, 1, 1)
    for reflected in (False, True):
        for mat in rotation_matrices():
            perm = [0] * NUM_CELLS
            for cell in CELLS:
                v = tuple(c - o for c, o in zip(cell, center))
                if reflected:
                    v = _apply_mat(_REFLECT_X, v)
                v = _apply_mat(mat, v)
                target = tuple(c + o for c, o in zip(v, center))
                perm[cell_index(*cell)] = cell_index(*target)
            perms.append((tuple(perm), reflected))
    assert len({p for p, _ in perms}) == 48
    return tuple(perms)
