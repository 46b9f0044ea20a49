"""Soma pieces, placements, states, symmetry canonicalization, enumeration.

Pieces are loaded from the versioned data file ``data/pieces.json``. The
piece set is certified, not assumed: cell counts must be {3,4,4,4,4,4,4}
and exhaustive enumeration must yield the 240 known distinct solutions
(see the test suite).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .geometry import (
    CELLS,
    FULL_MASK,
    NUM_CELLS,
    cell_index,
    cells_to_mask,
    in_bounds,
    normalize_cells,
    rotate_cells,
    rotation_matrices,
    symmetry_permutations,
)


class SomaError(Exception):
    pass


class OverlapError(SomaError):
    """A placement collides with already occupied cells."""


class PieceReuseError(SomaError):
    """A piece was placed twice in one assembly."""


class EmptyStateError(SomaError):
    """remove_last called on the empty state."""


@dataclass(frozen=True)
class Piece:
    id: int
    name: str
    cells: tuple  # normalized (x,y,z) offsets, sorted


@dataclass(frozen=True)
class Orientation:
    piece_id: int
    rotation_index: int  # index of the first rotation producing this shape
    cells: tuple


@dataclass(frozen=True)
class Placement:
    piece_id: int
    orientation_index: int
    anchor: tuple  # (x,y,z) translation applied to the normalized orientation
    cells: tuple
    mask: int


@dataclass(frozen=True)
class PuzzleState:
    occupancy: int = 0
    used_pieces: int = 0
    placements: tuple = ()

    @property
    def depth(self):
        return len(self.placements)

    def is_complete(self):
        return self.occupancy == FULL_MASK


@dataclass(frozen=True)
class CanonicalSolution:
    canonical_form: bytes  # piece id per cell in linear index order, minimal
                           # over the 48 box symmetries

    def labeling(self):
        return tuple(self.canonical_form)


@lru_cache(maxsize=None)
def load_pieces():
    """The seven Soma pieces from the bundled data file, in id order."""
    raw = json.loads(
        resources.files("somalab").joinpath("data/pieces.json").read_text()
    )
    pieces = tuple(
        Piece(p["id"], p["name"], tuple(normalize_cells(map(tuple, p["cells"]))))
        for p in raw["pieces"]
    )
    assert sorted(len(p.cells) for p in pieces) == [3, 4, 4, 4, 4, 4, 4]
    return pieces


def generate_orientations(piece):
    """All distinct rotations of a piece, normalized to the origin.

    Applies each of the 24 proper rotations, normalizes, and dedupes.
    Output is sorted by cell-set encoding so the order is stable.
    """
    seen = {}
    for ri, mat in enumerate(rotation_matrices()):
        cells = tuple(normalize_cells(rotate_cells(mat, piece.cells)))
        if cells not in seen:
            seen[cells] = ri
    return [
        Orientation(piece.id, seen[cells], cells) for cells in sorted(seen)
    ]


def enumerate_placements(piece):
    """Every in-bounds (orientation, anchor) placement of a piece.

    Deterministic order: (orientation index, anchor linear index).
    """
    placements = []
    for oi, orient in enumerate(generate_orientations(piece)):
        for ax, ay, az in CELLS:
            cells = tuple(
                (x + ax, y + ay, z + az) for x, y, z in orient.cells
            )
            if all(in_bounds(c) for c in cells):
                placements.append(
                    Placement(piece.id, oi, (ax, ay, az), cells, cells_to_mask(cells))
                )
    placements.sort(key=lambda p: (p.orientation_index, cell_index(*p.anchor)))
    return placements


@lru_cache(maxsize=None)
def all_placements():
    """Flat tuple of every placement of every piece, sorted by
    (piece id, orientation index, anchor index). This order also fixes the
    SAT variable numbering."""
    out = []
    for piece in load_pieces():
        out.extend(enumerate_placements(piece))
    return tuple(out)


@lru_cache(maxsize=None)
def placements_by_cell():
    """For each linear cell index, the placements covering that cell
    (indexes into all_placements), in table order."""
    table = [[] for _ in range(NUM_CELLS)]
    for pi, p in enumerate(all_placements()):
        for c in p.cells:
            table[cell_index(*c)].append(pi)
    return tuple(tuple(row) for row in table)


def apply(state, placement):
    """Add a placement to a state, returning a new state.

    Raises PieceReuseError if the piece is already used, OverlapError if
    any cell collides. The input state is unchanged.
    """
    bit = 1 << (placement.piece_id - 1)
    if state.used_pieces & bit:
        raise PieceReuseError(f"piece {placement.piece_id} already placed")
    if state.occupancy & placement.mask:
        raise OverlapError(f"placement of piece {placement.piece_id} overlaps")
    return PuzzleState(
        state.occupancy | placement.mask,
        state.used_pieces | bit,
        state.placements + (placement,),
    )


def remove_last(state):
    """Undo the most recent placement (inverse of apply)."""
    if not state.placements:
        raise EmptyStateError("cannot remove from the empty state")
    last = state.placements[-1]
    return PuzzleState(
        state.occupancy & ~last.mask,
        state.used_pieces & ~(1 << (last.piece_id - 1)),
        state.placements[:-1],
    )


def labeling(state):
    """27-entry cell-to-piece-id labeling (0 = empty) in linear index order."""
    labels = [0] * NUM_CELLS
    for p in state.placements:
        for c in p.cells:
            labels[cell_index(*c)] = p.piece_id
    return bytes(labels)


@lru_cache(maxsize=None)
def _mirror_piece_map():
    """piece_id -> piece_id of the mirror-image shape. The chiral pair
    swaps; every other piece maps to itself."""
    pieces = load_pieces()
    shapes = {}
    for piece in pieces:
        for o in generate_orientations(piece):
            shapes[o.cells] = piece.id
    mapping = {}
    for piece in pieces:
        mirrored = tuple(normalize_cells((-x, y, z) for x, y, z in piece.cells))
        mapping[piece.id] = shapes[mirrored]
    return mapping


def canonicalize(state):
    """Minimal cell-to-piece labeling over the 48 box symmetries.

    Reflections move cells and swap the chiral piece pair's labels, so two
    assemblies get the same canonical form exactly when one is a rotation
    or reflection of the other. Works on partial states as well (empty
    cells labeled 0).
    """
    return CanonicalSolution(canonical_labeling(labeling(state)))


def canonical_labeling(labels):
    """canonicalize() on a raw 27-byte labeling; shared fast path."""
    mirror = _mirror_map_bytes()
    best = None
    for perm, reflected in symmetry_permutations():
        relabel = mirror if reflected else None
        out = bytearray(NUM_CELLS)
        if relabel is None:
            for i in range(NUM_CELLS):
                out[perm[i]] = labels[i]
        else:
            for i in range(NUM_CELLS):
                out[perm[i]] = relabel[labels[i]]
        cand = bytes(out)
        if best is None or cand < best:
            best = cand
    return best


@lru_cache(maxsize=None)
def _mirror_map_bytes():
    m = _mirror_piece_map()
    table = bytearray(8)
    for k, v in m.items():
        table[k] = v
    return bytes(table)


def solution_text(state):
    """27-character text form: piece id per cell in linear index order."""
    return "".join(str(b) for b in labeling(state))


def state_from_text(text):
    """Rebuild a PuzzleState from the 27-character solution format."""
    if len(text) != 27:
        raise ValueError("expected 27 characters")
    labels = [int(ch) for ch in text]
    by_piece = {}
    for i, pid in enumerate(labels):
        if pid:
            by_piece.setdefault(pid, []).append((i // 9, (i // 3) % 3, i % 3))
    state = PuzzleState()
    lookup = {}
    for p in all_placements():
        lookup[(p.piece_id, tuple(sorted(p.cells)))] = p
    for pid in sorted(by_piece):
        key = (pid, tuple(sorted(by_piece[pid])))
        if key not in lookup:
            raise ValueError(f"cells of piece {pid} do not form a legal placement")
        state = apply(state, lookup[key])
    return state


def enumerate_all_solutions():
    """Exhaustive cell-ordered DFS over all placements.

    Returns (sorted list of CanonicalSolution, raw assembly count). The
    raw count is the number of distinct complete labeled assemblies; each
    is visited exactly once because every assembly covers every cell and
    the lowest empty cell forces a unique next placement.
    """
    placements = all_placements()
    by_cell = placements_by_cell()
    masks = [p.mask for p in placements]
    piece_bits = [1 << (p.piece_id - 1) for p in placements]

    canonical = set()
    raw = 0
    stack = []  # placement indexes along the current path

    def rec(occ, used):
        nonlocal raw
        if occ == FULL_MASK:
            raw += 1
            st = PuzzleState()
            for pi in stack:
                st = apply(st, placements[pi])
            canonical.add(canonicalize(st).canonical_form)
            return
        cell = ((occ + 1) & ~occ).bit_length() - 1  # lowest empty cell
        for pi in by_cell[cell]:
            if used & piece_bits[pi] or occ & masks[pi]:
                continue
            stack.append(pi)
            rec(occ | masks[pi], used | piece_bits[pi])
            stack.pop()

    rec(0, 0)
    return [CanonicalSolution(c) for c in sorted(canonical)], raw
