"""Instrumented backtracking DFS with pluggable orderings and pruning.

One engine implements the solver family: randomized position selection,
contiguous (cell-ordered) selection, layer-based selection, and
most-constrained-cell selection, each optionally combined with small-void
pruning. Every strategy commits to a single target cell per node and
offers the legal placements covering that cell as successors; a node whose
chosen cell admits no placement is a dead end and the solver backtracks.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from enum import Enum

from .core import PuzzleState, all_placements, apply as _apply, placements_by_cell
from .geometry import CELLS_BY_INDEX, FULL_MASK, NUM_CELLS, cell_index

RNG_NAME = "python-random-mt19937"

MAX_DEPTH = 7


class Ordering(str, Enum):
    RANDOMIZED = "random"
    CELL_ORDERED = "cell"
    LAYER_ORDERED = "layer"
    MCV = "mcv"


class StopMode(str, Enum):
    FIRST_SOLUTION = "first"
    EXHAUSTIVE = "exhaustive"


class EmptyStatsError(Exception):
    """No backtracks recorded; histogram undefined."""


@dataclass(frozen=True)
class StrategyConfig:
    ordering: Ordering = Ordering.CELL_ORDERED
    pruning: bool = False
    seed: int = 0
    stop_mode: StopMode = StopMode.FIRST_SOLUTION
    landmark_table: object = None  # optional landmarks.LandmarkTable

    def describe(self):
        return {
            "ordering": self.ordering.value,
            "pruning": self.pruning,
            "seed": self.seed,
            "stop_mode": self.stop_mode.value,
            "landmarks": self.landmark_table is not None,
            "rng": RNG_NAME,
        }


@dataclass
class SearchStats:
    nodes_created_per_depth: list = field(default_factory=lambda: [0] * (MAX_DEPTH + 1))
    backtracks_per_depth: list = field(default_factory=lambda: [0] * (MAX_DEPTH + 1))
    solutions_found: int = 0
    elapsed: float = 0.0
    config: dict = field(default_factory=dict)

    @property
    def total_nodes(self):
        return sum(self.nodes_created_per_depth)

    def to_json(self):
        """JSON-serializable dict view of the run."""
        return {
            "nodes_created_per_depth": self.nodes_created_per_depth,
            "backtracks_per_depth": self.backtracks_per_depth,
            "solutions_found": self.solutions_found,
            "total_nodes": self.total_nodes,
            "elapsed_s": self.elapsed,
            "config": self.config,
        }

    def csv_row(self):
        return (
            self.nodes_created_per_depth
            + self.backtracks_per_depth
            + [self.solutions_found, self.total_nodes, self.elapsed]
        )


# Flat tables over all 688 placements, built once.
_PLACEMENTS = all_placements()
_MASKS = tuple(p.mask for p in _PLACEMENTS)
_PIECE_BITS = tuple(1 << (p.piece_id - 1) for p in _PLACEMENTS)
_BY_CELL = placements_by_cell()

# Cell selection orders: linear index for CELL_ORDERED, (z,x,y) for layers.
_LAYER_ORDER = tuple(
    sorted(range(NUM_CELLS), key=lambda i: (CELLS_BY_INDEX[i][2],
                                            CELLS_BY_INDEX[i][0],
                                            CELLS_BY_INDEX[i][1]))
)

# 6-neighbor adjacency masks for void detection.
_NEIGHBOR_MASKS = []
for _x, _y, _z in CELLS_BY_INDEX:
    m = 0
    for dx, dy, dz in ((1, 0, 0), (-1, 0, 0), (0, 1, 0),
                       (0, -1, 0), (0, 0, 1), (0, 0, -1)):
        nx, ny, nz = _x + dx, _y + dy, _z + dz
        if 0 <= nx < 3 and 0 <= ny < 3 and 0 <= nz < 3:
            m |= 1 << cell_index(nx, ny, nz)
    _NEIGHBOR_MASKS.append(m)
_NEIGHBOR_MASKS = tuple(_NEIGHBOR_MASKS)


def has_small_void(occupancy):
    """True iff the empty cells contain a connected component of size 1 or 2
    (6-neighbor connectivity). No piece has fewer than 3 cubes, so such a
    component can never be filled."""
    empty = ~occupancy & FULL_MASK
    while empty:
        seed = empty & -empty
        comp = seed
        frontier = seed
        while frontier:
            grown = 0
            f = frontier
            while f:
                bit = f & -f
                f ^= bit
                grown |= _NEIGHBOR_MASKS[bit.bit_length() - 1]
            frontier = grown & empty & ~comp
            comp |= frontier
        if comp.bit_count() < 3:
            return True
        empty &= ~comp
    return False


def void_prune(state):
    """Strategy-level pruning test on a PuzzleState."""
    return has_small_void(state.occupancy)


def _candidates(occ, used, cell):
    """Placement indexes covering `cell` that are legal in (occ, used),
    in fixed (piece, orientation, anchor) order."""
    return [
        pi
        for pi in _BY_CELL[cell]
        if not (used & _PIECE_BITS[pi] or occ & _MASKS[pi])
    ]


def _select_cell(occ, used, ordering, rng):
    """The target cell for the next placement, or (cell, cands) pair."""
    if ordering is Ordering.CELL_ORDERED:
        cell = ((occ + 1) & ~occ).bit_length() - 1
        return cell, _candidates(occ, used, cell)
    if ordering is Ordering.LAYER_ORDERED:
        for cell in _LAYER_ORDER:
            if not occ >> cell & 1:
                return cell, _candidates(occ, used, cell)
    if ordering is Ordering.RANDOMIZED:
        empty = [i for i in range(NUM_CELLS) if not occ >> i & 1]
        cell = rng.choice(empty)
        return cell, _candidates(occ, used, cell)
    if ordering is Ordering.MCV:
        best_cell, best = None, None
        for cell in range(NUM_CELLS):
            if occ >> cell & 1:
                continue
            cands = _candidates(occ, used, cell)
            if best is None or len(cands) < len(best):
                best_cell, best = cell, cands
                if not best:
                    break
        return best_cell, best
    raise ValueError(f"unknown ordering {ordering!r}")


def successors(state, config, rng=None):
    """Ordered successor placements of a state under the configured
    strategy. An empty list signals a dead end.

    RANDOMIZED needs an RNG; pass one to reproduce a solver's stream, or
    omit it to get a fresh seeded generator.
    """
    if state.depth >= MAX_DEPTH:
        return []
    if rng is None:
        rng = random.Random(config.seed)
    _, cands = _select_cell(state.occupancy, state.used_pieces,
                            config.ordering, rng)
    return [_PLACEMENTS[pi] for pi in cands]


def solve(config, initial_states=None, prune_hook=None, solution_cap=None):
    """Depth-first search from the empty state (or from seeded states).

    Returns (solutions, stats). Node accounting: every visited state
    counts once at its depth; a node that exhausts its successors counts
    one backtrack at its depth. FIRST_SOLUTION stops at the first complete
    assembly; EXHAUSTIVE walks the full strategy-restricted tree.

    `initial_states` and `prune_hook` are engine hooks used by the
    landmark-augmented solver: seeded states cost one node each, and the
    hook may reject a state (occupancy, used, depth) as known-dead.
    """
    rng = random.Random(config.seed)
    stats = SearchStats(config=config.describe())
    solutions = []
    first_only = config.stop_mode is StopMode.FIRST_SOLUTION
    ordering = config.ordering
    pruning = config.pruning
    nodes = stats.nodes_created_per_depth
    backs = stats.backtracks_per_depth
    start = time.perf_counter()

    path = []

    def rec(occ, used, depth):
        """Returns True to stop the whole search."""
        nodes[depth] += 1
        if prune_hook is not None and prune_hook(occ, used, depth, path):
            backs[depth] += 1
            return False
        if pruning and has_small_void(occ):
            backs[depth] += 1
            return False
        if occ == FULL_MASK:
            stats.solutions_found += 1
            st = PuzzleState()
            for pi in path:
                st = _apply(st, _PLACEMENTS[pi])
            solutions.append(st)
            if first_only or (solution_cap and stats.solutions_found >= solution_cap):
                return True
            backs[depth] += 1
            return False
        _, cands = _select_cell(occ, used, ordering, rng)
        for pi in cands:
            path.append(pi)
            stop = rec(occ | _MASKS[pi], used | _PIECE_BITS[pi], depth + 1)
            path.pop()
            if stop:
                return True
        backs[depth] += 1
        return False

    if initial_states is None:
        rec(0, 0, 0)
    else:
        for st in initial_states:
            path[:] = [_placement_index(p) for p in st.placements]
            if rec(st.occupancy, st.used_pieces, st.depth):
                break
            path.clear()

    stats.elapsed = time.perf_counter() - start
    return solutions, stats


_PLACEMENT_INDEX = {p: i for i, p in enumerate(_PLACEMENTS)}


def _placement_index(placement):
    return _PLACEMENT_INDEX[placement]


def backtrack_histogram(stats):
    """Backtrack frequency per depth, normalized to sum to 1."""
    total = sum(stats.backtracks_per_depth)
    if total == 0:
        raise EmptyStatsError("no backtracks recorded")
    return [b / total for b in stats.backtracks_per_depth]
