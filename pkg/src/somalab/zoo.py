"""Comparison puzzle state spaces behind one small abstraction.

Three puzzles ride along for branching-profile comparisons: the sliding
8-puzzle (optionally non-backtracking, optionally on a torus), the 3x3
magic square filled cell by cell, and the Slothouber-Graatsma packing
(six 1x2x2 blocks plus three unit cubes in a 3x3x3 box). The native cube
search also gets a PuzzleSpace wrapper so the generic profiling path can
be cross-checked against the dedicated machinery.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .geometry import NUM_CELLS, symmetry_permutations
from .search import _MASKS, _PIECE_BITS

# ---------------------------------------------------------------------------
# abstraction


@dataclass
class PuzzleSpace:
    """A search space: initial states, successor function, goal test.

    `successors` must be deterministic given a state. Depth is the number
    of moves made from an initial state. `max_depth` bounds walks in
    acyclic (dissection) spaces; None means unbounded (sliding puzzles).
    """

    name: str
    initial: object                  # callable() -> state
    successors: object               # callable(state) -> list of states
    is_goal: object                  # callable(state) -> bool
    max_depth: int | None = None
    non_backtracking: bool = False


@dataclass
class ZooProfile:
    puzzle: str
    per_depth_mean: dict             # depth -> mean out-degree (see notes)
    goal_out_degree: dict = field(default_factory=dict)  # depth -> mean at goals
    depth_measure: int | None = None
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# 8-puzzle

_GOAL_TILES = (1, 2, 3, 4, 5, 6, 7, 8, 0)

_GRID_NEIGHBORS = tuple(
    tuple(
        r2 * 3 + c2
        for r2, c2 in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
        if 0 <= r2 < 3 and 0 <= c2 < 3
    )
    for r in range(3)
    for c in range(3)
)

_TORUS_NEIGHBORS = tuple(
    tuple(
        (r2 % 3) * 3 + (c2 % 3)
        for r2, c2 in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
    )
    for r in range(3)
    for c in range(3)
)


def eight_puzzle_space(non_backtracking, torus=False):
    """Sliding 3x3 puzzle. States are (tiles, previous blank position);
    tiles is a 9-tuple with 0 for the blank. Moving slides a neighboring
    tile into the blank. With non_backtracking the move undoing the
    previous one is forbidden, which leaves 1 choice in a corner, 2 on a
    side, and 3 in the middle. The torus variant (wraparound adjacency)
    exists for tests: every cell then has 4 neighbors.
    """
    neighbors = _TORUS_NEIGHBORS if torus else _GRID_NEIGHBORS

    def initial():
        return (_GOAL_TILES, None)

    def successors(state):
        tiles, prev = state
        blank = tiles.index(0)
        out = []
        for nb in neighbors[blank]:
            if non_backtracking and prev is not None and nb == prev:
                continue
            lst = list(tiles)
            lst[blank], lst[nb] = lst[nb], lst[blank]
            out.append((tuple(lst), blank))
        return out

    def is_goal(state):
        return state[0] == _GOAL_TILES

    name = "8-puzzle"
    if torus:
        name += "-torus"
    if non_backtracking:
        name += "-nb"
    return PuzzleSpace(name=name, initial=initial, successors=successors,
                       is_goal=is_goal, non_backtracking=non_backtracking)


def eight_puzzle_distances():
    """BFS distance from the goal state for every reachable tile
    permutation. The solvable half of 9! has 181,440 states."""
    dist = {_GOAL_TILES: 0}
    queue = deque([_GOAL_TILES])
    while queue:
        tiles = queue.popleft()
        d = dist[tiles]
        blank = tiles.index(0)
        for nb in _GRID_NEIGHBORS[blank]:
            lst = list(tiles)
            lst[blank], lst[nb] = lst[nb], lst[blank]
            nxt = tuple(lst)
            if nxt not in dist:
                dist[nxt] = d + 1
                queue.append(nxt)
    return dist


def eight_puzzle_diameter():
    """Eccentricity of the goal state: the minimum solution length from
    the worst-case position. The BFS itself is the oracle."""
    return max(eight_puzzle_distances().values())


# ---------------------------------------------------------------------------
# 3x3 magic square

_LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)

_SQUARE_SYMMETRIES = (
    (0, 1, 2, 3, 4, 5, 6, 7, 8),
    (6, 3, 0, 7, 4, 1, 8, 5, 2),
    (8, 7, 6, 5, 4, 3, 2, 1, 0),
    (2, 5, 8, 1, 4, 7, 0, 3, 6),
    (2, 1, 0, 5, 4, 3, 8, 7, 6),
    (0, 3, 6, 1, 4, 7, 2, 5, 8),
    (6, 7, 8, 3, 4, 5, 0, 1, 2),
    (8, 5, 2, 7, 4, 1, 6, 3, 0),
)


# Cells are filled in this fixed order: the 2x2 block {0, 1, 3, 4} first,
# so no row/column/diagonal completes before the fifth placement and the
# per-depth branching declines monotonically (9, 8, 7, 6, then forced).
# Row-major order instead completes the top row at the third placement,
# which dents the curve (9, 8, 1, 6, ...).
_MS_FILL_ORDER = (0, 1, 3, 4, 2, 5, 6, 7, 8)


def magic_square_space():
    """Digits 1..9 placed one per cell along a fixed fill order. A digit
    is legal if every row, column, or diagonal it completes sums to 15.
    States are tuples of the digits placed so far (in fill order)."""

    def initial():
        return ()

    def successors(state):
        k = len(state)
        if k == 9:
            return []
        used = set(state)
        cell = _MS_FILL_ORDER[k]
        filled = {_MS_FILL_ORDER[i]: state[i] for i in range(k)}
        out = []
        for digit in range(1, 10):
            if digit in used:
                continue
            filled[cell] = digit
            ok = True
            for line in _LINES:
                if cell in line and all(c in filled for c in line):
                    if sum(filled[c] for c in line) != 15:
                        ok = False
                        break
            if ok:
                out.append(state + (digit,))
        del filled[cell]
        return out

    def is_goal(state):
        return len(state) == 9

    return PuzzleSpace(name="magic-square", initial=initial,
                       successors=successors, is_goal=is_goal, max_depth=9)


def magic_square_solutions():
    """(raw grids, count up to the square's 8 symmetries) by brute force
    over the space itself."""
    space = magic_square_space()
    raw = []

    def rec(state):
        if len(state) == 9:
            raw.append(state)
            return
        for nxt in space.successors(state):
            rec(nxt)

    rec(space.initial())
    canonical = set()
    for state in raw:
        grid = [0] * 9
        for i, digit in enumerate(state):
            grid[_MS_FILL_ORDER[i]] = digit
        canonical.add(
            min(tuple(grid[i] for i in perm) for perm in _SQUARE_SYMMETRIES)
        )
    return raw, len(canonical)


# ---------------------------------------------------------------------------
# Slothouber-Graatsma

def _sg_placements():
    """All axis-aligned 1x2x2 block cell sets in the box, as frozensets of
    linear cell indices, plus the single-cell sets for the unit cubes."""
    blocks = []
    for axis in range(3):
        dims = [2, 2, 2]
        dims[axis] = 1
        for x in range(3 - dims[0] + 1):
            for y in range(3 - dims[1] + 1):
                for z in range(3 - dims[2] + 1):
                    cells = frozenset(
                        9 * (x + dx) + 3 * (y + dy) + (z + dz)
                        for dx in range(dims[0])
                        for dy in range(dims[1])
                        for dz in range(dims[2])
                    )
                    blocks.append(cells)
    return blocks


_SG_BLOCKS = _sg_placements()
_SG_BY_CELL = tuple(
    tuple(i for i, cells in enumerate(_SG_BLOCKS) if c in cells)
    for c in range(NUM_CELLS)
)
_SG_MASKS = tuple(sum(1 << c for c in cells) for cells in _SG_BLOCKS)


def slothouber_graatsma_space():
    """Pack six 1x2x2 blocks and three unit cubes into the 3x3x3 box.

    States are (occupancy mask, big blocks left, unit cubes left, placed
    block cell sets). A move fills the lowest empty cell with either a
    big block covering it or a unit cube, so every complete packing is
    reached exactly once.
    """

    def initial():
        return (0, 6, 3, ())

    def successors(state):
        occ, big, small, blocks = state
        if occ == (1 << NUM_CELLS) - 1:
            return []
        cell = ((occ + 1) & ~occ).bit_length() - 1
        out = []
        if big:
            for bi in _SG_BY_CELL[cell]:
                if not occ & _SG_MASKS[bi]:
                    out.append((occ | _SG_MASKS[bi], big - 1, small,
                                blocks + (_SG_BLOCKS[bi],)))
        if small:
            out.append((occ | 1 << cell, big, small - 1,
                        blocks + (frozenset([cell]),)))
        return out

    def is_goal(state):
        return state[0] == (1 << NUM_CELLS) - 1

    return PuzzleSpace(name="slothouber-graatsma", initial=initial,
                       successors=successors, is_goal=is_goal, max_depth=9)


def _partition_canonical(blocks):
    """Canonical form of a partition of the 27 cells into blocks, minimal
    over the 48 box symmetries and invariant to block relabeling: after
    permuting cells, blocks are renumbered by first occurrence."""
    best = None
    for perm, _reflected in symmetry_permutations():
        cell_block = [0] * NUM_CELLS
        for label, cells in enumerate(blocks, start=1):
            for c in cells:
                cell_block[perm[c]] = label
        relabel = {}
        out = bytearray(NUM_CELLS)
        for i, label in enumerate(cell_block):
            if label not in relabel:
                relabel[label] = len(relabel) + 1
            out[i] = relabel[label]
        cand = bytes(out)
        if best is None or cand < best:
            best = cand
    return best


def slothouber_graatsma_solutions():
    """(raw packing count, count up to the 48 box symmetries)."""
    space = slothouber_graatsma_space()
    raw = 0
    canonical = set()

    def rec(state):
        nonlocal raw
        if space.is_goal(state):
            raw += 1
            canonical.add(_partition_canonical(state[3]))
            return
        for nxt in space.successors(state):
            rec(nxt)

    rec(space.initial())
    return raw, len(canonical)


# ---------------------------------------------------------------------------
# the cube as a generic space

def soma_space():
    """The native cube search as a PuzzleSpace over the configuration
    graph: states are frozensets of placement ids, successors add any
    compatible placement."""

    def initial():
        return frozenset()

    def occ_used(state):
        occ = used = 0
        for pi in state:
            occ |= _MASKS[pi]
            used |= _PIECE_BITS[pi]
        return occ, used

    def successors(state):
        occ, used = occ_used(state)
        out = []
        for pi in range(len(_MASKS)):
            if pi in state:
                continue
            if used & _PIECE_BITS[pi] or occ & _MASKS[pi]:
                continue
            out.append(state | {pi})
        return out

    def is_goal(state):
        occ, _ = occ_used(state)
        return occ == (1 << NUM_CELLS) - 1

    return PuzzleSpace(name="soma", initial=initial, successors=successors,
                       is_goal=is_goal, max_depth=7)


# ---------------------------------------------------------------------------
# generic profiling

def zoo_sample_branching(space, depth, num_samples, seed):
    """Out-degrees of sampled depth-`depth` states, by restarting random
    walks from the initial state (rejecting walks that die early). The
    generic analogue of metrics.sample_branching."""
    rng = random.Random(seed)
    out = []
    while len(out) < num_samples:
        state = space.initial()
        ok = True
        for _ in range(depth):
            succ = space.successors(state)
            if not succ:
                ok = False
                break
            state = rng.choice(succ)
        if ok:
            out.append(len(space.successors(state)))
    return out


def zoo_exhaustive_branching(space, depth, node_budget=2_000_000):
    """Exact out-degree histogram over all distinct depth-`depth` states.

    Levels are deduplicated sets of states, so the cube space reproduces
    the native exhaustive histograms state for state.
    """
    level = {space.initial()}
    visited = 0
    for _ in range(depth):
        nxt = set()
        for state in level:
            visited += 1
            if visited > node_budget:
                raise RuntimeError(f"node budget {node_budget} exceeded")
            nxt.update(space.successors(state))
        level = nxt
    hist = {}
    for state in level:
        deg = len(space.successors(state))
        hist[deg] = hist.get(deg, 0) + 1
    return hist


def zoo_profile(space, max_depth=None, num_walks=2000, seed=0):
    """Per-depth mean branching from random walks through the space.

    Goal states are excluded from the per-depth means and reported
    separately (their mean out-degree per depth), matching the native
    leaf-exclusion convention; zero-out-degree dead ends are excluded the
    same way.
    """
    rng = random.Random(seed)
    limit = max_depth if max_depth is not None else space.max_depth
    if limit is None:
        raise ValueError("unbounded space needs an explicit max_depth")
    samples = {d: [] for d in range(limit + 1)}
    goal_samples = {}
    for _ in range(num_walks):
        state = space.initial()
        for d in range(limit + 1):
            succ = space.successors(state)
            if space.is_goal(state):
                goal_samples.setdefault(d, []).append(len(succ))
            else:
                samples[d].append(len(succ))
            if not succ or d == limit:
                break
            state = rng.choice(succ)
    means = {
        d: sum(g for g in obs if g > 0) / max(sum(1 for g in obs if g > 0), 1)
        for d, obs in samples.items() if obs
    }
    return ZooProfile(
        puzzle=space.name,
        per_depth_mean=means,
        goal_out_degree={
            d: sum(obs) / len(obs) for d, obs in goal_samples.items()
        },
        depth_measure=None,
        metadata={"num_walks": num_walks, "seed": seed,
                  "leaf_exclusion": "goals and dead ends excluded"},
    )


def histogram_csv_rows(puzzle, depth, hist):
    """Rows in the shared (puzzle, depth, out_degree, count) schema."""
    return [(puzzle, depth, deg, hist[deg]) for deg in sorted(hist)]
