"""Landmark and anti-landmark tables over partial assemblies.

Preprocessing enumerates depth-d partial configurations in the base
strategy's own traversal order, canonicalizes each, and counts its
complete-solution extensions by exhaustive continuation. Entries with
extensions are landmarks (ranked by extension count); entries with zero
extensions are anti-landmarks (dead states). The query phase seeds its
frontier with landmark states, which cost one node each since their
construction was paid during preprocessing, and prunes any state whose
canonical form matches a known dead state.
"""

from __future__ import annotations

import json
import random
import struct
import time
from dataclasses import dataclass, field, replace

from .core import (
    PuzzleState,
    SomaError,
    all_placements,
    apply,
    canonical_labeling,
    canonicalize,
    labeling,
    solution_text,
    state_from_text,
)
from .geometry import NUM_CELLS, cell_index
from .search import StopMode, _select_cell, _MASKS, _PIECE_BITS, solve

_PLACEMENTS = all_placements()


class NoLandmarksError(SomaError):
    """Query against a table with no entries at all."""


@dataclass
class TradeoffRecord:
    depth: int
    num_landmarks: int
    preprocessing_time: float
    preprocessing_nodes: int
    query_time: float
    query_nodes: int

    def csv_row(self):
        return (self.depth, self.num_landmarks, self.preprocessing_nodes,
                round(self.preprocessing_time * 1000, 3), self.query_nodes,
                round(self.query_time * 1000, 3))


CSV_HEADER = ("depth", "num_landmarks", "preprocessing_nodes",
              "preprocessing_ms", "query_nodes", "query_ms")


@dataclass
class LandmarkTable:
    depth: int
    entries: dict                 # canonical 27-byte labeling -> extension count
    landmark_threshold: int = 1
    landmark_count_limit: int | None = None
    multiplicity: dict = field(default_factory=dict)   # raw states per entry
    representatives: dict = field(default_factory=dict)  # key -> PuzzleState
    base_strategy: object = None
    preprocessing_nodes: int = 0
    preprocessing_time: float = 0.0

    def landmarks(self):
        """(key, extension_count) pairs ranked by count descending,
        canonical key breaking ties, truncated to landmark_count_limit."""
        alive = [(k, c) for k, c in self.entries.items()
                 if c >= max(self.landmark_threshold, 1)]
        alive.sort(key=lambda kc: (-kc[1], kc[0]))
        limit = self.landmark_count_limit
        return alive if limit is None else alive[:limit]

    def anti_landmarks(self):
        return {k for k, c in self.entries.items() if c == 0}


def build_table(depth, base_strategy, landmark_count_limit=None,
                landmark_threshold=1):
    """Evaluate depth-`depth` partial assemblies reachable under
    base_strategy, in its traversal order.

    With landmark_count_limit=None the whole layer is evaluated. With a
    limit, evaluation stops as soon as that many live entries (extension
    count > 0) are known; smaller limits therefore evaluate a prefix of
    larger ones, and preprocessing_nodes grows with the limit.
    preprocessing_nodes counts every node of the shallow enumeration plus
    every node of the exhaustive continuations.
    """
    if not 1 <= depth <= 6:
        raise ValueError("depth must be in 1..6")
    rng = random.Random(base_strategy.seed)
    cont_cfg = replace(base_strategy, stop_mode=StopMode.EXHAUSTIVE)
    table = LandmarkTable(
        depth=depth,
        entries={},
        landmark_threshold=landmark_threshold,
        landmark_count_limit=landmark_count_limit,
        base_strategy=base_strategy,
    )
    start = time.perf_counter()
    if landmark_count_limit == 0:
        table.preprocessing_time = time.perf_counter() - start
        return table

    pre_nodes = 0
    alive = 0
    done = False
    path = []

    def rec(occ, used, d):
        nonlocal pre_nodes, alive, done
        pre_nodes += 1
        if d == depth:
            state = PuzzleState()
            for pi in path:
                state = apply(state, _PLACEMENTS[pi])
            key = canonicalize(state).canonical_form
            if key in table.entries:
                table.multiplicity[key] += 1
                return
            _, stats = solve(cont_cfg, initial_states=[state])
            pre_nodes += stats.total_nodes - 1   # seed node already counted
            table.entries[key] = stats.solutions_found
            table.multiplicity[key] = 1
            table.representatives[key] = state
            if stats.solutions_found > 0:
                alive += 1
                if landmark_count_limit is not None and \
                        alive >= landmark_count_limit:
                    done = True
            return
        _, cands = _select_cell(occ, used, base_strategy.ordering, rng)
        for pi in cands:
            path.append(pi)
            rec(occ | _MASKS[pi], used | _PIECE_BITS[pi], d + 1)
            path.pop()
            if done:
                return

    rec(0, 0, 0)
    table.preprocessing_nodes = pre_nodes
    table.preprocessing_time = time.perf_counter() - start
    return table


def _anti_prune_hook(table):
    """Prune hook matching states against the dead-state set. Probes only
    at the table's build depth; the canonical form is rebuilt from the
    search path."""
    anti = table.anti_landmarks()
    if not anti:
        return None
    probe_depth = table.depth
    cells_and_ids = [
        ([cell_index(*c) for c in p.cells], p.piece_id) for p in _PLACEMENTS
    ]

    def hook(occ, used, d, path):
        if d != probe_depth:
            return False
        labels = bytearray(NUM_CELLS)
        for pi in path:
            cells, pid = cells_and_ids[pi]
            for ci in cells:
                labels[ci] = pid
        return canonical_labeling(bytes(labels)) in anti

    return hook


def query_solve(table, config, seed_landmarks=True):
    """Landmark-assisted solve.

    With seed_landmarks=True the frontier starts with the landmark states
    (best extension count first) and falls back to the empty assembly, so
    the search stays complete whatever the table holds; each seeded state
    costs one node. With seed_landmarks=False the search runs from the
    empty assembly and the table contributes dead-state pruning only,
    which is the mode the trade-off sweep measures (its cost is a
    monotone function of the table prefix, where jump targets are not).
    Dead-state pruning applies at the table's depth in both modes.
    Returns the first solution (or None) and a TradeoffRecord of
    query-phase costs.
    """
    if not table.entries:
        raise NoLandmarksError("table has no entries")
    seeds = [table.representatives[k] for k, _ in table.landmarks()]
    solutions, stats = solve(
        config,
        initial_states=(seeds + [PuzzleState()]) if seed_landmarks else None,
        prune_hook=_anti_prune_hook(table),
    )
    record = TradeoffRecord(
        depth=table.depth,
        num_landmarks=len(seeds),
        preprocessing_time=table.preprocessing_time,
        preprocessing_nodes=table.preprocessing_nodes,
        query_time=stats.elapsed,
        query_nodes=stats.total_nodes,
    )
    return (solutions[0] if solutions else None), record


def tradeoff_sweep(depths, landmark_counts, base_strategy):
    """One TradeoffRecord per (depth, count) pair, in sweep order.

    count = 0 means no preprocessing at all: the query is a plain solve
    and the record's preprocessing figures are zero. Tables are rebuilt
    per count; the build-order prefix property makes preprocessing_nodes
    nondecreasing in the count at fixed depth, and because the query runs
    in pruning-only mode (seed_landmarks=False) a larger dead-state
    prefix can only remove query nodes, never add them.
    """
    records = []
    for depth in depths:
        for count in landmark_counts:
            if count == 0:
                start = time.perf_counter()
                _, stats = solve(base_strategy)
                records.append(TradeoffRecord(
                    depth=depth, num_landmarks=0,
                    preprocessing_time=0.0, preprocessing_nodes=0,
                    query_time=stats.elapsed, query_nodes=stats.total_nodes,
                ))
                continue
            table = build_table(depth, base_strategy,
                                landmark_count_limit=count)
            _, record = query_solve(table, base_strategy,
                                    seed_landmarks=False)
            records.append(record)
    return records


def effective_bf_upper_bound(table):
    """Per-depth average out-degrees of the base strategy's search tree
    after deleting the table's dead states and their incident edges.

    A successor whose canonical form is a known anti-landmark is not
    visited and does not count toward its parent's out-degree, so every
    per-depth average is at most the unpruned one.
    """
    cfg = table.base_strategy
    anti = table.anti_landmarks()
    probe_depth = table.depth
    rng = random.Random(cfg.seed)
    degree_sum = [0] * 7
    node_count = [0] * 7
    cells_and_ids = [
        ([cell_index(*c) for c in p.cells], p.piece_id) for p in _PLACEMENTS
    ]
    labels = bytearray(NUM_CELLS)

    def rec(occ, used, d):
        if d < 7:
            node_count[d] += 1
        if d >= 6:
            return
        _, cands = _select_cell(occ, used, cfg.ordering, rng)
        kept = []
        for pi in cands:
            if d + 1 == probe_depth and anti:
                cells, pid = cells_and_ids[pi]
                for ci in cells:
                    labels[ci] = pid
                dead = canonical_labeling(bytes(labels)) in anti
                for ci in cells:
                    labels[ci] = 0
                if dead:
                    continue
            kept.append(pi)
        degree_sum[d] += len(kept)
        for pi in kept:
            cells, pid = cells_and_ids[pi]
            for ci in cells:
                labels[ci] = pid
            rec(occ | _MASKS[pi], used | _PIECE_BITS[pi], d + 1)
            for ci in cells:
                labels[ci] = 0

    rec(0, 0, 0)
    return [degree_sum[d] / node_count[d] if node_count[d] else 0.0
            for d in range(7)]


# ---------------------------------------------------------------------------
# persistence

_MAGIC = b"SLT1"


def save_table(table, path):
    """Versioned binary dump: header, then sorted entries as
    (canonical key, count, multiplicity, representative labeling)."""
    strategy = (json.dumps(table.base_strategy.describe(), sort_keys=True)
                if table.base_strategy is not None else "")
    sbytes = strategy.encode()
    limit = -1 if table.landmark_count_limit is None else table.landmark_count_limit
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack(
            "<BIiQdI", table.depth, table.landmark_threshold, limit,
            table.preprocessing_nodes, table.preprocessing_time, len(sbytes),
        ))
        fh.write(sbytes)
        fh.write(struct.pack("<I", len(table.entries)))
        for key in sorted(table.entries):
            rep = table.representatives[key]
            fh.write(key)
            fh.write(struct.pack(
                "<II", table.entries[key], table.multiplicity.get(key, 1)
            ))
            fh.write(labeling(rep))


def load_table(path):
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError("not a landmark table file")
        depth, threshold, limit, pre_nodes, pre_time, slen = struct.unpack(
            "<BIiQdI", fh.read(struct.calcsize("<BIiQdI"))
        )
        fh.read(slen)  # strategy fingerprint, informational
        (count,) = struct.unpack("<I", fh.read(4))
        table = LandmarkTable(
            depth=depth,
            entries={},
            landmark_threshold=threshold,
            landmark_count_limit=None if limit < 0 else limit,
            preprocessing_nodes=pre_nodes,
            preprocessing_time=pre_time,
        )
        for _ in range(count):
            key = fh.read(NUM_CELLS)
            ext, mult = struct.unpack("<II", fh.read(8))
            rep = fh.read(NUM_CELLS)
            table.entries[key] = ext
            table.multiplicity[key] = mult
            table.representatives[key] = state_from_text(
                "".join(str(b) for b in rep)
            )
    return table


def export_json(table):
    """JSON-friendly view: entries keyed by the representative's 27-char
    text form, with canonical keys as digit strings."""
    return {
        "format": 1,
        "depth": table.depth,
        "landmark_threshold": table.landmark_threshold,
        "landmark_count_limit": table.landmark_count_limit,
        "preprocessing_nodes": table.preprocessing_nodes,
        "preprocessing_time": table.preprocessing_time,
        "entries": [
            {
                "canonical": "".join(str(b) for b in key),
                "extension_count": table.entries[key],
                "multiplicity": table.multiplicity.get(key, 1),
                "representative": solution_text(table.representatives[key]),
            }
            for key in sorted(table.entries)
        ],
    }
