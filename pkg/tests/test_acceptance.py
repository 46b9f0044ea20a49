"""Acceptance gate: one test (and one printed pass/fail line) per
headline criterion. Tolerances and thresholds are pinned here and only
here; module tests cover the finer-grained behavior.
"""

import itertools
import random
from collections import deque
from statistics import pvariance

import pytest

from somalab import metrics, sat, zoo
from somalab.core import canonicalize
from somalab.landmarks import build_table, query_solve, tradeoff_sweep
from somalab.search import Ordering, StopMode, StrategyConfig, solve

BRANCHING_BAND = (27.84, 30.72)


def report(name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}: {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_solution_count_dfs_equals_sat(all_solutions):
    canonical, raw = all_solutions
    models = sat.enumerate_models(sat.encode())
    sat_forms = {canonicalize(sat.decode(m)).canonical_form for m in models}
    dfs_forms = {s.canonical_form for s in canonical}
    report(
        "solution count: DFS and SAT each find 240 canonical solutions",
        len(dfs_forms) == 240 and sat_forms == dfs_forms and len(models) == raw,
        f"dfs={len(dfs_forms)} sat={len(sat_forms)} raw={len(models)}",
    )


@pytest.fixture(scope="module")
def profile():
    return metrics.branching_profile(num_samples=10_000, seed=0)


def test_branching_mean_in_interval(profile):
    lo, hi = BRANCHING_BAND
    in_band = [m for m in (profile.overall_mean, profile.pooled_mean)
               if lo <= m <= hi]
    report(
        "branching mean: at least one averaging convention lands in "
        f"[{lo}, {hi}]",
        bool(in_band),
        f"depth-mean avg={profile.overall_mean:.3f} "
        f"pooled={profile.pooled_mean:.3f}",
    )


def test_monotone_decay_and_variance_funnel(profile):
    means = [profile.per_depth_mean[d] for d in range(1, 7)]
    decreasing = all(a > b for a, b in zip(means, means[1:]))
    var = {
        d: pvariance([g for g in profile.per_depth_samples[d] if g > 0])
        for d in (2, 6)
    }
    report(
        "monotone decay: per-depth means strictly decrease d1..d6 and "
        "depth-6 variance < depth-2 variance",
        decreasing and var[6] < var[2],
        f"means={[round(m, 2) for m in means]} "
        f"var2={var[2]:.1f} var6={var[6]:.3f}",
    )


def test_cnf_size():
    cnf = sat.encode()
    closed_form = sat.expected_clause_count()
    report(
        "CNF size: clause count > 150,000 and equals the closed form",
        len(cnf.clauses) > 150_000 and len(cnf.clauses) == closed_form,
        f"clauses={len(cnf.clauses)}",
    )


def test_effective_bf_sanity():
    exact = metrics.effective_bf(7) == 1.0 and metrics.effective_bf(127) == 2.0
    rng = random.Random(2024)
    monotone = True
    for _ in range(1000):
        n = rng.randrange(1, 10**9)
        if metrics.effective_bf(n + 1) < metrics.effective_bf(n):
            monotone = False
            break
    report(
        "effective branching factor: exact at 7 and 127, monotone over "
        "1000 random node counts",
        exact and monotone,
    )


def test_strategy_ordering(exhaustive_cell_run):
    rand_nodes = []
    for seed in range(20):
        _, stats = solve(StrategyConfig(ordering=Ordering.RANDOMIZED, seed=seed))
        rand_nodes.append(stats.total_nodes)
    b_rand = metrics.effective_bf(sum(rand_nodes) / len(rand_nodes))

    _, cell = solve(StrategyConfig(ordering=Ordering.CELL_ORDERED, seed=0))
    b_cell = metrics.effective_bf(cell.total_nodes)

    pruned_cfg = StrategyConfig(ordering=Ordering.CELL_ORDERED, seed=0,
                                pruning=True)
    _, cell_prune = solve(pruned_cfg)
    b_prune = metrics.effective_bf(cell_prune.total_nodes)

    table = build_table(2, pruned_cfg, landmark_count_limit=100)
    _, record = query_solve(table, pruned_cfg)
    b_landmark = metrics.effective_bf(record.query_nodes)

    ordering_ok = b_rand > b_cell >= b_prune >= b_landmark

    plain_solutions, _ = exhaustive_cell_run
    pruned_solutions, _ = solve(StrategyConfig(
        ordering=Ordering.CELL_ORDERED, seed=0, pruning=True,
        stop_mode=StopMode.EXHAUSTIVE,
    ))
    prune_safe = {frozenset(s.placements) for s in plain_solutions} == \
        {frozenset(s.placements) for s in pruned_solutions} and \
        len(pruned_solutions) == len(plain_solutions)

    report(
        "strategy ordering: b*(random) > b*(cell) >= b*(cell+prune) >= "
        "b*(cell+prune+landmarks); pruning preserves the exhaustive "
        "solution set",
        ordering_ok and prune_safe,
        f"b*={b_rand:.2f}/{b_cell:.2f}/{b_prune:.2f}/{b_landmark:.2f}",
    )


def test_backtrack_modal_depths():
    num_seeds = 100
    rand_hist = [0] * 8
    for seed in range(num_seeds):
        _, stats = solve(StrategyConfig(ordering=Ordering.RANDOMIZED, seed=seed))
        for d, b in enumerate(stats.backtracks_per_depth):
            rand_hist[d] += b
    _, cell_stats = solve(StrategyConfig(ordering=Ordering.CELL_ORDERED, seed=0))
    cell_hist = cell_stats.backtracks_per_depth
    rand_mode = max(range(8), key=lambda d: rand_hist[d])
    cell_mode = max(range(8), key=lambda d: cell_hist[d])
    report(
        f"backtrack shapes: over {num_seeds} seeds the randomized modal "
        "backtrack depth is strictly below the cell-ordered one",
        rand_mode < cell_mode,
        f"random mode={rand_mode} cell mode={cell_mode}",
    )


def test_landmark_tradeoff():
    base = StrategyConfig(ordering=Ordering.CELL_ORDERED, seed=0)
    records = tradeoff_sweep([2, 3], [0, 10, 100, 1000], base)
    by_depth = {
        d: [r for r in records if r.depth == d] for d in (2, 3)
    }
    d2 = by_depth[2]
    pre_ok = all(a.preprocessing_nodes <= b.preprocessing_nodes
                 for a, b in zip(d2, d2[1:]))
    query_ok = all(a.query_nodes >= b.query_nodes
                   for a, b in zip(d2, d2[1:]))
    red2 = d2[0].query_nodes - d2[-1].query_nodes
    d3 = by_depth[3]
    red3 = d3[0].query_nodes - d3[-1].query_nodes
    report(
        "landmark trade-off: depth-2 preprocessing nondecreasing and "
        "query nonincreasing over {0,10,100,1000}; depth-3 reduction "
        "smaller than depth-2's",
        pre_ok and query_ok and red3 < red2,
        f"d2 query={[r.query_nodes for r in d2]} "
        f"reductions d2={red2} d3={red3}",
    )


def test_eight_puzzle():
    nb = zoo.eight_puzzle_space(non_backtracking=True)
    rng = random.Random(0)
    counts_ok = True
    pattern_seen = False
    corners = {0, 2, 6, 8}

    def kind(pos):
        return "center" if pos == 4 else ("corner" if pos in corners else "side")

    for _ in range(10_000):
        state = nb.initial()
        kinds = []
        for _ in range(50):
            succ = nb.successors(state)
            tiles, prev = state
            pos = tiles.index(0)
            kinds.append(kind(pos))
            expected = {"corner": 1, "side": 2, "center": 3}[kind(pos)]
            if prev is not None and len(succ) != expected:
                counts_ok = False
            state = rng.choice(succ)
        for a, b, c in zip(kinds, kinds[1:], kinds[2:]):
            if (a, b, c) == ("center", "side", "center"):
                pattern_seen = True

    distances = zoo.eight_puzzle_distances()
    diameter = max(distances.values())
    worst = [s for s, d in distances.items() if d == diameter]
    # independent return trip: BFS from a worst-case state must reach the
    # goal at the same distance
    start = worst[0]
    dist = {start: 0}
    queue = deque([start])
    goal_dist = None
    while queue:
        tiles = queue.popleft()
        if tiles == zoo._GOAL_TILES:
            goal_dist = dist[tiles]
            break
        blank = tiles.index(0)
        for npos in zoo._GRID_NEIGHBORS[blank]:
            lst = list(tiles)
            lst[blank], lst[npos] = lst[npos], lst[blank]
            nxt = tuple(lst)
            if nxt not in dist:
                dist[nxt] = dist[tiles] + 1
                queue.append(nxt)

    report(
        "8-puzzle: non-backtracking choice counts {1,2,3}, no "
        "center-side-center in 10,000 walks, BFS eccentricity stable",
        counts_ok and not pattern_seen and len(distances) == 181_440
        and worst and goal_dist == diameter,
        f"D8={diameter} worst_states={len(worst)}",
    )


def test_zoo_monotone_and_recount():
    profiles_ok = True
    for space in (zoo.magic_square_space(), zoo.slothouber_graatsma_space()):
        prof = zoo.zoo_profile(space, num_walks=4000, seed=0)
        means = [prof.per_depth_mean[d] for d in sorted(prof.per_depth_mean)]
        if not all(a >= b - 1e-9 for a, b in zip(means, means[1:])):
            profiles_ok = False

    raw_sg, s_sg = zoo.slothouber_graatsma_solutions()

    # independent recount: pick 6 pairwise-disjoint 1x2x2 blocks out of
    # all 18 positions, fill the rest with unit cubes
    blocks = [b for b in zoo._SG_BLOCKS if len(b) == 4]
    recount = set()
    raw_recount = 0
    for combo in itertools.combinations(range(len(blocks)), 6):
        cells = set()
        ok = True
        for i in combo:
            if cells & blocks[i]:
                ok = False
                break
            cells |= blocks[i]
        if not ok:
            continue
        raw_recount += 1
        partition = tuple(blocks[i] for i in combo) + tuple(
            frozenset([c]) for c in sorted(set(range(27)) - cells)
        )
        recount.add(zoo._partition_canonical(partition))

    report(
        "zoo: magic-square and packing branching profiles nonincreasing; "
        "packing solution count matches an independent recount",
        profiles_ok and s_sg == len(recount) == 1 and raw_sg == raw_recount,
        f"S_sg={s_sg} recount={len(recount)} raw={raw_sg}/{raw_recount}",
    )
