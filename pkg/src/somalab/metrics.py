"""Branching-factor statistics: sampling, exhaustive expansion, and the
effective branching factor.

Two out-degree models are supported and always named explicitly:

* ``committed``: a node commits to one (randomly chosen) empty cell and
  its out-degree is the number of legal placements covering that cell.
  This matches the solver family's successor semantics and is the model
  behind the headline full-tree average.
* ``configuration``: the out-degree is the number of legal next
  placements over all empty positions (the full configuration graph).

Zero-out-degree observations are leaves; depth means exclude them, and
the headline average is the unweighted mean of the per-depth means over
depths 0..6. The node-weighted (pooled) alternative is reported next to
it so both averaging conventions are available.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .core import SomaError
from .geometry import NUM_CELLS
from .search import _MASKS, _PIECE_BITS, _candidates

MAX_DEPTH = 7


class SamplingExhaustedError(SomaError):
    """Random-walk restarts exceeded the configured cap."""


class ResourceLimitError(SomaError):
    """Exhaustive expansion exceeded its node budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivisionByZeroError(SomaError):
    """A depth had no nodes at all; the formula is undefined there."""


# Placement-level conflict bitsets: conflicts[i] marks every placement
# that becomes illegal once placement i is on the board (same piece or
# overlapping cells). `legal` state fits in one big int.
_P = len(_MASKS)
_ALL_LEGAL = (1 << _P) - 1
_CONFLICTS = []
for _i in range(_P):
    _c = 0
    for _j in range(_P):
        if _PIECE_BITS[_i] == _PIECE_BITS[_j] or _MASKS[_i] & _MASKS[_j]:
            _c |= 1 << _j
    _CONFLICTS.append(_c)
_CONFLICTS = tuple(_CONFLICTS)

# For combination-order enumeration: bits with index > i.
_HIGHER = tuple(_ALL_LEGAL ^ ((1 << (i + 1)) - 1) for i in range(_P))


def _nth_set_bit(x, k):
    for _ in range(k):
        x &= x - 1
    return (x & -x).bit_length() - 1


@dataclass
class BranchingProfile:
    per_depth_samples: dict            # depth -> list of out-degrees (zeros kept)
    per_depth_mean: dict               # depth -> mean over non-leaf observations
    overall_mean: float                # unweighted mean of per_depth_mean
    pooled_mean: float                 # node-weighted mean over all non-leaf obs
    ci95: tuple
    metadata: dict = field(default_factory=dict)


def _walk_committed(rng, max_depth, record):
    """One random walk in the committed model; records (depth, out_degree)
    via `record` until a dead end or max_depth placements."""
    occ = used = 0
    for d in range(max_depth + 1):
        empty = [i for i in range(NUM_CELLS) if not occ >> i & 1]
        cell = rng.choice(empty)
        cands = _candidates(occ, used, cell)
        record(d, len(cands))
        if not cands or d == max_depth:
            return d == max_depth
        pi = rng.choice(cands)
        occ |= _MASKS[pi]
        used |= _PIECE_BITS[pi]
    return True


def _walk_configuration(rng, max_depth, record):
    legal = _ALL_LEGAL
    for d in range(max_depth + 1):
        n = legal.bit_count()
        record(d, n)
        if n == 0 or d == max_depth:
            return d == max_depth
        pi = _nth_set_bit(legal, rng.randrange(n))
        legal &= ~_CONFLICTS[pi]
    return True


_WALKERS = {"committed": _walk_committed, "configuration": _walk_configuration}


def sample_branching(depth, num_samples, seed, model="committed",
                     restart_cap=1_000_000):
    """Out-degrees of `num_samples` random reachable depth-`depth` states.

    States are drawn by uniform random walks from the empty assembly; a
    walk that dead-ends before the target depth is rejected and
    restarted. Raises SamplingExhaustedError when restarts exceed
    `restart_cap`.
    """
    if not 1 <= depth <= 6:
        raise ValueError("depth must be in 1..6")
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    walker = _WALKERS[model]
    rng = random.Random(seed)
    out = []
    restarts = 0
    while len(out) < num_samples:
        seen = {}
        reached = walker(rng, depth, seen.__setitem__)
        if reached:
            out.append(seen[depth])
        else:
            restarts += 1
            if restarts > restart_cap:
                raise SamplingExhaustedError(
                    f"{restarts} restarts while sampling depth {depth}"
                )
    return out


def branching_profile(num_samples=10_000, seed=0, model="committed",
                      ci_resamples=10_000):
    """Per-depth branching statistics from `num_samples` random walks.

    Each walk contributes one observation at every depth it reaches
    (depths 0..6); walks that dead-end early simply stop contributing, so
    the depth-d sample is the restart-conditioned distribution of
    sample_branching. Zero-out-degree observations are leaves: kept in
    per_depth_samples, excluded from means.
    """
    walker = _WALKERS[model]
    rng = random.Random(seed)
    samples = {d: [] for d in range(MAX_DEPTH)}
    for _ in range(num_samples):
        walker(rng, 6, lambda d, g: samples[d].append(g))
    means = {
        d: float(np.mean([g for g in obs if g > 0])) if any(obs) else 0.0
        for d, obs in samples.items()
    }
    overall = float(np.mean(list(means.values())))
    pooled_obs = [g for obs in samples.values() for g in obs if g > 0]
    pooled = float(np.mean(pooled_obs))
    ci = _bootstrap_ci_overall(samples, seed, ci_resamples)
    return BranchingProfile(
        per_depth_samples=samples,
        per_depth_mean=means,
        overall_mean=overall,
        pooled_mean=pooled,
        ci95=ci,
        metadata={
            "model": model,
            "num_walks": num_samples,
            "seed": seed,
            "leaf_exclusion": "out-degree 0 excluded from means",
            "overall_convention": "unweighted mean of depth means, d=0..6",
            "ci_method": f"bias-corrected bootstrap, {ci_resamples} resamples",
            "rng": "python-random-mt19937 / numpy-pcg64",
        },
    )


def _bootstrap_ci_overall(samples, seed, resamples):
    """Bias-corrected bootstrap CI for the overall (mean-of-depth-means)
    statistic. Resamples each depth's non-leaf observations."""
    gen = np.random.default_rng(seed)
    arrays = [np.array([g for g in obs if g > 0], dtype=float)
              for obs in samples.values()]
    arrays = [a for a in arrays if len(a)]
    point = np.mean([a.mean() for a in arrays])
    stats = np.empty(resamples)
    for r in range(resamples):
        stats[r] = np.mean([
            a[gen.integers(0, len(a), len(a))].mean() for a in arrays
        ])
    stats.sort()
    # bias correction
    prop = np.clip((stats < point).mean(), 1e-6, 1 - 1e-6)
    z0 = _norm_ppf(prop)
    lo = _norm_cdf(2 * z0 + _norm_ppf(0.025))
    hi = _norm_cdf(2 * z0 + _norm_ppf(0.975))
    return (
        float(np.quantile(stats, lo)),
        float(np.quantile(stats, hi)),
    )


def _norm_ppf(p):
    from statistics import NormalDist

    return NormalDist().inv_cdf(float(p))


def _norm_cdf(x):
    from statistics import NormalDist

    return NormalDist().cdf(float(x))


def exhaustive_branching(depth, node_budget=5_000_000):
    """Exact out-degree histogram over all reachable depth-`depth` states
    of the configuration graph (states are placement sets).

    Feasible for shallow depths; raises ResourceLimitError carrying the
    partial histogram once `node_budget` states have been expanded.
    """
    if not 1 <= depth <= 6:
        raise ValueError("depth must be in 1..6")
    hist = {}
    visited = 0

    def rec(legal, lo_iter, d):
        nonlocal visited
        if d == depth:
            deg = legal.bit_count()
            hist[deg] = hist.get(deg, 0) + 1
            return
        it = legal & lo_iter
        while it:
            bit = it & -it
            it ^= bit
            pi = bit.bit_length() - 1
            visited += 1
            if visited > node_budget:
                raise ResourceLimitError(
                    f"node budget {node_budget} exceeded at depth {depth}",
                    partial=dict(hist),
                )
            rec(legal & ~_CONFLICTS[pi], _HIGHER[pi], d + 1)

    rec(_ALL_LEGAL, _ALL_LEGAL, 0)
    return hist


def effective_bf(total_nodes, tol=1e-9):
    """The effective branching factor b*: the unique nonnegative root of
    sum_{d=0}^{6} x^d = N. Exact on integer roots, bisection otherwise."""
    if total_nodes < 1:
        raise ValueError("node count must be >= 1")
    n = float(total_nodes)

    def poly(x):
        return sum(x ** d for d in range(7))

    # exact integer roots (N=7 -> 1, N=127 -> 2, ...)
    b = 0.0
    while poly(b) < n:
        b += 1.0
    if poly(b) == n:
        return b
    lo, hi = b - 1.0, b
    for _ in range(200):
        mid = (lo + hi) / 2
        value = poly(mid)
        if abs(value - n) <= tol * n or hi - lo < 1e-15:
            return mid
        if value < n:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def branching_means_from_counts(nonleaf_counts, leaf_counts, max_depth=None):
    """Two whole-tree branching summaries from per-depth node counts.

    `nonleaf_counts[d]` is the number of non-leaf nodes at depth d and
    `leaf_counts[d]` the non-solution leaves there (d = 1..D). Returns a
    dict with:

    * ``nonleaf_fraction_mean``: (1/D) * sum_d N_d / (N_d + L_d), the
      printed reference formula (a fraction, <= 1);
    * ``ratio_mean``: the level-ratio convention, mean over d of
      C_d / C_{d-1} with C_d = N_d + L_d (C_0 = 1), which is the
      convention used for headline numbers;
    * ``skipped_depths``: depths where N_d + L_d = 0 (flagged, skipped).
    """
    D = max_depth if max_depth is not None else len(nonleaf_counts)
    if D < 1:
        raise ValueError("need at least one depth")
    fractions = []
    ratios = []
    skipped = []
    prev_total = 1
    for d in range(1, D + 1):
        n_d = nonleaf_counts[d - 1]
        l_d = leaf_counts[d - 1]
        if n_d < 0 or l_d < 0:
            raise ValueError("counts must be nonnegative")
        total = n_d + l_d
        if total == 0:
            skipped.append(d)
            prev_total = 0
            continue
        fractions.append(n_d / total)
        if prev_total > 0:
            ratios.append(total / prev_total)
        prev_total = total
    if not fractions:
        raise DivisionByZeroError("every depth had zero nodes")
    return {
        "nonleaf_fraction_mean": sum(fractions) / D,
        "ratio_mean": sum(ratios) / len(ratios) if ratios else 0.0,
        "skipped_depths": skipped,
    }


def strategy_matrix(orderings=None, seeds=range(20), landmark_depth=2,
                    landmark_count=100):
    """Effective branching factors for the strategy grid.

    Rows are orderings, columns the four variants (plain, pruning,
    landmarks, pruning+landmarks). Randomized entries average total node
    counts over `seeds`; deterministic orderings ignore the seed. Cell
    values are b* at full precision; round to one decimal for display.
    """
    from .landmarks import build_table, query_solve
    from .search import Ordering, StrategyConfig, solve

    if orderings is None:
        orderings = [Ordering.RANDOMIZED, Ordering.CELL_ORDERED,
                     Ordering.LAYER_ORDERED, Ordering.MCV]
    tables = {}
    grid = {}
    for ordering in orderings:
        row = {}
        for pruning in (False, True):
            for use_landmarks in (False, True):
                if use_landmarks:
                    if ordering not in tables:
                        tables[ordering] = build_table(
                            landmark_depth,
                            StrategyConfig(ordering=ordering, seed=0),
                            landmark_count_limit=landmark_count,
                        )
                nodes = []
                run_seeds = seeds if ordering is Ordering.RANDOMIZED else [0]
                for seed in run_seeds:
                    cfg = StrategyConfig(ordering=ordering, pruning=pruning,
                                         seed=seed)
                    if use_landmarks:
                        _, record = query_solve(tables[ordering], cfg)
                        nodes.append(record.query_nodes)
                    else:
                        _, stats = solve(cfg)
                        nodes.append(stats.total_nodes)
                key = ("pruning" if pruning else "plain",
                       "landmarks" if use_landmarks else "none")
                row[key] = effective_bf(sum(nodes) / len(nodes))
        grid[ordering.value] = row
    return grid
