"""CNF encoding of the packing problem and a small DPLL solver.

One Boolean variable per valid placement. Constraints: each piece is
placed exactly once and each cell is covered exactly once, with at-most-
one expressed pairwise. Includes DIMACS emission/parsing, unit-propagating
DPLL, and model enumeration via blocking clauses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .core import PuzzleState, SomaError, all_placements, apply, load_pieces
from .geometry import NUM_CELLS


class InvalidModelError(SomaError):
    """A model does not describe a consistent packing."""


class ResourceLimitError(SomaError):
    """Model enumeration exceeded its cap."""


@dataclass
class Cnf:
    num_vars: int
    clauses: list                       # list of tuples of nonzero ints
    var_names: dict = field(default_factory=dict)   # var -> "P_{xyz},piece"
    comments: list = field(default_factory=list)


def variable_names():
    """DIMACS variable index (1-based) -> human-readable placement name.

    Variable v corresponds to all_placements()[v-1]; the name records the
    anchor cell and piece, e.g. ``P_000_v``.
    """
    pieces = {p.id: p.name for p in load_pieces()}
    names = {}
    for i, pl in enumerate(all_placements()):
        x, y, z = pl.anchor
        names[i + 1] = f"P_{x}{y}{z}_{pieces[pl.piece_id]}_o{pl.orientation_index}"
    return names


def encode():
    """Build the CNF. Clause layout: 7 piece at-least-one clauses, 27 cell
    at-least-one clauses, then all pairwise at-most-one clauses."""
    placements = all_placements()
    nvars = len(placements)
    by_piece = {}
    by_cell = {c: [] for c in range(NUM_CELLS)}
    for i, pl in enumerate(placements):
        v = i + 1
        by_piece.setdefault(pl.piece_id, []).append(v)
        for cell in pl.cells:
            x, y, z = cell
            by_cell[9 * x + 3 * y + z].append(v)

    clauses = []
    for pid in sorted(by_piece):
        clauses.append(tuple(by_piece[pid]))
    for c in range(NUM_CELLS):
        clauses.append(tuple(by_cell[c]))
    for group in [by_piece[p] for p in sorted(by_piece)] + \
                 [by_cell[c] for c in range(NUM_CELLS)]:
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                clauses.append((-group[a], -group[b]))
    return Cnf(num_vars=nvars, clauses=clauses, var_names=variable_names())


def expected_clause_count():
    """Closed-form clause count: 34 at-least-one clauses plus pairwise
    at-most-one over every piece group and cell group."""
    placements = all_placements()
    per_piece = {}
    per_cell = {c: 0 for c in range(NUM_CELLS)}
    for pl in placements:
        per_piece[pl.piece_id] = per_piece.get(pl.piece_id, 0) + 1
        for x, y, z in pl.cells:
            per_cell[9 * x + 3 * y + z] += 1
    alo = len(per_piece) + NUM_CELLS
    amo = sum(comb(n, 2) for n in per_piece.values())
    amo += sum(comb(n, 2) for n in per_cell.values())
    return alo + amo


def emit_dimacs(cnf, path=None):
    """Serialize to DIMACS CNF. Output is byte-stable for a given Cnf."""
    lines = []
    lines.append("c packing instance, one variable per placement")
    for v in sorted(cnf.var_names):
        lines.append(f"c var {v} = {cnf.var_names[v]}")
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    for cl in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in cl) + " 0")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def parse_dimacs(text):
    num_vars = None
    clauses = []
    names = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 5 and parts[1] == "var" and parts[3] == "=":
                names[int(parts[2])] = parts[4]
            continue
        if line.startswith("p"):
            _, fmt, nv, _nc = line.split()
            assert fmt == "cnf"
            num_vars = int(nv)
            continue
        lits = [int(t) for t in line.split()]
        assert lits[-1] == 0
        clauses.append(tuple(lits[:-1]))
    return Cnf(num_vars=num_vars, clauses=clauses, var_names=names)


class _Solver:
    """DPLL over the instance's two clause classes: long positive
    at-least-one clauses and binary negative at-most-one clauses. The
    binary clauses are folded into a conflict-adjacency bitmask per
    variable; assigning v true unit-propagates every neighbor to false.
    Branching picks the open clause with the fewest remaining candidate
    variables, so forced assignments (one candidate) and conflicts (zero)
    are handled as the degenerate cases."""

    def __init__(self, cnf):
        self.cnf = cnf
        self.n = cnf.num_vars
        self.alo = [cl for cl in cnf.clauses
                    if not (len(cl) == 2 and cl[0] < 0 and cl[1] < 0)]
        if any(any(lit < 0 for lit in cl) for cl in self.alo):
            raise ValueError("expected only positive non-binary clauses")
        inc = [0] * (self.n + 1)
        for cl in cnf.clauses:
            if len(cl) == 2 and cl[0] < 0 and cl[1] < 0:
                a, b = -cl[0], -cl[1]
                inc[a] |= 1 << b
                inc[b] |= 1 << a
        self.incompatible = inc
        self.clause_masks = [
            sum(1 << v for v in cl) for cl in self.alo
        ]

    def enumerate(self, max_models=None, on_model=None):
        """All satisfying assignments, each a sorted tuple of true
        variables. Exhaustive DFS that keeps searching after each model,
        which is equivalent to restarting with a blocking clause over the
        model's positive literals but without re-deriving the prefix.
        Each open clause is satisfied by exactly one variable of any
        model (the at-most-one side), so no model is reported twice."""
        models = []
        masks = self.clause_masks
        clauses = self.alo
        chosen = []

        def rec(chosen_mask, forbidden):
            best = None
            best_count = None
            for ci, m in enumerate(masks):
                if m & chosen_mask:
                    continue
                count = (m & ~forbidden).bit_count()
                if count == 0:
                    return                      # dead branch
                if best_count is None or count < best_count:
                    best, best_count = ci, count
                    if count == 1:
                        break
            if best is None:
                model = tuple(sorted(chosen))
                models.append(model)
                if on_model is not None:
                    on_model(model)
                if max_models is not None and len(models) >= max_models:
                    raise ResourceLimitError(f"model cap {max_models} reached")
                return
            for v in clauses[best]:
                if forbidden >> v & 1:
                    continue
                chosen.append(v)
                rec(chosen_mask | 1 << v, forbidden | self.incompatible[v])
                chosen.pop()

        rec(0, 0)
        return models


class _FoundModel(Exception):
    pass


def dpll_solve(cnf):
    """First satisfying assignment as a sorted tuple of true variables,
    or None. The model is verified against every clause before return."""
    found = []

    def grab(model):
        found.append(model)
        raise _FoundModel

    try:
        _Solver(cnf).enumerate(on_model=grab)
    except _FoundModel:
        pass
    if not found:
        return None
    _verify(cnf, found[0])
    return found[0]


def enumerate_models(cnf, max_models=None):
    """Every satisfying assignment. Raises ResourceLimitError if a cap is
    given and reached."""
    return _Solver(cnf).enumerate(max_models=max_models)


def _verify(cnf, model):
    true = set(model)
    for cl in cnf.clauses:
        if not any(lit in true if lit > 0 else -lit not in true
                   for lit in cl):
            raise InvalidModelError(f"clause {cl} unsatisfied")


def decode(model):
    """Turn a model (iterable of true variable indices) into a complete
    PuzzleState. Raises InvalidModelError on anything inconsistent."""
    placements = all_placements()
    state = PuzzleState()
    try:
        for v in sorted(model):
            if not 1 <= v <= len(placements):
                raise InvalidModelError(f"variable {v} out of range")
            state = apply(state, placements[v - 1])
    except SomaError as exc:
        if isinstance(exc, InvalidModelError):
            raise
        raise InvalidModelError(str(exc)) from exc
    if not state.is_complete():
        raise InvalidModelError("model does not fill the cube")
    return state
