import random

import pytest

from somalab import core
from somalab.core import (
    OverlapError,
    PieceReuseError,
    PuzzleState,
    all_placements,
    apply,
    canonicalize,
    enumerate_placements,
    generate_orientations,
    load_pieces,
    remove_last,
    solution_text,
    state_from_text,
)

# Oracle values computed by brute-force rotation of each piece's cell set
# through all 24 proper rotations followed by dedup (see the orientation
# generator itself, which the counts pin down against regressions).
ORIENTATION_COUNTS = {"v": 12, "l": 24, "t": 12, "z": 12, "a": 12, "b": 12, "p": 8}
PLACEMENT_COUNTS = {"v": 144, "l": 144, "t": 72, "z": 72, "a": 96, "b": 96, "p": 64}


def test_piece_set_shape():
    pieces = load_pieces()
    assert len(pieces) == 7
    assert [p.id for p in pieces] == [1, 2, 3, 4, 5, 6, 7]
    sizes = sorted(len(p.cells) for p in pieces)
    assert sizes == [3, 4, 4, 4, 4, 4, 4]


def test_orientation_counts_match_oracle():
    for piece in load_pieces():
        assert len(generate_orientations(piece)) == ORIENTATION_COUNTS[piece.name]


def test_placement_counts_match_oracle():
    for piece in load_pieces():
        assert len(enumerate_placements(piece)) == PLACEMENT_COUNTS[piece.name]


def test_total_placements():
    assert len(all_placements()) == sum(PLACEMENT_COUNTS.values()) == 688


def test_placements_fit_in_box():
    for p in all_placements():
        assert all(0 <= c < 3 for cell in p.cells for c in cell)
        assert p.mask.bit_count() == len(p.cells)


def test_mirror_map_swaps_only_the_chiral_pair():
    mapping = core._mirror_piece_map()
    assert mapping == {1: 1, 2: 2, 3: 3, 4: 4, 5: 6, 6: 5, 7: 7}


def test_apply_rejects_reuse_and_overlap():
    placements = [p for p in all_placements() if p.piece_id == 2]
    state = apply(PuzzleState(), placements[0])
    with pytest.raises(PieceReuseError):
        apply(state, placements[1])
    other = next(
        p for p in all_placements()
        if p.piece_id != 2 and p.mask & placements[0].mask
    )
    with pytest.raises(OverlapError):
        apply(state, other)


def test_remove_last_inverts_apply():
    state = PuzzleState()
    for p in all_placements()[:1]:
        state = apply(state, p)
    assert remove_last(state) == PuzzleState()


def test_canonical_form_invariant_under_symmetry(complete_state):
    # applying any box symmetry to an assembly must not change its
    # canonical form
    base = canonicalize(complete_state).canonical_form
    labels = core.labeling(complete_state)
    mirror = core._mirror_map_bytes()
    from somalab.geometry import symmetry_permutations

    for perm, reflected in symmetry_permutations():
        moved = bytearray(27)
        for i in range(27):
            v = labels[i]
            moved[perm[i]] = mirror[v] if reflected else v
        assert core.canonical_labeling(bytes(moved)) == base


def test_canonical_form_is_minimal(complete_state):
    labels = core.labeling(complete_state)
    assert canonicalize(complete_state).canonical_form <= labels


def test_solution_text_round_trip(complete_state):
    text = solution_text(complete_state)
    assert len(text) == 27
    rebuilt = state_from_text(text)
    assert rebuilt.occupancy == complete_state.occupancy
    assert solution_text(rebuilt) == text


def test_state_from_text_rejects_garbage():
    with pytest.raises(ValueError):
        state_from_text("1" * 26)
    with pytest.raises(ValueError):
        state_from_text("1" * 27)  # 27 cells of one piece is not a placement


def test_enumeration_counts(all_solutions):
    canonical, raw = all_solutions
    assert len(canonical) == 240
    assert raw == 11520
    assert raw == 240 * 48  # no complete assembly has self-symmetry


def test_enumerated_solutions_are_distinct_and_sorted(all_solutions):
    canonical, _ = all_solutions
    forms = [s.canonical_form for s in canonical]
    assert forms == sorted(forms)
    assert len(set(forms)) == len(forms)


def test_random_solution_reconstructs(all_solutions):
    canonical, _ = all_solutions
    rng = random.Random(7)
    for sol in rng.sample(canonical, 5):
        text = "".join(str(b) for b in sol.canonical_form)
        state = state_from_text(text)
        assert state.is_complete()
        assert canonicalize(state).canonical_form == sol.canonical_form
