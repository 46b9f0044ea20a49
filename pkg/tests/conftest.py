import pytest

from somalab.core import enumerate_all_solutions
from somalab.search import Ordering, StopMode, StrategyConfig, solve


@pytest.fixture(scope="session")
def all_solutions():
    """(canonical solutions, raw count) from the dedicated enumerator.
    Computed once; several suites cross-check against it."""
    return enumerate_all_solutions()


@pytest.fixture(scope="session")
def exhaustive_cell_run():
    """Full cell-ordered exhaustive search, no pruning."""
    config = StrategyConfig(ordering=Ordering.CELL_ORDERED, seed=0,
                            stop_mode=StopMode.EXHAUSTIVE)
    return solve(config)


@pytest.fixture(scope="session")
def complete_state(all_solutions):
    from somalab.core import state_from_text

    canonical, _ = all_solutions
    text = "".join(str(b) for b in canonical[0].canonical_form)
    return state_from_text(text)
