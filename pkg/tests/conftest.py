import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stepup import colorings as col
from stepup import constructions as cons


@pytest.fixture(scope="session")
def rs3():
    return cons.rules_section3()


@pytest.fixture(scope="session")
def rs4():
    return cons.rules_section4()


@pytest.fixture(scope="session")
def searched_d6():
    """A coloring on 6 ground elements every 5-subset of which contains the
    4-tuple template; found by seeded restart search, re-verified exhaustively."""
    res = col.search_coloring(
        6, 5, col.pattern_lemma41(), col.SearchConfig(max_restarts=10**4, rng_seed=0)
    )
    assert isinstance(res, col.PairColoring)
    rep = col.verify_universal(res, 5, col.pattern_lemma41(), col.Exhaustive())
    assert rep.holds
    return res
