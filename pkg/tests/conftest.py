import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from braids import closure  # noqa: E402

settings.register_profile(
    "default", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("default")

# lines collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list = []


@st.composite
def braid_words(draw, max_strands=3, max_length=5, positive=False):
    """(strands, word) with every generator used at least once."""
    strands = draw(st.integers(2, max_strands))
    gens = list(range(1, strands))
    extra = draw(st.lists(st.sampled_from(gens), max_size=max_length - len(gens)))
    word = gens + extra
    word = draw(st.permutations(word))
    if positive:
        return strands, list(word)
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=len(word), max_size=len(word)))
    return strands, [g * s for g, s in zip(word, signs)]


@st.composite
def diagrams(draw, **kwargs):
    strands, word = draw(braid_words(**kwargs))
    return closure(strands, word)


@st.composite
def knot_diagrams(draw, **kwargs):
    d = draw(diagrams(**kwargs))
    from hypothesis import assume

    assume(d.num_components == 1)
    return d


@pytest.fixture(scope="session")
def corpus_small():
    from bnflow import corpus

    return corpus.all_diagrams(6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
