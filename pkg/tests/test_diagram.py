import pytest
from hypothesis import given
from hypothesis import strategies as st

from bnflow import corpus
from bnflow.diagram import (
    LinkDiagram,
    ab_labeling,
    circles_of,
    linking_number,
    parse_pd,
    planar_faces,
    resolve,
    seifert_state,
    statistics,
)
from bnflow.errors import (
    EmbeddingFailure,
    IndexOutOfRange,
    InconsistentEdges,
    LengthMismatch,
    MalformedPD,
    NonOrientable,
    SameComponent,
)

from conftest import diagrams

TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"


def test_trefoil_is_positive_knot():
    d = parse_pd(TREFOIL)
    assert (d.n, d.num_components, d.n_plus, d.n_minus) == (3, 1, 3, 0)


def test_empty_code_is_empty_diagram():
    d = parse_pd("")
    assert d.n == 0 and d.num_components == 0
    assert resolve(d, ()).r == 0
    assert seifert_state(d) == ()


def test_json_form_matches_text():
    assert parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]") == parse_pd(TREFOIL)
    assert parse_pd("[[]]").loops == (1,)


def test_crossing_order_is_input_order():
    d = parse_pd("X[3,6,4,1] X[1,4,2,5] X[5,2,6,3]")
    assert d.crossings[0] == (3, 6, 4, 1)


@pytest.mark.parametrize("text,err", [
    ("X[1,2,3]", MalformedPD),
    ("X[1,a,2,3]", MalformedPD),
    ("X[0,1,1,2]", MalformedPD),
    ("Y[1,2,3,4]", MalformedPD),
    ("X[1,4,2,5] X[3,6,4,1] X[5,2,6,7]", InconsistentEdges),
    ("[1,2]", MalformedPD),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_pd(text)


def test_unorientable_code():
    # edge 1 enters both crossings and edge 3 leaves both
    with pytest.raises(NonOrientable):
        parse_pd("X[1,2,3,4] X[1,4,3,2]")


def test_hopf_codes_and_linking():
    pos, neg = corpus.load("hopf_positive"), corpus.load("hopf_negative")
    assert pos.num_components == neg.num_components == 2
    assert linking_number(pos, 0, 1) == 1
    assert linking_number(neg, 0, 1) == -1
    # the conventional two-crossing code is the negative one under our sign rule
    assert parse_pd("X[1,3,2,4] X[3,1,4,2]").signs == (-1, -1)


def test_linking_number_errors():
    d = corpus.load("hopf_positive")
    with pytest.raises(SameComponent):
        linking_number(d, 0, 0)
    with pytest.raises(IndexOutOfRange):
        linking_number(d, 0, 2)
    assert linking_number(corpus.load("unlink2"), 0, 1) == 0


def test_trefoil_resolutions():
    d = parse_pd(TREFOIL)
    assert resolve(d, (0, 0, 0)).r == 2
    assert resolve(d, (1, 1, 1)).r == 3
    with pytest.raises(LengthMismatch):
        resolve(d, (0, 0))


def test_seifert_states():
    assert seifert_state(corpus.load("trefoil_right")) == (0, 0, 0)
    assert seifert_state(corpus.load("trefoil_left")) == (1, 1, 1)


def test_unknot_ab_labels():
    d = corpus.load("unknot")
    assert ab_labeling(d, (1,)).labels == ("a",)
    assert ab_labeling(d, (-1,)).labels == ("b",)


def test_hopf_ab_labels_distinct():
    lab = ab_labeling(corpus.load("hopf_positive"))
    assert sorted(lab.labels) == ["a", "b"]


def test_non_planar_code_rejected():
    # a rotation system with too few faces
    d = LinkDiagram.build([(1, 5, 2, 4), (3, 6, 4, 1), (5, 2, 6, 3)])
    with pytest.raises(EmbeddingFailure):
        planar_faces(d)


def test_statistics_record():
    st_ = statistics(corpus.load("figure_eight"))
    assert st_["crossings"] == 4 and st_["components"] == 1


# properties ------------------------------------------------------------------------

def _seifert_circle_count(d):
    """Follow each strand and at every crossing continue on the other outgoing edge."""
    out_edges = {}
    for x, h in zip(d.crossings, d.heads):
        over_in, over_out = (x[1], x[3]) if h[1] else (x[3], x[1])
        # entering on one strand, leave along the other strand
        out_edges[x[0]] = over_out
        out_edges[over_in] = x[2]
    seen, count = set(), 0
    for e in out_edges:
        if e in seen:
            continue
        count += 1
        while e not in seen:
            seen.add(e)
            e = out_edges[e]
    return count + len(d.loops)


@given(diagrams(max_strands=4, max_length=6))
def test_seifert_state_gives_seifert_circles(d):
    assert resolve(d, seifert_state(d)).r == _seifert_circle_count(d)


@given(diagrams(max_strands=4, max_length=6), st.data())
def test_resolution_partitions_edges(d, data):
    u = tuple(data.draw(st.lists(st.integers(0, 1), min_size=d.n, max_size=d.n)))
    circles = resolve(d, u).circles
    flat = [e for c in circles for e in c]
    assert sorted(flat) == sorted(d.edges)


@given(diagrams(max_strands=3, max_length=5))
def test_reversing_everything_swaps_ab_labels(d):
    k = d.num_components
    a = ab_labeling(d, (1,) * k).labels
    b = ab_labeling(d, (-1,) * k).labels
    assert all(x != y for x, y in zip(a, b))


@given(diagrams(max_strands=3, max_length=5), st.randoms(use_true_random=False))
def test_linking_invariant_under_crossing_reordering(d, rnd):
    order = list(range(d.n))
    rnd.shuffle(order)
    e = parse_pd(" ".join("X[%d,%d,%d,%d]" % d.crossings[i] for i in order))
    k = d.num_components
    total = lambda dd: sum(abs(linking_number(dd, i, j)) for i in range(k) for j in range(i + 1, k))
    assert total(d) == total(e)


@given(diagrams(max_strands=4, max_length=6))
def test_counts_and_round_trip(d):
    assert d.n_plus + d.n_minus == d.n
    assert parse_pd(d.pd_text()) == d
    assert d.mirror().mirror() == d
    assert d.mirror().signs == tuple(-s for s in d.signs)
    assert sorted(e for c in d.components for e in c) == sorted(d.edges)


def test_circles_of_free_loops():
    assert circles_of((), (), (7, 9)) == ((7,), (9,))
