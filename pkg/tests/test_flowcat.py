import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bnflow import corpus
from bnflow.cube import FrameAssignment, standard_frame, standard_sign
from bnflow.errors import (
    GradingMismatch,
    IncompatiblePair,
    MalformedScript,
    NotCancellable,
    NotOppositePair,
)
from bnflow.flowcat import (
    bn_flow_category,
    chains_oracle_0dim,
    chains_oracle_1dim,
    cube_contract,
    cube_skeleton,
    eliminate_quantum_increasing,
    engine_census0,
    engine_census1,
    handle_cancel,
    handle_slide,
    increasing_components,
    matches_bar_natan,
    replay,
    run_script,
    whitney_trick,
    xy_flow_category,
)
from bnflow.homology import bar_natan_complex, homology
from bnflow.resconf import hopf_config, ladybug_config
from bnflow.verify import random_sign

from conftest import diagrams


def counts(cat):
    return {k: cat.count(*k) for k in cat.nonempty_pairs0() if cat.count(*k)}


def test_square_skeleton():
    cat = cube_skeleton(2)
    assert cat.census() == {"objects": 4, "points": 4, "intervals": 1, "circles": 0}
    assert cat.is_valid()


def test_skeleton_rejects_bad_pair():
    f = standard_frame(3)
    flipped = FrameAssignment(3, {**f.values, "**0": 1 - f.values["**0"]})
    with pytest.raises(IncompatiblePair):
        cube_skeleton(3, standard_sign(3), flipped)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_skeleton_contracts(n):
    out, side = cube_contract(cube_skeleton(n), n)
    assert not out.grading and side == 0


@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_slide_matches_row_operation(n, rng):
    cat = cube_skeleton(n)
    objs = [o for o in cat.objects if cat.grading[o] == 1]
    x, y = rng.sample(objs, 2)
    eps = rng.choice((1, -1))
    new = handle_slide(cat, x, y, eps)
    new.check()
    for a in cat.objects:
        if cat.grading[a] == 2:
            assert new.count(a, y) == cat.count(a, y) - eps * cat.count(a, x)
    for b in cat.objects:
        if cat.grading[b] == 0:
            assert new.count(x, b) == cat.count(x, b) + eps * cat.count(y, b)
    assert homology(new.associated_complex()).total_rank() == 0


def _single_point_pairs(cat):
    return [k for k in cat.nonempty_pairs0() if len(cat.moduli0(*k)) == 1]


@pytest.mark.parametrize("name", ["trefoil_right", "hopf_positive"])
def test_cancel_is_gaussian_elimination(name):
    cat = bn_flow_category(corpus.load(name))
    rng = random.Random(1)
    for x, y in rng.sample(_single_point_pairs(cat), 5):
        sigma = cat.count(x, y)
        new = handle_cancel(cat, x, y)
        new.check()
        for a in new.objects:
            for b in new.objects:
                if new.grading[a] == new.grading[b] + 1:
                    want = cat.count(a, b) - sigma * cat.count(a, y) * cat.count(x, b)
                    assert new.count(a, b) == want
        before = homology(cat.associated_complex(), "Q")
        after = homology(new.associated_complex(), "Q")
        assert before.groups == after.groups


def test_whitney_keeps_counts():
    cat = bn_flow_category(corpus.load("trefoil_right"))
    for x, y in cat.nonempty_pairs0():
        signs = {cat.points[p].sign: p for p in cat.moduli0(x, y)}
        if len(signs) == 2:
            new = whitney_trick(cat, x, y, signs[1], signs[-1])
            new.check()
            assert counts(new) == counts(cat)
            assert len(new.moduli0(x, y)) == len(cat.moduli0(x, y)) - 2
            return
    pytest.fail("no opposite pair found")


def test_move_errors():
    cat = cube_skeleton(2)
    top, bottom = (1, 1), (0, 0)
    with pytest.raises(NotCancellable):
        handle_cancel(cat, top, bottom)
    with pytest.raises(GradingMismatch):
        handle_slide(cat, top, bottom)
    p = cat.moduli0((1, 0), (0, 0))[0]
    q = cat.moduli0((1, 1), (0, 1))[0]
    with pytest.raises(NotOppositePair):
        whitney_trick(cat, (1, 0), (0, 0), p, q)
    with pytest.raises(NotOppositePair):
        whitney_trick(cat, (1, 0), (0, 0), p, p)


@pytest.mark.parametrize("text", ["cancel 11", "cancel 11 zz", "slide 10 01 x", "fold 10 01"])
def test_script_errors(text):
    with pytest.raises(MalformedScript):
        run_script(cube_skeleton(2), text)


def test_script_and_replay_agree():
    cat = cube_skeleton(3)
    out = run_script(cat, "slide 100 010 +1  # comment\n\ncancel 110 100'\n")
    direct = handle_cancel(handle_slide(cat, (1, 0, 0), (0, 1, 0), 1), (1, 1, 0), (1, 0, 0))
    assert out.census() == direct.census()
    assert counts(out) == counts(direct)
    assert replay(cat, out.log).to_json()["points"] == out.to_json()["points"]


def _oracles_agree(d):
    xy, bn = xy_flow_category(d), bn_flow_category(d)
    bn.check()
    assert engine_census0(bn) == chains_oracle_0dim(xy)
    assert engine_census1(bn) == chains_oracle_1dim(xy)
    assert matches_bar_natan(bn, bar_natan_complex(d))


@pytest.mark.parametrize("name", ["unknot", "trefoil_right", "figure_eight", "hopf_negative", "unlink2"])
def test_oracles_corpus(name):
    _oracles_agree(corpus.load(name))


@given(diagrams(max_strands=3, max_length=4))
def test_oracles_random(d):
    _oracles_agree(d)


@given(diagrams(max_strands=3, max_length=4), st.integers(0, 2 ** 16))
def test_random_sign_matches(d, seed):
    s = random_sign(d.n, random.Random(seed))
    bn = bn_flow_category(d, s)
    bn.check()
    assert matches_bar_natan(bn, bar_natan_complex(d, s))


def test_ladybug():
    bn = bn_flow_category(ladybug_config())
    x, y = bn.by_name("11:X"), bn.by_name("00:1")
    assert len(bn.moduli1(x, y)) == 6
    el = eliminate_quantum_increasing(bn)
    x, y = el.by_name("11:X"), el.by_name("00:1")
    assert Counter(el.comps[c].kind for c in el.moduli1(x, y)) == Counter({"interval": 2})


def test_hopf_example():
    bn = bn_flow_category(hopf_config())
    assert [bn.comps[c].kind for c in increasing_components(bn)] == ["interval"] * 4
    el = eliminate_quantum_increasing(bn)
    assert [el.comps[c].kind for c in increasing_components(el)] == ["circle"]


def _eliminated_ok(d):
    el = eliminate_quantum_increasing(bn_flow_category(d))
    el.check()
    assert not [k for k in el.nonempty_pairs0() if el.qgr[k[0]] < el.qgr[k[1]]]
    assert all(el.comps[c].kind == "circle" for c in increasing_components(el))
    assert homology(el.associated_complex(reversal=True)).groups == homology(bar_natan_complex(d)).groups


@pytest.mark.parametrize("name", ["trefoil_right", "figure_eight", "hopf_positive"])
def test_elimination_corpus(name):
    _eliminated_ok(corpus.load(name))


@given(diagrams(max_strands=3, max_length=4))
def test_elimination_random(d):
    _eliminated_ok(d)
