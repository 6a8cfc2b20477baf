import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bnflow.cube import (
    FrameAssignment,
    SignAssignment,
    all_faces,
    coboundary,
    cube_complex,
    faces,
    frame_condition_rhs,
    frame_from_sign,
    standard_frame,
    standard_sign,
    verify_frame_pair,
    verify_sign,
    vertex_coboundary,
)
from bnflow.errors import DimensionMismatch, NotASignAssignment
from bnflow.homology import homology


def test_standard_sign_values():
    assert standard_sign(2).values["*0"] == 0
    assert standard_sign(2).values["1*"] == 1
    assert standard_sign(3).values["11*"] == 0
    assert len(standard_sign(5).values) == 5 * 2 ** 4


def test_verify_sign_examples():
    assert verify_sign(standard_sign(2))
    assert not verify_sign(SignAssignment(2, {e: 0 for e in faces(2, 1)}))
    assert all(verify_sign(standard_sign(n)) for n in range(9))


def test_standard_frame_values():
    assert standard_frame(2).values["**"] == 0
    assert standard_frame(3).values["1**"] == 0
    assert standard_frame(4).values["1*1*"] == 1


def test_frame_pair_examples():
    for n in range(7):
        assert verify_frame_pair(standard_sign(n), standard_frame(n))
    # the standard frame on the 3-cube is identically zero, so changing a
    # single face breaks the condition on the only 3-face
    zero = FrameAssignment(3, {F: 0 for F in faces(3, 2)})
    assert zero == standard_frame(3) and verify_frame_pair(standard_sign(3), zero)
    for F in faces(3, 2):
        bent = FrameAssignment(3, {G: int(G == F) for G in faces(3, 2)})
        assert not verify_frame_pair(standard_sign(3), bent)
    # no 3-faces: anything goes
    assert verify_frame_pair(standard_sign(2), FrameAssignment(2, {"**": 1}))
    with pytest.raises(DimensionMismatch):
        verify_frame_pair(standard_sign(3), standard_frame(4))


def test_frame_from_standard_sign_is_standard_frame():
    for n in range(7):
        assert frame_from_sign(standard_sign(n)) == standard_frame(n)


def test_frame_from_sign_rejects_non_sign():
    with pytest.raises(NotASignAssignment):
        frame_from_sign(SignAssignment(2, {e: 0 for e in faces(2, 1)}))


def test_vertex_perturbation_gets_a_frame():
    b = {v: int(v == (1, 0, 1)) for v in product((0, 1), repeat=3)}
    s = standard_sign(3).plus(vertex_coboundary(3, b))
    assert verify_frame_pair(s, frame_from_sign(s))


def _random_sign(n, rng):
    b = {v: rng.randint(0, 1) for v in product((0, 1), repeat=n)}
    return standard_sign(n).plus(vertex_coboundary(n, b))


def test_hundred_random_signs_at_four():
    rng = random.Random(4)
    for _ in range(100):
        s = _random_sign(4, rng)
        assert verify_sign(s) and verify_frame_pair(s, frame_from_sign(s))


def test_cube_complex_small_cases():
    c1 = cube_complex(1)
    assert list(c1.d[1].values()) in ([1], [-1])
    for n in range(1, 7):
        assert homology(cube_complex(n)).total_rank() == 0
    with pytest.raises(NotASignAssignment):
        cube_complex(2, SignAssignment(2, {e: 0 for e in faces(2, 1)}))


def test_face_counts():
    # number of k-faces of the n-cube is C(n, k) 2^(n - k)
    assert len(all_faces(5, 2)) == 10 * 8
    assert len(all_faces(6, 3)) == 20 * 8


# properties ----------------------------------------------------------------------------

cochain_dims = st.integers(2, 5)


@given(cochain_dims, st.integers(1, 2), st.data())
def test_coboundary_squares_to_zero(n, k, data):
    vals = {F: data.draw(st.integers(0, 1)) for F in faces(n, k)}
    dd = coboundary(n, k + 1, coboundary(n, k, vals))
    assert all(v == 0 for v in dd.values())


@given(st.integers(3, 6), st.randoms(use_true_random=False))
def test_random_sign_assignments(n, rnd):
    s = _random_sign(n, rnd)
    assert verify_sign(s)
    f = frame_from_sign(s)
    assert verify_frame_pair(s, f)
    assert homology(cube_complex(n, s)).total_rank() == 0


@given(st.integers(4, 6), st.randoms(use_true_random=False))
def test_frame_condition_right_side_is_cocycle(n, rnd):
    s = _random_sign(n, rnd)
    rhs = frame_condition_rhs(s)
    assert all(v == 0 for v in coboundary(n, 3, rhs).values())
