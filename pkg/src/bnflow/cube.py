"""Cochains on the n-cube: sign assignments, frame assignments, cube complex.

Faces of the cube are written as strings over ``0``, ``1``, ``*``; a face
with k stars is a k-face.  ``"1*0"`` is the edge from ``110`` down to
``100``.  Cochain values live in F2 and are stored as 0/1 ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Mapping, Sequence

from .errors import DimensionMismatch, NotASignAssignment


def faces(n: int, k: int) -> Iterator[str]:
    """All k-faces of the n-cube in lexicographic order of their strings."""
    for stars in combinations(range(n), k):
        for rest in product("01", repeat=n - k):
            out, it = [], iter(rest)
            for i in range(n):
                out.append("*" if i in stars else next(it))
            yield "".join(out)


def all_faces(n: int, k: int) -> list:
    return sorted(faces(n, k))


def stars_of(face: str) -> tuple:
    return tuple(i for i, ch in enumerate(face) if ch == "*")


def set_star(face: str, i: int, bit: int) -> str:
    return face[:i] + str(bit) + face[i + 1:]


def facets(face: str) -> list:
    """Codimension-one faces of ``face``."""
    return [set_star(face, i, b) for i in stars_of(face) for b in (0, 1)]


def bottom(face: str) -> tuple:
    return tuple(0 if ch == "*" else int(ch) for ch in face)


def top(face: str) -> tuple:
    return tuple(1 if ch == "*" else int(ch) for ch in face)


def edge_key(u: Sequence[int], i: int) -> str:
    """Edge in direction ``i`` through vertex ``u`` (the value of u_i is ignored)."""
    return "".join("*" if k == i else str(b) for k, b in enumerate(u))


def coboundary(n: int, k: int, values: Mapping[str, int]) -> dict:
    """delta of an F2 cochain on k-faces, as a cochain on (k+1)-faces."""
    return {F: sum(values.get(G, 0) for G in facets(F)) % 2 for F in faces(n, k + 1)}


@dataclass(frozen=True)
class SignAssignment:
    n: int
    values: Mapping[str, int]

    def __call__(self, u: Sequence[int], i: int) -> int:
        return self.values[edge_key(u, i)]

    def to_json(self) -> dict:
        return dict(sorted(self.values.items()))

    def plus(self, other: Mapping[str, int]) -> "SignAssignment":
        return SignAssignment(self.n, {e: (v + other.get(e, 0)) % 2 for e, v in self.values.items()})


@dataclass(frozen=True)
class FrameAssignment:
    n: int
    values: Mapping[str, int]

    def to_json(self) -> dict:
        return dict(sorted(self.values.items()))


def standard_sign(n: int) -> SignAssignment:
    vals = {}
    for e in faces(n, 1):
        i = e.index("*")
        vals[e] = sum(int(ch) for ch in e[:i]) % 2
    return SignAssignment(n, vals)


def verify_sign(s: SignAssignment) -> bool:
    return all(v == 1 for v in coboundary(s.n, 1, s.values).values())


def standard_frame(n: int) -> FrameAssignment:
    vals = {}
    for F in faces(n, 2):
        i, j = stars_of(F)
        before = sum(int(ch) for ch in F[:i])
        between = sum(int(ch) for ch in F[i + 1:j])
        vals[F] = (before * between) % 2
    return FrameAssignment(n, vals)


def frame_condition_rhs(s: SignAssignment) -> dict:
    """3-cochain: sum of s over the three edges ending at each 3-face's bottom."""
    out = {}
    for F in faces(s.n, 3):
        out[F] = sum(s.values[set_star(set_star(F, a, 0), b, 0)]
                     for a, b in combinations(stars_of(F), 2)) % 2
    return out


def verify_frame_pair(s: SignAssignment, f: FrameAssignment) -> bool:
    if s.n != f.n:
        raise DimensionMismatch(f"sign assignment on {s.n}-cube, frame on {f.n}-cube")
    lhs = coboundary(f.n, 2, f.values)
    rhs = frame_condition_rhs(s)
    return all(lhs[F] == rhs[F] for F in rhs)


def staircase_potential(n: int, t: Mapping[str, int]) -> dict:
    """Integrate a 1-cocycle from the origin along increasing-index paths."""
    b = {}
    for v in product((0, 1), repeat=n):
        total, cur = 0, [0] * n
        for i in range(n):
            if v[i]:
                total += t[edge_key(cur, i)]
                cur[i] = 1
        b[v] = total % 2
    return b


def frame_from_sign(s: SignAssignment) -> FrameAssignment:
    if not verify_sign(s):
        raise NotASignAssignment("delta s is not identically 1")
    s0 = standard_sign(s.n)
    t = {e: (s.values[e] + s0.values[e]) % 2 for e in s.values}
    b = staircase_potential(s.n, t)
    f0 = standard_frame(s.n)
    f = FrameAssignment(s.n, {F: (v + b[bottom(F)]) % 2 for F, v in f0.values.items()})
    if not verify_frame_pair(s, f):
        raise NotASignAssignment("could not build a compatible frame assignment")
    return f


def vertex_coboundary(n: int, b: Mapping[tuple, int]) -> dict:
    """delta of a 0-cochain given on vertices."""
    return {e: (b[bottom(e)] + b[top(e)]) % 2 for e in faces(n, 1)}


def cube_complex(n: int, s: SignAssignment | None = None):
    from .complex import GradedChainComplex

    if s is None:
        s = standard_sign(n)
    if s.n != n:
        raise DimensionMismatch(f"sign assignment on {s.n}-cube, expected {n}")
    if not verify_sign(s):
        raise NotASignAssignment("delta s is not identically 1")
    verts = sorted(product((0, 1), repeat=n))
    gens: dict = {}
    for v in verts:
        gens.setdefault(sum(v), []).append(v)
    index = {v: gens[sum(v)].index(v) for v in verts}
    d: dict = {}
    for u in verts:
        for i in range(n):
            if u[i] == 1:
                w = u[:i] + (0,) + u[i + 1:]
                d.setdefault(sum(u), {})[(index[w], index[u])] = (-1) ** s(u, i)
    return GradedChainComplex(gens, d, step=-1)
