"""Frobenius algebras A_{h,t} and the Khovanov-type complexes they define.

Generators of a Khovanov complex are pairs ``(u, labels)``: a state and one
basis label per circle of the resolution, circles ordered by smallest edge
label.  Within a homological degree generators are sorted by state, then
by label vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .cube import SignAssignment, edge_key, standard_sign
from .diagram import LinkDiagram, circles_of
from .errors import DimensionMismatch, NotAComplex, NotDiagonalizable


# Frobenius algebras --------------------------------------------------------

@dataclass(frozen=True)
class FrobeniusSpec:
    h: int
    t: int
    basis: str  # "1X" or "XY"
    labels: tuple
    mult: Mapping  # (a, b) -> {c: coeff}
    comult: Mapping  # a -> {(b, c): coeff}
    roots: tuple = ()  # (u, v) with X^2 - hX - t = (X - u)(X - v), XY basis only

    @property
    def c(self) -> int:
        return self.roots[1] - self.roots[0] if self.roots else 0


def integer_roots(h: int, t: int) -> tuple:
    disc = h * h + 4 * t
    r = math.isqrt(disc) if disc >= 0 else -1
    if r < 0 or r * r != disc or r == 0:
        raise NotDiagonalizable(f"X^2 - {h}X - {t} has no two distinct integer roots")
    return (h - r) // 2, (h + r) // 2


def frobenius_spec(h: int, t: int, basis: str = "1X") -> FrobeniusSpec:
    if basis == "1X":
        mult = {("1", "1"): {"1": 1}, ("1", "X"): {"X": 1}, ("X", "1"): {"X": 1},
                ("X", "X"): _clean({"X": h, "1": t})}
        comult = {"1": _clean({("X", "1"): 1, ("1", "X"): 1, ("1", "1"): -h}),
                  "X": _clean({("X", "X"): 1, ("1", "1"): t})}
        return FrobeniusSpec(h, t, "1X", ("1", "X"), mult, comult)
    if basis == "XY":
        u, v = integer_roots(h, t)
        c = v - u
        # X stands for X - u and Y for X - v; both are idempotents up to scale
        mult = {("X", "X"): {"X": c}, ("Y", "Y"): {"Y": -c}, ("X", "Y"): {}, ("Y", "X"): {}}
        comult = {"X": {("X", "X"): 1}, "Y": {("Y", "Y"): 1}}
        return FrobeniusSpec(h, t, "XY", ("X", "Y"), mult, comult, (u, v))
    raise ValueError(f"unknown basis {basis!r}")


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _tensor_mult(spec, left: dict, right: dict) -> dict:
    out: dict = {}
    for a, x in left.items():
        for b, y in right.items():
            for c, z in spec.mult[(a, b)].items():
                out[c] = out.get(c, 0) + x * y * z
    return _clean(out)


def frobenius_relation_holds(spec: FrobeniusSpec) -> bool:
    """Check Delta(m(a,b)) against (id x m)(Delta(a) x b) and (m x id)(a x Delta(b))."""
    L = spec.labels
    for a, b in product(L, L):
        lhs: dict = {}
        for c, z in spec.mult[(a, b)].items():
            for pair, w in spec.comult[c].items():
                lhs[pair] = lhs.get(pair, 0) + z * w
        mid: dict = {}
        for (p, q), w in spec.comult[a].items():
            for r, z in spec.mult[(q, b)].items():
                mid[(p, r)] = mid.get((p, r), 0) + w * z
        rgt: dict = {}
        for (p, q), w in spec.comult[b].items():
            for r, z in spec.mult[(a, p)].items():
                rgt[(r, q)] = rgt.get((r, q), 0) + w * z
        if not (_clean(lhs) == _clean(mid) == _clean(rgt)):
            return False
    for a, b, c in product(L, L, L):
        if _tensor_mult(spec, _tensor_mult(spec, {a: 1}, {b: 1}), {c: 1}) != \
                _tensor_mult(spec, {a: 1}, _tensor_mult(spec, {b: 1}, {c: 1})):
            return False
    return True


# chain complexes -----------------------------------------------------------

@dataclass
class GradedChainComplex:
    """Free Z-complex with sparse differentials.

    ``gens[k]`` lists the generator keys in degree k.  ``d[k]`` maps
    ``(row, col)`` to a nonzero integer, where ``col`` indexes ``gens[k]``
    and ``row`` indexes ``gens[k + step]``.
    """

    gens: dict
    d: dict
    step: int = 1
    qgr: dict = field(default_factory=dict)

    def degrees(self) -> list:
        return sorted(self.gens)

    def rank(self, k: int) -> int:
        return len(self.gens.get(k, ()))

    def index(self, k: int) -> dict:
        return {g: i for i, g in enumerate(self.gens.get(k, ()))}

    def apply(self, k: int, vec: Mapping[int, int]) -> dict:
        """Differential of a chain given as {index in gens[k]: coeff}."""
        out: dict = {}
        for (i, j), v in self.d.get(k, {}).items():
            if j in vec:
                out[i] = out.get(i, 0) + v * vec[j]
        return _clean(out)

    def columns(self, k: int) -> dict:
        cols: dict = {}
        for (i, j), v in self.d.get(k, {}).items():
            cols.setdefault(j, {})[i] = v
        return cols

    def check(self) -> None:
        """Raise NotAComplex when d o d is nonzero somewhere."""
        for k in self.gens:
            nxt = self.columns(k + self.step)
            for j, col in self.columns(k).items():
                acc: dict = {}
                for i, v in col.items():
                    for r, w in nxt.get(i, {}).items():
                        acc[r] = acc.get(r, 0) + v * w
                if any(acc.values()):
                    raise NotAComplex(f"d o d nonzero on generator {self.gens[k][j]!r}")

    def is_complex(self) -> bool:
        try:
            self.check()
        except NotAComplex:
            return False
        return True

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "step": self.step,
            "degrees": [
                {
                    "degree": k,
                    "generators": [_gen_json(g, self.qgr.get(g)) for g in self.gens[k]],
                    "differential": [[i, j, v] for (i, j), v in sorted(self.d.get(k, {}).items())],
                }
                for k in self.degrees()
            ],
        }

    def to_text(self) -> str:
        """Plain listing: ranks per degree, then one ``row col value`` line per entry."""
        lines = []
        for k in self.degrees():
            lines.append(f"degree {k} rank {self.rank(k)}")
            tgt = k + self.step
            for (i, j), v in sorted(self.d.get(k, {}).items()):
                lines.append(f"d {k} {tgt} {i} {j} {v}")
        return "\n".join(lines) + "\n"


def _gen_json(g, q) -> dict:
    if isinstance(g, tuple) and len(g) == 2 and isinstance(g[0], tuple):
        rec = {"state": "".join(map(str, g[0])), "labels": "".join(g[1])}
    else:
        rec = {"key": str(g)}
    if q is not None:
        rec["qgr"] = q
    return rec


# Khovanov complexes ------------------------------------------------------------

class _Cube:
    """Circles of every resolution and the merge/split data of every edge."""

    def __init__(self, d: LinkDiagram):
        self.d = d
        self.circles: dict = {}
        self.moves: dict = {}

    def circ(self, u: tuple) -> tuple:
        c = self.circles.get(u)
        if c is None:
            c = self.circles[u] = circles_of(self.d.crossings, u, self.d.loops)
        return c

    def move(self, u: tuple, i: int):
        """(gone, born, carry) for the edge u -> u + e_i.

        ``gone``/``born`` are circle positions before/after; ``carry`` maps
        the remaining old positions to new ones.
        """
        key = (u, i)
        m = self.moves.get(key)
        if m is None:
            v = u[:i] + (1,) + u[i + 1:]
            old, new = self.circ(u), self.circ(v)
            pos_new = {c: k for k, c in enumerate(new)}
            gone = tuple(k for k, c in enumerate(old) if c not in pos_new)
            olds = set(old)
            born = tuple(k for k, c in enumerate(new) if c not in olds)
            carry = {k: pos_new[c] for k, c in enumerate(old) if c in pos_new}
            m = self.moves[key] = (gone, born, carry)
        return m


def states_by_degree(n: int) -> dict:
    out: dict = {}
    for u in product((0, 1), repeat=n):
        out.setdefault(sum(u), []).append(u)
    return out


def edge_image(spec: FrobeniusSpec, labels: tuple, gone, born, carry, size: int) -> dict:
    """Image of one labelled resolution under the merge/split of an edge."""
    if len(gone) == 2:
        table = spec.mult[(labels[gone[0]], labels[gone[1]])]
        outs = {(c,): z for c, z in table.items()}
    else:
        outs = spec.comult[labels[gone[0]]]
    result = {}
    for new, z in outs.items():
        lab = [None] * size
        for k, p in carry.items():
            lab[p] = labels[k]
        for p, x in zip(born, new):
            lab[p] = x
        result[tuple(lab)] = z
    return result


def khovanov_complex(d: LinkDiagram, spec: FrobeniusSpec | None = None,
                     s: SignAssignment | None = None, *, cube: _Cube | None = None,
                     sign_adjust=None) -> GradedChainComplex:
    """Cochain complex of the cube of resolutions for the given algebra.

    ``sign_adjust(u, i)`` may add an extra F2 sign on each edge; the XY
    complex uses it to absorb the sign of merging two Y circles.
    """
    if spec is None:
        spec = frobenius_spec(0, 0)
    if s is None:
        s = standard_sign(d.n)
    if s.n != d.n:
        raise DimensionMismatch(f"sign assignment on {s.n}-cube, diagram has {d.n} crossings")
    cube = cube or _Cube(d)
    nm, npl = d.n_minus, d.n_plus
    gens: dict = {}
    qgr: dict = {}
    for w, states in sorted(states_by_degree(d.n).items()):
        k = w - nm
        lst = gens.setdefault(k, [])
        for u in states:
            r = len(cube.circ(u))
            for labels in product(spec.labels, repeat=r):
                g = (u, labels)
                lst.append(g)
                if spec.basis == "1X":
                    qgr[g] = quantum_grading(g, npl, nm)
    idx = {k: {g: i for i, g in enumerate(lst)} for k, lst in gens.items()}
    dmat: dict = {}
    for k, lst in gens.items():
        entries = dmat.setdefault(k, {})
        tgt = idx.get(k + 1, {})
        for j, (u, labels) in enumerate(lst):
            for i in range(d.n):
                if u[i]:
                    continue
                gone, born, carry = cube.move(u, i)
                v = u[:i] + (1,) + u[i + 1:]
                sign = s.values[edge_key(u, i)]
                if sign_adjust is not None:
                    sign += sign_adjust(u, i, labels, gone)
                sgn = -1 if sign % 2 else 1
                size = len(cube.circ(v))
                for lab, z in edge_image(spec, labels, gone, born, carry, size).items():
                    key = (tgt[(v, lab)], j)
                    val = entries.get(key, 0) + sgn * z
                    if val:
                        entries[key] = val
                    else:
                        entries.pop(key, None)
    return GradedChainComplex(gens, dmat, step=1, qgr=qgr)


def quantum_grading(g, n_plus: int, n_minus: int) -> int:
    """|u| + 2|v| - r(u) + n+ - 2n-, with v_i = 1 exactly when label i is ``1``.

    Equivalently the homological grading plus the label degree plus
    n+ - n-, which is the normalisation invariant under Reidemeister moves.
    """
    u, labels = g
    ones = sum(1 for x in labels if x == "1")
    return sum(u) + 2 * ones - len(labels) + n_plus - 2 * n_minus


def homological_grading(g, n_minus: int) -> int:
    return sum(g[0]) - n_minus


def yy_merge_adjustment(u, i, labels, gone) -> int:
    """1 on edges that merge two circles labelled Y, else 0."""
    return int(len(gone) == 2 and labels[gone[0]] == "Y" and labels[gone[1]] == "Y")


def xy_complex(d: LinkDiagram, s: SignAssignment | None = None, h: int = 1, t: int = 0,
               *, check_blocks: bool = True) -> GradedChainComplex:
    """Diagonal-basis complex with the Y-merge sign moved into the sign assignment.

    Every nonzero entry is ``c`` times a sign, ``c`` being the difference of
    the roots; for the Bar-Natan algebra all entries are +-1.
    """
    spec = frobenius_spec(h, t, "XY")
    if s is None:
        s = standard_sign(d.n)
    c = khovanov_complex(d, _absolute(spec), s, sign_adjust=yy_merge_adjustment)
    if check_blocks:
        check_sign_adjustment(d)
    return c


def _absolute(spec: FrobeniusSpec) -> FrobeniusSpec:
    mult = {k: {c: abs(z) for c, z in v.items()} for k, v in spec.mult.items()}
    return FrobeniusSpec(spec.h, spec.t, spec.basis, spec.labels, mult, spec.comult, spec.roots)


def check_sign_adjustment(d: LinkDiagram) -> None:
    """Verify that the Y-merge indicator is a cocycle on every XY cube block."""
    from .resconf import associated_config, cube_decomposition

    for block in cube_decomposition(associated_config(d)):
        k = block.k
        if k < 2:
            continue
        for a in range(k):
            for b in range(a + 1, k):
                for v in product((0, 1), repeat=k):
                    if v[a] or v[b]:
                        continue
                    total = 0
                    for w, step in ((v, a), (v, b), (_flip(v, a), b), (_flip(v, b), a)):
                        obj = block.vertices[w]
                        arc = block.directions[step]
                        total += _block_edge_adjust(obj, arc)
                    if total % 2:
                        raise NotAComplex("sign adjustment is not a cocycle on a cube block")


def _flip(v, i):
    return v[:i] + (1 - v[i],) + v[i + 1:]


def _block_edge_adjust(obj, arc) -> int:
    from .resconf import single_surgery_change

    _, gone, _ = single_surgery_change(obj.config, arc)
    return int(len(gone) == 2 and all(obj.labels[g] == "Y" for g in gone))


def basis_change(xy: GradedChainComplex, roots: tuple = (0, 1)) -> dict:
    """Matrices of the map sending X to X - u and Y to X - v, factor by factor.

    Returns ``{degree: {(row, col): coeff}}`` with rows indexing the 1X
    generators of the same degree, in canonical order.
    """
    u0, v0 = roots
    single = {"X": {"X": 1, "1": -u0}, "Y": {"X": 1, "1": -v0}}
    out: dict = {}
    for k, lst in xy.gens.items():
        targets = {}
        for g in lst:
            u, labels = g
            for lab in product("1X", repeat=len(labels)):
                targets.setdefault((u, lab), None)
        order = sorted(targets)
        pos = {g: i for i, g in enumerate(order)}
        mat = {}
        for j, (u, labels) in enumerate(lst):
            for lab in product("1X", repeat=len(labels)):
                z = 1
                for a, b in zip(labels, lab):
                    z *= single[a].get(b, 0)
                    if not z:
                        break
                if z:
                    mat[(pos[(u, lab)], j)] = z
        out[k] = mat
    return out


def conjugate_matches(xy: GradedChainComplex, bn: GradedChainComplex, roots=(0, 1)) -> bool:
    """Check bn.d o P == P o xy.d for the basis change P, degree by degree."""
    P = basis_change(xy, roots)
    for k in xy.gens:
        if k + 1 not in xy.gens:
            continue
        lhs = _matmul(bn.d.get(k, {}), P[k])
        rhs = _matmul(P[k + 1], xy.d.get(k, {}))
        if lhs != rhs:
            return False
    return True


def _matmul(A: dict, B: dict) -> dict:
    rows_of_B: dict = {}
    for (i, j), v in B.items():
        rows_of_B.setdefault(i, []).append((j, v))
    out: dict = {}
    for (i, k), a in A.items():
        for j, b in rows_of_B.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + a * b
    return {k: v for k, v in out.items() if v}
