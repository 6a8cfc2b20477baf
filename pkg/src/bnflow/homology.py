"""Homology over Z and over prime fields / Q, canonical cycles, s-invariant.

Integer homology eliminates unit pivots sparsely and finishes the small
remaining block with a dense Smith normal form.  Field computations run a
column reduction in which the pivot of a column is its nonzero entry of
lowest quantum grading; this gives filtration data directly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .complex import GradedChainComplex, frobenius_spec, khovanov_complex
from .diagram import LinkDiagram, ab_labeling, all_orientations, linking_number, seifert_state
from .errors import NotAComplex, NotACycle, NotAKnot


# Smith normal form ---------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    diagonal: tuple  # nonzero invariant factors d1 | d2 | ...
    U: tuple  # row transform, det +-1
    V: tuple  # column transform, det +-1
    shape: tuple


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    """U * A * V = diag(d1, d2, ...) with unimodular U, V."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
            rest = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, i, j = min(rest)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    diag = tuple(D[i][i] for i in range(min(m, n)) if D[i][i])
    return SmithDecomposition(diag, tuple(map(tuple, U)), tuple(map(tuple, V)), (m, n))


def invariant_factors(entries: Mapping, nrows: int | None = None, ncols: int | None = None) -> list:
    """Nonzero invariant factors of a sparse integer matrix ``{(i, j): v}``."""
    rows: dict = {}
    cols: dict = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        pivot = None
        for i in sorted(rows, key=lambda r: len(rows[r])):
            cands = [j for j, v in rows[i].items() if abs(v) == 1]
            if cands:
                pivot = (i, min(cands, key=lambda c: len(cols[c])))
                break
        if pivot is None:
            break
        pi, pj = pivot
        prow = rows.pop(pi)
        pv = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for r in list(cols[pj]):
            row = rows[r]
            f = row[pj] * pv
            for j, v in prow.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    if j not in row:
                        cols[j].add(r)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    cols[j].discard(r)
            if not row:
                del rows[r]
        del cols[pj]
        units += 1
    rest_rows = sorted(rows)
    rest_cols = sorted({j for r in rows.values() for j in r})
    if rest_rows:
        ci = {j: k for k, j in enumerate(rest_cols)}
        dense = [[0] * len(rest_cols) for _ in rest_rows]
        for a, r in enumerate(rest_rows):
            for j, v in rows[r].items():
                dense[a][ci[j]] = v
        tail = list(smith_normal_form(dense).diagonal)
    else:
        tail = []
    return [1] * units + tail


# fields ---------------------------------------------------------------------

def characteristic(coeffs) -> int:
    """0 for Q, p for F_p.  Accepts 'Q', 'F2', 'F3', 'Fp' or an int."""
    if isinstance(coeffs, int):
        return coeffs
    c = str(coeffs).upper()
    if c == "Q":
        return 0
    if c.startswith("F") and c[1:].isdigit():
        return int(c[1:])
    raise ValueError(f"not a field: {coeffs!r}")


class _Field:
    def __init__(self, p: int):
        self.p = p

    def __call__(self, x):
        return Fraction(x) if self.p == 0 else int(x) % self.p

    def inv(self, x):
        return 1 / Fraction(x) if self.p == 0 else pow(int(x), -1, self.p)


def _axpy(F, target: dict, f, src: dict) -> None:
    """target -= f * src, in place, dropping zeros."""
    for k, v in src.items():
        nv = F(target.get(k, 0) - f * v)
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def field_rank(entries: Mapping, coeffs) -> int:
    F = _Field(characteristic(coeffs))
    cols: dict = {}
    for (i, j), v in entries.items():
        fv = F(v)
        if fv:
            cols.setdefault(j, {})[i] = fv
    pivots: dict = {}
    for j in sorted(cols):
        col = cols[j]
        while col:
            r = max(col)
            if r not in pivots:
                pivots[r] = col
                break
            piv = pivots[r]
            _axpy(F, col, col[r] * F.inv(piv[r]), piv)
    return len(pivots)


class FilteredReducer:
    """Column reduction with pivots at the most significant row.

    ``key(row)`` orders rows; smaller keys are more significant.  After
    adding boundary columns, :meth:`reduce` returns the canonical remainder
    of a vector, whose support decides filtration membership.
    """

    def __init__(self, F: _Field, key):
        self.F = F
        self.key = key
        self.pivots: dict = {}

    def add(self, col: dict) -> None:
        col = {i: self.F(v) for i, v in col.items() if self.F(v)}
        self._reduce(col, store=True)

    def _reduce(self, col: dict, store: bool) -> dict:
        F = self.F
        out: dict = {}
        while col:
            r = min(col, key=self.key)
            piv = self.pivots.get(r)
            if piv is None:
                if store:
                    self.pivots[r] = col
                    return {}
                # pivots never reach rows more significant than their own
                out[r] = col.pop(r)
                continue
            _axpy(F, col, col[r] * F.inv(piv[r]), piv)
        return out

    def reduce(self, vec: Mapping) -> dict:
        col = {i: self.F(v) for i, v in vec.items() if self.F(v)}
        return self._reduce(col, store=False)


# homology -------------------------------------------------------------------

@dataclass
class HomologySummary:
    coeffs: str
    groups: dict  # degree -> (free rank, torsion tuple)
    qgradings: dict = field(default_factory=dict)  # (degree, q) -> rank, when bigraded

    def rank(self, k: int) -> int:
        return self.groups.get(k, (0, ()))[0]

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def is_free(self) -> bool:
        return all(not t for _, t in self.groups.values())

    def nonzero_degrees(self) -> list:
        out = []
        for k in sorted(self.groups):
            out.extend([k] * self.groups[k][0])
        return out

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "coeffs": self.coeffs,
            "groups": [{"degree": k, "rank": r, "torsion": list(t)}
                       for k, (r, t) in sorted(self.groups.items()) if r or t],
            "bigraded": [{"degree": k, "q": q, "rank": r}
                         for (k, q), r in sorted(self.qgradings.items()) if r],
        }

    def to_text(self) -> str:
        lines = [f"homology over {self.coeffs}"]
        for k, (r, t) in sorted(self.groups.items()):
            if r or t:
                tors = "".join(f" + Z/{x}" for x in t)
                lines.append(f"{k:>4}  Z^{r}{tors}" if self.coeffs == "Z" else f"{k:>4}  {self.coeffs}^{r}")
        return "\n".join(lines) + "\n"


def homology(c: GradedChainComplex, coeffs="Z", check: bool = True) -> HomologySummary:
    if check:
        c.check()
    ranks: dict = {}
    tors: dict = {}
    for k in c.gens:
        ent = c.d.get(k, {})
        if coeffs == "Z":
            fac = invariant_factors(ent)
            ranks[k] = len(fac)
            tors[k + c.step] = tuple(f for f in fac if f > 1)
        else:
            ranks[k] = field_rank(ent, coeffs)
    groups = {}
    for k in c.degrees():
        free = c.rank(k) - ranks.get(k, 0) - ranks.get(k - c.step, 0)
        groups[k] = (free, tors.get(k, ()) if coeffs == "Z" else ())
    label = "Z" if coeffs == "Z" else str(coeffs).upper()
    return HomologySummary(label, groups)


def bigraded_homology(c: GradedChainComplex, coeffs="Z") -> HomologySummary:
    """Homology split by quantum grading, for differentials preserving it."""
    pieces: dict = {}
    for k, lst in c.gens.items():
        for g in lst:
            pieces.setdefault(c.qgr[g], None)
    total = homology(c, coeffs)
    out: dict = {}
    for q in sorted(pieces):
        sub = restrict_to_q(c, q)
        h = homology(sub, coeffs, check=False)
        for k, (r, _) in h.groups.items():
            if r:
                out[(k, q)] = r
    total.qgradings = out
    return total


def restrict_to_q(c: GradedChainComplex, q: int) -> GradedChainComplex:
    keep = {k: [i for i, g in enumerate(lst) if c.qgr[g] == q] for k, lst in c.gens.items()}
    pos = {k: {i: n for n, i in enumerate(v)} for k, v in keep.items()}
    gens = {k: [c.gens[k][i] for i in v] for k, v in keep.items()}
    d = {}
    for k, ent in c.d.items():
        src, tgt = pos.get(k, {}), pos.get(k + c.step, {})
        sub = {}
        for (i, j), v in ent.items():
            if j in src:
                if i not in tgt:
                    raise NotAComplex("differential does not preserve the quantum grading")
                sub[(tgt[i], src[j])] = v
        d[k] = sub
    return GradedChainComplex(gens, d, c.step, {g: q for lst in gens.values() for g in lst})


def euler_characteristic(c: GradedChainComplex) -> int:
    return sum((-1) ** k * c.rank(k) for k in c.gens)


def homology_euler(h: HomologySummary) -> int:
    return sum((-1) ** k * r for k, (r, _) in h.groups.items())


# canonical cycles -----------------------------------------------------------

@dataclass(frozen=True)
class CanonicalClass:
    orientation: tuple
    degree: int  # homological grading
    vector: Mapping  # index in gens[degree] -> coefficient
    state: tuple
    labels: tuple  # 'a'/'b' per circle
    qgr: int  # lowest quantum grading in the support


def bar_natan_complex(d: LinkDiagram, s=None) -> GradedChainComplex:
    return khovanov_complex(d, frobenius_spec(1, 0), s)


def canonical_cycles(d: LinkDiagram, c: GradedChainComplex | None = None,
                     roots: tuple = (0, 1)) -> list:
    """One cycle per orientation, a = X - u and b = X - v expanded in the 1X basis."""
    if c is None:
        c = bar_natan_complex(d)
    u0, v0 = roots
    expand = {"a": {"X": 1, "1": -u0}, "b": {"X": 1, "1": -v0}}
    out = []
    for o in all_orientations(d):
        lab = ab_labeling(d, o)
        u = lab.state
        k = sum(u) - d.n_minus
        idx = c.index(k)
        vec: dict = {}
        for choice in product(*(list(expand[x].items()) for x in lab.labels)):
            coeff = 1
            for _, z in choice:
                coeff *= z
            if coeff:
                key = (u, tuple(b for b, _ in choice))
                vec[idx[key]] = vec.get(idx[key], 0) + coeff
        vec = {i: v for i, v in vec.items() if v}
        if c.apply(k, vec):
            raise NotACycle(f"canonical chain for orientation {o} is not a cycle")
        q = min(c.qgr[c.gens[k][i]] for i in vec) if c.qgr else None
        out.append(CanonicalClass(o, k, vec, u, lab.labels, q))
    return out


def predicted_canonical_degree(d: LinkDiagram, o: Sequence) -> int:
    """2 * sum of lk(D_i, D_j) over reversed i and kept j."""
    rev = [i for i, x in enumerate(o) if x in (-1, 0, False)]
    keep = [j for j in range(d.num_components) if j not in rev]
    return 2 * sum(linking_number(d, i, j) for i in rev for j in keep)


# filtration -------------------------------------------------------------------

def _boundary_reducer(c: GradedChainComplex, k: int, F: _Field) -> FilteredReducer:
    gens = c.gens.get(k, [])
    red = FilteredReducer(F, key=lambda i: (c.qgr[gens[i]], i))
    src = k - c.step
    for _, col in sorted(c.columns(src).items()):
        red.add(col)
    return red


def quantum_homology_grading(c: GradedChainComplex, k: int, z: Mapping, coeffs="Q"):
    """Largest j with [z] in the image of H(F^j C); None for a boundary."""
    F = _Field(characteristic(coeffs))
    zf = {i: F(v) for i, v in z.items() if F(v)}
    if {i: v for i, v in _field_apply(c, k, zf, F).items() if v}:
        raise NotACycle("the given chain is not a cycle")
    rem = _boundary_reducer(c, k, F).reduce(zf)
    if not rem:
        return None
    gens = c.gens[k]
    return min(c.qgr[gens[i]] for i in rem)


def _field_apply(c, k, vec, F) -> dict:
    out: dict = {}
    for (i, j), v in c.d.get(k, {}).items():
        if j in vec:
            out[i] = F(out.get(i, 0) + v * vec[j])
    return out


def filtration_dimensions(c: GradedChainComplex, k: int, coeffs="Q") -> dict:
    """j -> dim F^j H_k for every j between the extreme gradings (plus one above)."""
    F = _Field(characteristic(coeffs))
    gens = c.gens.get(k, [])
    qs = sorted({c.qgr[g] for g in gens})
    if not qs:
        return {}
    # ranks of d_k restricted to generators of grading >= j
    cols = c.columns(k)
    order = sorted(range(len(gens)), key=lambda i: -c.qgr[gens[i]])
    piv: dict = {}
    cyc_dim = {}
    count = rank = 0
    pos = 0
    for j in reversed(qs):
        while pos < len(order) and c.qgr[gens[order[pos]]] >= j:
            col = {r: F(v) for r, v in cols.get(order[pos], {}).items() if F(v)}
            while col:
                r = max(col)
                if r not in piv:
                    piv[r] = col
                    rank += 1
                    break
                _axpy(F, col, col[r] * F.inv(piv[r][r]), piv[r])
            count += 1
            pos += 1
        cyc_dim[j] = count - rank
    red = _boundary_reducer(c, k, F)
    brank = len(red.pivots)
    pivot_q = sorted(c.qgr[gens[r]] for r in red.pivots)
    out = {}
    for j in qs + [qs[-1] + 2]:
        z = cyc_dim.get(j, 0)
        below = sum(1 for q in pivot_q if q < j)
        out[j] = z - (brank - below)
    return out


@dataclass(frozen=True)
class SReport:
    coeffs: str
    s: int
    s_min: int
    s_max: int
    alpha_grading: int
    beta_grading: int


def s_report(d: LinkDiagram, coeffs="Q", c: GradedChainComplex | None = None) -> SReport:
    if d.num_components != 1:
        raise NotAKnot(f"diagram has {d.num_components} components")
    if c is None:
        c = bar_natan_complex(d)
    alpha, beta = canonical_cycles(d, c)
    ga = quantum_homology_grading(c, alpha.degree, alpha.vector, coeffs)
    gb = quantum_homology_grading(c, beta.degree, beta.vector, coeffs)
    dims = filtration_dimensions(c, 0, coeffs)
    total = max(dims.values())
    s_min = max(j for j, v in dims.items() if v == total)
    s_max = max(j for j, v in dims.items() if v > 0)
    label = str(coeffs).upper()
    return SReport(label, ga + 1, s_min, s_max, ga, gb)


def s_invariant(d: LinkDiagram, coeffs="Q") -> int:
    rep = s_report(d, coeffs)
    if 2 * rep.s != rep.s_min + rep.s_max:
        raise NotAComplex("canonical class grading disagrees with the filtration scan")
    return rep.s


# mirror duality -----------------------------------------------------------------

@dataclass
class MirrorDuality:
    mirror_complex: GradedChainComplex
    complex: GradedChainComplex
    eps: dict  # state of the mirror -> +-1
    image: dict  # (degree, index) in mirror -> (degree, index, coeff) in the dual

    def pairing(self, k: int, x: Mapping, y: Mapping) -> int:
        """<Phi(x), y> for a mirror chain x in degree k and a chain y of D."""
        total = 0
        for j, a in x.items():
            deg, i, z = self.image[(k, j)]
            eps = self.eps[self.mirror_complex.gens[k][j][0]]
            total += a * z * eps * y.get(i, 0)
        return total


_PHI = {"1": ("X", -1), "X": ("1", 1)}


def mirror_dual(d: LinkDiagram, c: GradedChainComplex | None = None) -> MirrorDuality:
    """Identify C(m(D)) with the dual of C(D); signs solved over the state cube."""
    if c is None:
        c = bar_natan_complex(d)
    m = d.mirror()
    cm = bar_natan_complex(m)
    idx = {k: c.index(k) for k in c.gens}
    n = d.n

    def target(g):
        u, labels = g
        w = tuple(1 - b for b in u)
        sign = 1
        lab = []
        for x in labels:
            y, z = _PHI[x]
            lab.append(y)
            sign *= z
        k = sum(w) - d.n_minus
        return k, idx[k][(w, tuple(lab))], sign

    image = {}
    for k, lst in cm.gens.items():
        for j, g in enumerate(lst):
            image[(k, j)] = target(g)

    # transpose of d restricted to a column of the dual
    dual_cols = {}
    for k, ent in c.d.items():
        for (i, j), v in ent.items():
            dual_cols.setdefault((k + 1, i), {})[(k, j)] = v

    def check_edge(k, j, eps):
        """Compare Phi(d x) with d^T Phi(x) for generator j of degree k of the mirror."""
        u = cm.gens[k][j][0]
        dk, di, z = image[(k, j)]
        lhs: dict = {}
        for (i, jj), v in cm.d.get(k, {}).items():
            if jj == j:
                tk, ti, tz = image[(k + 1, i)]
                w = cm.gens[k + 1][i][0]
                if w not in eps:
                    return None
                lhs[(tk, ti)] = lhs.get((tk, ti), 0) + v * tz * eps[w]
        rhs = {key: eps[u] * z * v for key, v in dual_cols.get((dk, di), {}).items()}
        return {k2: v for k2, v in lhs.items() if v}, rhs

    eps = {(0,) * n: 1}
    by_state: dict = {}
    for k, lst in cm.gens.items():
        for j, g in enumerate(lst):
            by_state.setdefault(g[0], []).append((k, j))
    queue = deque([(0,) * n])
    while queue:
        u = queue.popleft()
        for i in range(n):
            if u[i]:
                continue
            w = u[:i] + (1,) + u[i + 1:]
            if w in eps:
                continue
            for k, j in by_state[u]:
                found = _solve_sign(cm, image, dual_cols, eps, u, w, k, j)
                if found is not None:
                    eps[w] = found
                    queue.append(w)
                    break
    for k, lst in cm.gens.items():
        for j in range(len(lst)):
            res = check_edge(k, j, eps)
            if res is None or res[0] != res[1]:
                raise NotAComplex("mirror map is not a chain map for any choice of signs")
    return MirrorDuality(cm, c, eps, image)


def _solve_sign(cm, image, dual_cols, eps, u, w, k, j):
    """Sign at ``w`` making one nonzero entry of the chain-map square agree."""
    dk, di, z = image[(k, j)]
    rhs = {key: eps[u] * z * v for key, v in dual_cols.get((dk, di), {}).items()}
    for (i, jj), v in cm.d.get(k, {}).items():
        if jj != j or cm.gens[k + 1][i][0] != w:
            continue
        tk, ti, tz = image[(k + 1, i)]
        want = rhs.get((tk, ti), 0)
        if want:
            return 1 if want == v * tz else -1
    return None
