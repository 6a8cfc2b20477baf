"""Chain maps on Bar-Natan complexes induced by Reidemeister and Morse moves.

Move scripts use one move per line::

    r1+ e4        add a positive kink on edge 4
    r1- c2        remove the negative kink at crossing 2
    r2 e3 e7      push edge 3 over edge 7 (two new crossings)
    r2 c1 c5      remove the bigon formed by crossings 1 and 5
    r3 c1 c2 c3   slide across the triangle formed by three crossings
    cup           add a small unknotted circle
    cap e9        remove the free circle with edge label 9
    saddle e2 e9  oriented saddle between two edges

Crossings are numbered from 1 in PD order; edges use their PD labels.

Reidemeister maps come from Gaussian elimination.  The larger complex is
reduced by cancelling the generators that carry a small local circle
against their neighbours; the survivors are matched with generators of the
smaller diagram by their circles' outer edges, and signs are solved so the
match is a chain isomorphism.  The third move reduces both sides to a
common complex in the same way.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from networkx.utils import UnionFind

from .complex import GradedChainComplex, frobenius_spec
from .diagram import LinkDiagram, circles_of, planar_faces
from .errors import (
    EmbeddingFailure,
    InconsistentEdges,
    InvalidSite,
    NonComposable,
    NonOrientable,
    NotAChainMap,
    NotConnectedCobordism,
)
from .homology import bar_natan_complex, canonical_cycles, homology

BN = frobenius_spec(1, 0)


# move specifications ----------------------------------------------------------

KINDS = ("r1+", "r1-", "r2", "r3", "cup", "cap", "saddle")


@dataclass(frozen=True)
class MoveSpec:
    kind: str
    site: tuple = ()  # (("e", label) | ("c", crossing number from 1), ...)

    def __str__(self) -> str:
        return " ".join([self.kind] + [f"{t}{v}" for t, v in self.site])


def parse_move(line: str) -> MoveSpec:
    parts = line.split()
    if not parts or parts[0] not in KINDS:
        raise InvalidSite(f"unknown move {line.strip()!r}")
    site = []
    for tok in parts[1:]:
        if len(tok) < 2 or tok[0] not in "ec" or not tok[1:].isdigit():
            raise InvalidSite(f"bad site token {tok!r}")
        site.append((tok[0], int(tok[1:])))
    return MoveSpec(parts[0], tuple(site))


def parse_moves(text: str) -> list:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_move(line))
    return out


# chain maps -----------------------------------------------------------------------

@dataclass
class ChainMap:
    """Degree-preserving map; ``maps[k][(row, col)]`` with col in source.gens[k]."""

    source: GradedChainComplex
    target: GradedChainComplex
    maps: dict
    qshift: int = 0
    source_diagram: LinkDiagram | None = None
    target_diagram: LinkDiagram | None = None
    connected: bool = True

    def apply(self, k: int, vec: Mapping[int, int]) -> dict:
        out: dict = {}
        for (i, j), v in self.maps.get(k, {}).items():
            if j in vec:
                out[i] = out.get(i, 0) + v * vec[j]
        return {i: v for i, v in out.items() if v}

    def check(self) -> None:
        """Raise NotAChainMap unless f d = d f on every generator."""
        for k, gens in self.source.gens.items():
            for j in range(len(gens)):
                lhs = self.target.apply(k, self.apply(k, {j: 1}))
                rhs = self.apply(k + 1, self.source.apply(k, {j: 1}))
                if lhs != rhs:
                    raise NotAChainMap(f"f d != d f on {gens[j]!r}")

    def is_chain_map(self) -> bool:
        try:
            self.check()
        except NotAChainMap:
            return False
        return True

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "qshift": self.qshift,
            "degrees": [{"degree": k, "entries": [[i, j, v] for (i, j), v in sorted(ent.items())]}
                        for k, ent in sorted(self.maps.items()) if ent],
        }


def identity_map(c: GradedChainComplex, d: LinkDiagram | None = None) -> ChainMap:
    maps = {k: {(i, i): 1 for i in range(len(g))} for k, g in c.gens.items()}
    return ChainMap(c, c, maps, 0, d, d)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g after f."""
    if f.target is not g.source and f.target.gens != g.source.gens:
        raise NonComposable("target of the first map is not the source of the second")
    maps = {}
    for k in f.maps:
        cols: dict = defaultdict(dict)
        for (i, j), v in f.maps[k].items():
            cols[j][i] = v
        gk = defaultdict(dict)
        for (i, j), v in g.maps.get(k, {}).items():
            gk[j][i] = v
        ent: dict = {}
        for j, col in cols.items():
            for m, v in col.items():
                for i, w in gk.get(m, {}).items():
                    ent[(i, j)] = ent.get((i, j), 0) + v * w
        maps[k] = {key: v for key, v in ent.items() if v}
    return ChainMap(f.source, g.target, maps, f.qshift + g.qshift, f.source_diagram,
                    g.target_diagram, f.connected and g.connected)


def mapping_cone(f: ChainMap) -> GradedChainComplex:
    """Cone^k = A^{k+1} + B^k with d(a, b) = (-d a, f a + d b)."""
    A, B = f.source, f.target
    degs = sorted(set(k - 1 for k in A.gens) | set(B.gens))
    gens = {k: [("a", g) for g in A.gens.get(k + 1, [])] + [("b", g) for g in B.gens.get(k, [])]
            for k in degs}
    d: dict = {}
    for k in degs:
        na_src = len(A.gens.get(k + 1, []))
        na_tgt = len(A.gens.get(k + 2, []))
        ent = {}
        for (i, j), v in A.d.get(k + 1, {}).items():
            ent[(i, j)] = -v
        for (i, j), v in f.maps.get(k + 1, {}).items():
            ent[(na_tgt + i, j)] = ent.get((na_tgt + i, j), 0) + v
        for (i, j), v in B.d.get(k, {}).items():
            ent[(na_tgt + i, na_src + j)] = v
        d[k] = {key: v for key, v in ent.items() if v}
    return GradedChainComplex(gens, d, step=1)


def is_quasi_isomorphism(f: ChainMap) -> bool:
    h = homology(mapping_cone(f), "Z")
    return h.total_rank() == 0 and all(not t for _, t in h.groups.values())


# diagram surgery -------------------------------------------------------------------

def _heads_of(d: LinkDiagram) -> list:
    return [list(h) for h in d.heads]


def _finish(xs, hs, loops) -> tuple:
    """Validate, relabel edges consecutively along components; return (diagram, relabel)."""
    xs = [tuple(x) for x in xs]
    try:
        raw = LinkDiagram.build(xs, loops, heads=hs)
        planar_faces(raw)
    except (EmbeddingFailure, InconsistentEdges, NonOrientable) as exc:
        raise InvalidSite(f"move does not give a planar diagram: {exc}") from None
    relabel, nxt = {}, 1
    for comp in raw.components:
        if comp[0] in raw.loops:
            continue
        for e in comp:
            relabel[e] = nxt
            nxt += 1
    for lp in raw.loops:
        relabel[lp] = nxt
        nxt += 1
    new = LinkDiagram.build([tuple(relabel[e] for e in x) for x in xs],
                            [relabel[lp] for lp in raw.loops], heads=hs)
    return new, relabel


def _fresh(d: LinkDiagram):
    top = max(d.edges, default=0)
    k = top
    while True:
        k += 1
        yield k


def _crossing_tuple(sign: int, u_in, u_out, o_in, o_out) -> tuple:
    if sign > 0:
        return (u_in, o_in, u_out, o_out), (True, True, False, False)
    return (u_in, o_out, u_out, o_in), (True, False, False, True)


def _edge_site(d: LinkDiagram, m: MoveSpec, count: int) -> list:
    if len(m.site) != count or any(t != "e" for t, _ in m.site):
        raise InvalidSite(f"{m.kind} needs {count} edge sites")
    out = [v for _, v in m.site]
    for e in out:
        if e not in d.edges:
            raise InvalidSite(f"edge {e} is not in the diagram")
    return out


def _crossing_site(d: LinkDiagram, m: MoveSpec, count: int) -> list:
    if len(m.site) != count or any(t != "c" for t, _ in m.site):
        raise InvalidSite(f"{m.kind} needs {count} crossing sites")
    out = [v - 1 for _, v in m.site]
    if len(set(out)) != count or any(not 0 <= c < d.n for c in out):
        raise InvalidSite("crossing numbers out of range or repeated")
    return out


def _splice(d: LinkDiagram, remove: Sequence[int]) -> tuple:
    """Delete crossings, joining each strand's incoming and outgoing edges.

    Returns (crossings, heads, loops, edge -> surviving label).
    """
    uf = UnionFind(d.edges)
    for c in remove:
        x = d.crossings[c]
        uf.union(x[0], x[2])
        uf.union(x[1], x[3])
    keep = [c for c in range(d.n) if c not in set(remove)]
    used = {e for c in keep for e in d.crossings[c]}
    rep = {}
    for group in uf.to_sets():
        inside = sorted(e for e in group if e in used)
        rep.update({e: (inside[0] if inside else min(group)) for e in group})
    xs = [tuple(rep[e] for e in d.crossings[c]) for c in keep]
    hs = [d.heads[c] for c in keep]
    loops = sorted({rep[e] for e in d.edges if rep[e] not in {r for x in xs for r in x}})
    return xs, hs, loops, rep


# Reidemeister diagram moves ---------------------------------------------------------

@dataclass
class _LocalMove:
    small: LinkDiagram
    big: LinkDiagram
    local: tuple  # crossing indices of big that are new
    small_of_big: dict  # external big crossing -> small crossing
    edge_map: dict  # big edge -> small edge, internal edges absent
    components: list  # (small edge, big edge) pairs for component tracking


def _r1_add(d: LinkDiagram, e: int, sign: int) -> _LocalMove:
    fresh = _fresh(d)
    k1, k2 = next(fresh), next(fresh)
    xs = [list(x) for x in d.crossings]
    hs = _heads_of(d)
    loops = list(d.loops)
    if e in loops:
        loops.remove(e)
        end = e
    else:
        c, p = d.head_of(e)
        xs[c][p] = k2
        end = k2
    x, h = _crossing_tuple(sign, e, k1, k1, end)
    xs.append(x)
    hs.append(h)
    big, rl = _finish(xs, hs, loops)
    emap = {rl[e]: e}
    if end != e:
        emap[rl[end]] = e
    comps = [(e, rl[e]), (e, rl[k1])] + ([(e, rl[end])] if end != e else [])
    comps += [(f, rl[f]) for f in d.edges if f != e]
    emap.update({rl[f]: f for f in d.edges if f != e})
    return _LocalMove(d, big, (big.n - 1,), {i: i for i in range(d.n)}, emap, comps)


def _r1_remove(d: LinkDiagram, c: int, sign: int) -> _LocalMove:
    x = d.crossings[c]
    loops_at = [p for p in range(4) if x[p] == x[(p + 1) % 4]]
    if not loops_at:
        raise InvalidSite(f"crossing {c + 1} is not a kink")
    if d.signs[c] != sign:
        raise InvalidSite(f"crossing {c + 1} has sign {d.signs[c]:+d}")
    internal = x[loops_at[0]]
    xs, hs, loops, rep = _splice(d, [c])
    small, rl = _finish(xs, hs, loops)
    emap = {e: rl[rep[e]] for e in d.edges if e != internal}
    comps = [(rl[rep[e]], e) for e in d.edges]
    keep = [k for k in range(d.n) if k != c]
    return _LocalMove(small, d, (c,), {k: i for i, k in enumerate(keep)}, emap, comps)


def _r2_add(d: LinkDiagram, over: int, under: int) -> _LocalMove:
    if over == under or over in d.loops or under in d.loops:
        raise InvalidSite("r2 needs two distinct crossing edges")
    errors = []
    for under_first_a, sign_a in product((True, False), (1, -1)):
        fresh = _fresh(d)
        i1, i2, j1, j2 = (next(fresh) for _ in range(4))
        xs = [list(x) for x in d.crossings]
        hs = _heads_of(d)
        ci, pi = d.head_of(over)
        cj, pj = d.head_of(under)
        xs[ci][pi] = i2
        xs[cj][pj] = j2
        # over strand: over -> a -> i1 -> b -> i2; under strand meets a then b or b then a
        under_at = {"a": (under, j1), "b": (j1, j2)} if under_first_a else \
            {"b": (under, j1), "a": (j1, j2)}
        xa, ha = _crossing_tuple(sign_a, *under_at["a"], over, i1)
        xb, hb = _crossing_tuple(-sign_a, *under_at["b"], i1, i2)
        xs += [xa, xb]
        hs += [ha, hb]
        try:
            big, rl = _finish(xs, hs, list(d.loops))
        except InvalidSite as exc:
            errors.append(str(exc))
            continue
        emap = {rl[f]: f for f in d.edges}
        emap[rl[i2]] = over
        emap[rl[j2]] = under
        comps = [(f, g) for g, f in emap.items()] + [(over, rl[i1]), (under, rl[j1])]
        return _LocalMove(d, big, (big.n - 2, big.n - 1), {i: i for i in range(d.n)}, emap, comps)
    raise InvalidSite(f"edges {over} and {under} do not share a face")


def _r2_remove(d: LinkDiagram, ca: int, cb: int) -> _LocalMove:
    xa, xb = d.crossings[ca], d.crossings[cb]
    shared_over = [e for e in (xa[1], xa[3]) if e in (xb[1], xb[3])]
    shared_under = [e for e in (xa[0], xa[2]) if e in (xb[0], xb[2])]
    if not shared_over or not shared_under or d.signs[ca] == d.signs[cb]:
        raise InvalidSite(f"crossings {ca + 1} and {cb + 1} do not form a removable bigon")
    internal = {shared_over[0], shared_under[0]}
    xs, hs, loops, rep = _splice(d, [ca, cb])
    small, rl = _finish(xs, hs, loops)
    emap = {e: rl[rep[e]] for e in d.edges if e not in internal}
    comps = [(rl[rep[e]], e) for e in d.edges]
    keep = [k for k in range(d.n) if k not in (ca, cb)]
    return _LocalMove(small, d, (ca, cb), {k: i for i, k in enumerate(keep)}, emap, comps)


def _r3(d: LinkDiagram, cs: Sequence[int]) -> tuple:
    """Return (new diagram, mid edges of d, mid edges of the result)."""
    cs = list(cs)
    shared = {}
    for a in range(3):
        for b in range(a + 1, 3):
            for e in set(d.crossings[cs[a]]) & set(d.crossings[cs[b]]):
                shared.setdefault(e, set()).update((cs[a], cs[b]))
    if len(shared) != 3 or any(len(v) != 2 for v in shared.values()) \
            or any(d.crossings[c].count(e) != 1 for e in shared for c in shared[e]):
        raise InvalidSite("crossings do not bound a triangle")
    kinds = {}
    for e, pair in shared.items():
        under = tuple(sorted(d.crossings[c].index(e) % 2 == 0 for c in pair))
        kinds[{(False, False): "top", (True, True): "bottom", (False, True): "middle"}[under]] = e
    if len(kinds) != 3:
        raise InvalidSite("triangle has no strand that is over at both crossings")
    for c in cs:
        parity = sorted(d.crossings[c].index(e) % 2 for e in d.crossings[c] if e in shared)
        if parity != [0, 1]:
            raise InvalidSite(f"crossing {c + 1} meets the triangle on one strand only")
    xs = [list(x) for x in d.crossings]
    hs = _heads_of(d)
    ends = {}  # (strand, crossing) -> (in edge, out edge) after the move
    for m in kinds.values():
        cy, r = d.head_of(m)
        (cx,) = shared[m] - {cy}
        q = d.crossings[cx].index(m)
        e_in = d.crossings[cx][(q + 2) % 4]
        e_out = d.crossings[cy][(r + 2) % 4]
        ends[(m, cy)] = (e_in, m)
        ends[(m, cx)] = (m, e_out)
    for c in cs:
        x = d.crossings[c]
        mids = [e for e in x if e in shared]
        under_mid = [e for e in mids if x.index(e) % 2 == 0][0]
        over_mid = [e for e in mids if x.index(e) % 2 == 1][0]
        u_in, u_out = ends[(under_mid, c)]
        o_in, o_out = ends[(over_mid, c)]
        xs[c], hs[c] = _crossing_tuple(d.signs[c], u_in, u_out, o_in, o_out)
    new, rl = _finish(xs, hs, list(d.loops))
    return new, rl, set(shared)


# Gaussian elimination -------------------------------------------------------------------

class _Eliminator:
    """Sequential cancellation of unit entries with projection and inclusion maps."""

    def __init__(self, c: GradedChainComplex):
        self.c = c
        self.deg = {g: k for k, lst in c.gens.items() for g in lst}
        self.out: dict = defaultdict(dict)
        self.inn: dict = defaultdict(dict)
        for k, ent in c.d.items():
            if not ent:
                continue
            src, tgt = c.gens[k], c.gens[k + 1]
            for (i, j), v in ent.items():
                self.out[src[j]][tgt[i]] = v
                self.inn[tgt[i]][src[j]] = v
        self.P = {g: {g: 1} for g in self.deg}  # big generator -> current chain
        self.P_rev: dict = defaultdict(set)
        for g in self.deg:
            self.P_rev[g].add(g)
        self.I = {g: {g: 1} for g in self.deg}  # current generator -> big chain
        self.alive = set(self.deg)

    def _set(self, g, h, v):
        if v:
            self.out[g][h] = v
            self.inn[h][g] = v
        else:
            self.out[g].pop(h, None)
            self.inn[h].pop(g, None)

    def cancel(self, a, b) -> None:
        phi = self.out[a].get(b)
        if phi not in (1, -1):
            raise NotAChainMap(f"cannot cancel {a!r} against {b!r}: entry {phi}")
        ins = [(g, v) for g, v in self.inn[b].items() if g != a]
        outs = [(h, w) for h, w in self.out[a].items() if h != b]
        for g, v in ins:
            for h, w in outs:
                self._set(g, h, self.out[g].get(h, 0) - v * phi * w)
        for g, v in ins:
            vec = self.I[g]
            for x, z in self.I[a].items():
                vec[x] = vec.get(x, 0) - phi * v * z
            self.I[g] = {x: z for x, z in vec.items() if z}
        pb = {h: -phi * w for h, w in outs}
        for x in list(self.P_rev[a] | self.P_rev[b]):
            vec = self.P[x]
            vec.pop(a, None)
            cb = vec.pop(b, 0)
            if cb:
                for h, w in pb.items():
                    vec[h] = vec.get(h, 0) + cb * w
                    self.P_rev[h].add(x)
                for h in pb:
                    if not vec.get(h):
                        vec.pop(h, None)
        for g in (a, b):
            for h in list(self.out[g]):
                self._set(g, h, 0)
            for h in list(self.inn[g]):
                self._set(h, g, 0)
            self.alive.discard(g)
            self.I.pop(g, None)
            self.P_rev.pop(g, None)

    def reduced(self) -> GradedChainComplex:
        gens = {k: [g for g in lst if g in self.alive] for k, lst in self.c.gens.items()}
        gens = {k: v for k, v in gens.items() if v}
        idx = {k: {g: i for i, g in enumerate(lst)} for k, lst in gens.items()}
        d: dict = {}
        for k, lst in gens.items():
            for j, g in enumerate(lst):
                for h, v in self.out[g].items():
                    d.setdefault(k, {})[(idx[k + 1][h], j)] = v
        qgr = {g: self.c.qgr[g] for lst in gens.values() for g in lst if g in self.c.qgr}
        return GradedChainComplex(gens, d, 1, qgr)


def _internal_circle(circle, edge_map) -> bool:
    return all(e not in edge_map for e in circle)


def _small_circle_pairs(big: LinkDiagram, c: GradedChainComplex, local: Sequence[int],
                        edge_map: Mapping) -> list:
    """Pairs (a, b) cancelling every generator whose resolution has a local circle.

    A generator labelling the local circle ``X`` is paired with its
    predecessor across the first local crossing whose change splits the
    circle off; one labelling it ``1`` with its successor across the first
    local crossing whose change merges it away.
    """
    pairs = []
    used = set()
    for k in sorted(c.gens):
        for g in c.gens[k]:
            u, labels = g
            circ = circles_of(big.crossings, u, big.loops)
            small = [i for i, cc in enumerate(circ) if _internal_circle(cc, edge_map)]
            if not small:
                continue
            if len(small) != 1:
                raise InvalidSite("more than one local circle in a resolution")
            o = small[0]
            want_up = labels[o] == "1"
            for lc in local:
                if u[lc] == (0 if want_up else 1):
                    v = u[:lc] + (1 - u[lc],) + u[lc + 1:]
                    other = circles_of(big.crossings, v, big.loops)
                    if circ[o] in other:
                        continue
                    partner = _neighbour_generator(circ, other, labels, o, want_up)
                    pair = (g, (v, partner)) if want_up else ((v, partner), g)
                    if pair[0] in used or pair[1] in used:
                        raise InvalidSite("local cancellation pairs overlap")
                    used.update(pair)
                    pairs.append(pair)
                    break
    return pairs


def _neighbour_generator(circ, other, labels, o, up) -> tuple:
    """Labels on ``other`` matching ``labels`` once the local circle is absorbed."""
    lab = {}
    for cc, x in zip(circ, labels):
        lab[cc] = x
    out = []
    for cc in other:
        if cc in lab:
            out.append(lab[cc])
        else:
            # the circle that absorbed the local one keeps the label of its other part
            parts = [p for p in circ if set(p) <= set(cc) and p != circ[o]]
            out.append(lab[parts[0]])
    return tuple(out)


# matching survivors ---------------------------------------------------------------------

def _key(d: LinkDiagram, g, crossing_map: Mapping, edge_map: Mapping, n_small: int) -> tuple:
    u, labels = g
    us = [0] * n_small
    for c, sc in crossing_map.items():
        us[sc] = u[c]
    circ = circles_of(d.crossings, u, d.loops)
    sig = []
    for cc, x in zip(circ, labels):
        ext = frozenset(edge_map[e] for e in cc if e in edge_map)
        if ext:
            sig.append((ext, x))
    return tuple(us), frozenset(sig)


def _match(A: GradedChainComplex, keyA, B: GradedChainComplex, keyB) -> dict:
    where = {}
    for k, lst in B.gens.items():
        for g in lst:
            key = (k, keyB(g))
            if key in where:
                raise NotAChainMap("survivors are not distinguished by their outer circles")
            where[key] = g
    phi = {}
    for k, lst in A.gens.items():
        for g in lst:
            key = (k, keyA(g))
            if key not in where:
                raise NotAChainMap(f"no survivor matches {g!r}")
            phi[g] = where.pop(key)
    if where:
        raise NotAChainMap("unmatched survivors remain")
    return phi


def _solve_signs(A: GradedChainComplex, B: GradedChainComplex, phi: Mapping) -> dict:
    """Signs eps with d_B(eps(x) phi(x)) = sum eps(y) phi(y) d_A[y, x]."""
    entB = {}
    for k, ent in B.d.items():
        for (i, j), v in ent.items():
            entB[(B.gens[k][j], B.gens[k + 1][i])] = v
    adj = defaultdict(list)
    entA = {}
    for k, ent in A.d.items():
        for (i, j), v in ent.items():
            x, y = A.gens[k][j], A.gens[k + 1][i]
            entA[(x, y)] = v
            adj[x].append((y, v))
            adj[y].append((x, v))
    eps = {}
    for k in sorted(A.gens):
        for root in A.gens[k]:
            if root in eps:
                continue
            eps[root] = 1
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y, v in adj[x]:
                    w = entB.get((phi[x], phi[y])) or entB.get((phi[y], phi[x]))
                    if w is None or abs(w) != abs(v):
                        raise NotAChainMap("reduced differentials do not match")
                    s = eps[x] * (1 if w == v else -1)
                    if y not in eps:
                        eps[y] = s
                        queue.append(y)
    mapped = {(phi[x], phi[y]): eps[x] * eps[y] * v for (x, y), v in entA.items()}
    if mapped != entB:
        raise NotAChainMap("reduced differentials do not match up to sign")
    return eps


def _iso_map(A, B, phi, eps) -> ChainMap:
    idxB = {k: B.index(k) for k in B.gens}
    maps = {}
    for k, lst in A.gens.items():
        maps[k] = {(idxB[k][phi[g]], j): eps[g] for j, g in enumerate(lst)}
    return ChainMap(A, B, maps)


def _inclusion_map(el: _Eliminator, red: GradedChainComplex) -> ChainMap:
    big = el.c
    idx = {k: big.index(k) for k in big.gens}
    maps = {}
    for k, lst in red.gens.items():
        ent = {}
        for j, g in enumerate(lst):
            for x, v in el.I[g].items():
                ent[(idx[k][x], j)] = v
        maps[k] = ent
    return ChainMap(red, big, maps)


def _projection_map(el: _Eliminator, red: GradedChainComplex) -> ChainMap:
    big = el.c
    idx = {k: red.index(k) for k in red.gens}
    maps = {}
    for k, lst in big.gens.items():
        ent = {}
        for j, g in enumerate(lst):
            for y, v in el.P[g].items():
                ent[(idx[k][y], j)] = v
        maps[k] = ent
    return ChainMap(big, red, maps)


def _invert_iso(f: ChainMap) -> ChainMap:
    maps = {k: {(j, i): v for (i, j), v in ent.items()} for k, ent in f.maps.items()}
    return ChainMap(f.target, f.source, maps)


@dataclass
class ReidemeisterResult:
    diagram: LinkDiagram
    forward: ChainMap
    backward: ChainMap
    cancelled: list = field(default_factory=list)  # (a, b) pairs in the larger complex
    survivors: list = field(default_factory=list)
    components: list = field(default_factory=list)  # (old edge, new edge)


def _reduce_local(mv: _LocalMove) -> tuple:
    """(small complex, big complex, eliminator, reduced, iso small -> reduced, pairs)."""
    cs = bar_natan_complex(mv.small)
    cb = bar_natan_complex(mv.big)
    el = _Eliminator(cb)
    pairs = _small_circle_pairs(mv.big, cb, mv.local, mv.edge_map)
    for a, b in pairs:
        el.cancel(a, b)
    red = el.reduced()
    ident = {e: e for e in mv.small.edges}
    phi = _match(cs, lambda g: _key(mv.small, g, {i: i for i in range(mv.small.n)}, ident, mv.small.n),
                 red, lambda g: _key(mv.big, g, mv.small_of_big, mv.edge_map, mv.small.n))
    eps = _solve_signs(cs, red, phi)
    iso = _iso_map(cs, red, phi, eps)
    return cs, cb, el, red, iso, pairs


def _local_result(mv: _LocalMove, adding: bool) -> ReidemeisterResult:
    cs, cb, el, red, iso, pairs = _reduce_local(mv)
    up = compose(_inclusion_map(el, red), iso)
    down = compose(_invert_iso(iso), _projection_map(el, red))
    up.source_diagram, up.target_diagram = mv.small, mv.big
    down.source_diagram, down.target_diagram = mv.big, mv.small
    survivors = [g for lst in red.gens.values() for g in lst]
    if adding:
        return ReidemeisterResult(mv.big, up, down, pairs, survivors, [(a, b) for a, b in mv.components])
    return ReidemeisterResult(mv.small, down, up, pairs, survivors,
                              [(b, a) for a, b in mv.components])


def _local_circle_state(d: LinkDiagram, cs: Sequence[int], emap: Mapping) -> tuple:
    """Bits on ``cs`` of the resolutions that close the triangle into a circle."""
    for bits in product((0, 1), repeat=len(cs)):
        u = [0] * d.n
        for c, b in zip(cs, bits):
            u[c] = b
        if any(_internal_circle(cc, emap) for cc in circles_of(d.crossings, u, d.loops)):
            return dict(zip(cs, bits))
    raise InvalidSite("the triangle never closes into a circle")


def _r3_side(d: LinkDiagram, cx: GradedChainComplex, cs, emap, ext, pred, succ,
             swap: bool = False) -> tuple:
    """Reduce one side of the third move; survivors keyed by outer circles and local slice."""
    closed = _local_circle_state(d, cs, emap)
    (third,) = set(cs) - {pred, succ}
    el = _Eliminator(cx)
    pairs = _small_circle_pairs(d, cx, (pred, succ), emap)
    for a, b in pairs:
        el.cancel(a, b)
    red = el.reduced()

    def key(g):
        u = g[0]
        if u[third] == closed[third]:
            slice_ = ("reduced",)
        else:
            # the two other crossings may trade places across the move
            order = sorted((pred, succ), reverse=swap)
            slice_ = (third, tuple(u[c] for c in order))
        return _key(d, g, ext, emap, len(ext)), slice_

    return el, red, key, pairs


def _r3_result(d: LinkDiagram, cs: Sequence[int]) -> ReidemeisterResult:
    new, rl, mids_old = _r3(d, cs)
    emap_old = {e: e for e in d.edges if e not in mids_old}
    emap_new = {rl[e]: e for e in d.edges if e not in mids_old}
    ext = {c: i for i, c in enumerate(k for k in range(d.n) if k not in cs)}
    c_old, c_new = bar_natan_complex(d), bar_natan_complex(new)
    closed_old = _local_circle_state(d, cs, emap_old)
    closed_new = _local_circle_state(new, cs, emap_new)
    last_error = None
    # the crossing left out of the cancellation must be the same on both sides
    for third, swap in product(cs, (False, True)):
        pred_old = [c for c in cs if c != third and closed_old[c] == 1]
        succ_old = [c for c in cs if c != third and closed_old[c] == 0]
        pred_new = [c for c in cs if c != third and closed_new[c] == 1]
        succ_new = [c for c in cs if c != third and closed_new[c] == 0]
        if not (pred_old and succ_old and pred_new and succ_new):
            continue
        try:
            el_old, red_old, key_old, pairs_old = _r3_side(d, c_old, cs, emap_old, ext,
                                                           pred_old[0], succ_old[0])
            el_new, red_new, key_new, pairs_new = _r3_side(new, c_new, cs, emap_new, ext,
                                                           pred_new[0], succ_new[0], swap)
            phi = _match(red_old, key_old, red_new, key_new)
            eps = _solve_signs(red_old, red_new, phi)
        except (InvalidSite, NotAChainMap) as exc:
            last_error = exc
            continue
        iso = _iso_map(red_old, red_new, phi, eps)
        fwd = compose(_inclusion_map(el_new, red_new), compose(iso, _projection_map(el_old, red_old)))
        bwd = compose(_inclusion_map(el_old, red_old),
                      compose(_invert_iso(iso), _projection_map(el_new, red_new)))
        fwd.source_diagram, fwd.target_diagram = d, new
        bwd.source_diagram, bwd.target_diagram = new, d
        comps = [(e, rl[e]) for e in d.edges]
        return ReidemeisterResult(new, fwd, bwd, pairs_old + pairs_new,
                                  [g for lst in red_new.gens.values() for g in lst], comps)
    raise InvalidSite(f"no common reduction found for this triangle: {last_error}")


def reidemeister_move(d: LinkDiagram, m: MoveSpec) -> ReidemeisterResult:
    if m.kind in ("r1+", "r1-"):
        sign = 1 if m.kind == "r1+" else -1
        if len(m.site) == 1 and m.site[0][0] == "e":
            return _local_result(_r1_add(d, _edge_site(d, m, 1)[0], sign), True)
        (c,) = _crossing_site(d, m, 1)
        return _local_result(_r1_remove(d, c, sign), False)
    if m.kind == "r2":
        if m.site and m.site[0][0] == "e":
            over, under = _edge_site(d, m, 2)
            return _local_result(_r2_add(d, over, under), True)
        ca, cb = _crossing_site(d, m, 2)
        return _local_result(_r2_remove(d, ca, cb), False)
    if m.kind == "r3":
        return _r3_result(d, _crossing_site(d, m, 3))
    raise InvalidSite(f"{m.kind} is not a Reidemeister move")


def reidemeister_map(d: LinkDiagram, m: MoveSpec) -> tuple:
    res = reidemeister_move(d, m)
    return res.diagram, res.forward


# Morse moves ---------------------------------------------------------------------------------

def _morse_diagram(d: LinkDiagram, m: MoveSpec) -> tuple:
    """(new diagram, relation pairs (old edge, new edge), quantum shift)."""
    xs = [list(x) for x in d.crossings]
    hs = _heads_of(d)
    loops = list(d.loops)
    if m.kind == "cup":
        if m.site:
            raise InvalidSite("cup takes no site")
        loops.append(max(d.edges, default=0) + 1)
        new, rl = _finish(xs, hs, loops)
        return new, [(e, rl[e]) for e in d.edges], 1
    if m.kind == "cap":
        (e,) = _edge_site(d, m, 1)
        if e not in d.loops:
            raise InvalidSite(f"edge {e} is not a free circle")
        loops.remove(e)
        new, rl = _finish(xs, hs, loops)
        return new, [(f, rl[f]) for f in d.edges if f != e], 1
    if m.kind == "saddle":
        a, b = _edge_site(d, m, 2)
        if a == b:
            raise InvalidSite("saddle needs two different edges")
        if b in d.loops and a not in d.loops:
            a, b = b, a
        if a in d.loops:
            loops.remove(a)
            new, rl = _finish(xs, hs, loops)
            rel = [(f, rl[f]) for f in d.edges if f != a] + [(a, rl[b])]
            return new, rel, -1
        ca, pa = d.head_of(a)
        cb, pb = d.head_of(b)
        xs[ca][pa] = b
        xs[cb][pb] = a
        new, rl = _finish(xs, hs, loops)
        return new, [(f, rl[f]) for f in d.edges], -1
    raise InvalidSite(f"{m.kind} is not a Morse move")


def _cluster_map(src_d, tgt_d, rel, cs: GradedChainComplex, ct: GradedChainComplex, qshift) -> ChainMap:
    if src_d.n != tgt_d.n:
        raise NotAChainMap("Morse moves keep the crossings")
    idx = {k: ct.index(k) for k in ct.gens}
    cache = {}
    maps = {}
    for k, lst in cs.gens.items():
        ent = {}
        for j, (u, labels) in enumerate(lst):
            if u not in cache:
                cache[u] = _clusters(circles_of(src_d.crossings, u, src_d.loops),
                                     circles_of(tgt_d.crossings, u, tgt_d.loops), rel)
            clusters, ntgt = cache[u]
            outs = [({}, 1)]
            for srcs, tgts in clusters:
                local = _local_image(tuple(labels[i] for i in srcs), len(tgts))
                outs = [({**lab, **dict(zip(tgts, new))}, z * w)
                        for lab, z in outs for new, w in local.items()]
            for lab, z in outs:
                key = (u, tuple(lab[i] for i in range(ntgt)))
                i = idx[k][key]
                ent[(i, j)] = ent.get((i, j), 0) + z
        maps[k] = {key: v for key, v in ent.items() if v}
    return ChainMap(cs, ct, maps, qshift, src_d, tgt_d)


def _clusters(old, new, rel) -> tuple:
    uf = UnionFind([("s", i) for i in range(len(old))] + [("t", j) for j in range(len(new))])
    where_old = {e: i for i, c in enumerate(old) for e in c}
    where_new = {e: j for j, c in enumerate(new) for e in c}
    for a, b in rel:
        if a in where_old and b in where_new:
            uf.union(("s", where_old[a]), ("t", where_new[b]))
    groups = defaultdict(lambda: ([], []))
    for node in list(uf):
        root = uf[node]
        groups[root][0 if node[0] == "s" else 1].append(node[1])
    out = []
    for srcs, tgts in groups.values():
        out.append((tuple(sorted(srcs)), tuple(sorted(tgts))))
    out.sort()
    return out, len(new)


def _local_image(labels: tuple, n_out: int) -> dict:
    """Frobenius structure map for one cluster: identity, m, Delta, unit or counit."""
    if len(labels) == 1 and n_out == 1:
        return {labels: 1}
    if len(labels) == 2 and n_out == 1:
        return {(c,): z for c, z in BN.mult[labels].items()}
    if len(labels) == 1 and n_out == 2:
        return dict(BN.comult[labels[0]])
    if not labels and n_out == 1:
        return {("1",): 1}
    if len(labels) == 1 and n_out == 0:
        return {(): 1} if labels[0] == "X" else {}
    raise NotAChainMap(f"cannot map {len(labels)} circles to {n_out}")


def morse_map(d: LinkDiagram, m: MoveSpec) -> tuple:
    new, rel, qshift = _morse_diagram(d, m)
    f = _cluster_map(d, new, rel, bar_natan_complex(d), bar_natan_complex(new), qshift)
    return new, f


# composites ---------------------------------------------------------------------------------

@dataclass
class Cobordism:
    source: LinkDiagram
    target: LinkDiagram
    map: ChainMap
    moves: list
    connected: bool
    euler: int


def _component_links(old: LinkDiagram, new: LinkDiagram, pairs) -> list:
    return [(old.component_of[a], new.component_of[b]) for a, b in pairs
            if a in old.component_of and b in new.component_of]


def apply_move(d: LinkDiagram, m: MoveSpec) -> tuple:
    """(new diagram, chain map, component links (old index, new index), euler change)."""
    if m.kind in ("r1+", "r1-", "r2", "r3"):
        res = reidemeister_move(d, m)
        return res.diagram, res.forward, _component_links(d, res.diagram, res.components), 0
    new, rel, _ = _morse_diagram(d, m)
    _, f = morse_map(d, m)
    return new, f, _component_links(d, new, rel), {"cup": 1, "cap": 1, "saddle": -1}[m.kind]


def cobordism_map(d: LinkDiagram, moves: Sequence[MoveSpec]) -> Cobordism:
    c = bar_natan_complex(d)
    total = identity_map(c, d)
    pieces = UnionFind()
    current = {i: ("0", i) for i in range(d.num_components)}
    for node in current.values():
        pieces.union(node, node)
    euler = 0
    cur = d
    for step, m in enumerate(moves, 1):
        new, f, links, de = apply_move(cur, m)
        f.source = total.target if total.target.gens == f.source.gens else f.source
        total = compose(f, total)
        nxt = {j: (str(step), j) for j in range(new.num_components)}
        for node in nxt.values():
            pieces.union(node, node)
        for a, b in links:
            pieces.union(current[a], nxt[b])
        current, cur = nxt, new
        euler += de
    roots = {pieces[n] for n in list(pieces)}
    total.connected = len(roots) == 1
    total.source_diagram, total.target_diagram = d, cur
    return Cobordism(d, cur, total, list(moves), total.connected, euler)


# canonical classes under cobordisms -----------------------------------------------------

def _echelon(columns: list) -> dict:
    """Row-pivot echelon form of rational column vectors: pivot row -> column."""
    basis: dict = {}
    for col in columns:
        v = _reduce_vec(dict(col), basis)
        if v:
            p = min(v)
            inv = 1 / v[p]
            basis[p] = {i: x * inv for i, x in v.items()}
    return basis


def _reduce_vec(v: dict, basis: dict) -> dict:
    v = {i: Fraction(x) for i, x in v.items() if x}
    changed = True
    while changed:
        changed = False
        for p in sorted(v):
            if p in basis and v.get(p):
                f = v[p]
                for i, x in basis[p].items():
                    v[i] = v.get(i, 0) - f * x
                v = {i: x for i, x in v.items() if x}
                changed = True
                break
    return v


def homology_coordinates(c: GradedChainComplex, k: int, z: Mapping, classes: Sequence[Mapping]) -> list:
    """Rational coefficients of [z] in the basis given by the cycles ``classes``."""
    bnd = _echelon(list(c.columns(k - 1).values()))
    rz = _reduce_vec(dict(z), bnd)
    reduced = [_reduce_vec(dict(x), bnd) for x in classes]
    # solve rz = sum t_i reduced_i by elimination with bookkeeping
    rows = sorted(set(rz) | {i for r in reduced for i in r})
    m = len(reduced)
    mat = [[r.get(i, Fraction(0)) for r in reduced] + [rz.get(i, Fraction(0))] for i in rows]
    piv_cols = []
    row = 0
    for col in range(m):
        pr = next((i for i in range(row, len(mat)) if mat[i][col]), None)
        if pr is None:
            continue
        mat[row], mat[pr] = mat[pr], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        for i in range(len(mat)):
            if i != row and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
        piv_cols.append(col)
        row += 1
    if any(mat[i][m] for i in range(row, len(mat))):
        raise NotAChainMap("class is not in the span of the given classes")
    sol = [Fraction(0)] * m
    for r, col in enumerate(piv_cols):
        sol[col] = mat[r][m]
    return sol


def canonical_degree(f, which=("alpha", "alpha")):
    """Coefficient of the target class ``which[1]`` in f_* of the source class ``which[0]``."""
    cob = f if isinstance(f, Cobordism) else None
    cmap = cob.map if cob else f
    if not cmap.connected:
        raise NotConnectedCobordism("the move sequence does not give a connected surface")
    src, tgt = cmap.source_diagram, cmap.target_diagram
    if src is None or tgt is None or src.num_components != 1 or tgt.num_components != 1:
        raise NotConnectedCobordism("canonical degrees are defined between knot diagrams")
    names = {"alpha": 0, "beta": 1}
    a = canonical_cycles(src, cmap.source)[names[which[0]]]
    classes = canonical_cycles(tgt, cmap.target)
    image = cmap.apply(a.degree, a.vector)
    coords = homology_coordinates(cmap.target, a.degree, image, [c.vector for c in classes])
    val = coords[names[which[1]]]
    return int(val) if val.denominator == 1 else val


def canonical_degree_matrix(f) -> dict:
    return {(x, y): canonical_degree(f, (x, y)) for x in ("alpha", "beta") for y in ("alpha", "beta")}
