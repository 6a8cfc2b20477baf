"""Oriented link diagrams given by planar-diagram (PD) codes.

A crossing is a 4-tuple of edge labels listed in cyclic order starting at
the incoming under-strand.  Position 0 is the incoming under-edge and
position 2 the outgoing under-edge; positions 1 and 3 carry the
over-strand.  A crossing is positive when the over-strand enters at
position 1.

Smoothing 0 joins positions (0, 3) and (1, 2), smoothing 1 joins (0, 1)
and (2, 3).  With these rules the 0-smoothing of a positive crossing is
the oriented one, so the Seifert state is 0 at positive crossings and 1 at
negative ones.

Crossingless components ("free loops") are written ``O`` in text input and
receive edge labels larger than every crossing edge.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from networkx.utils import UnionFind

from .errors import (
    EmbeddingFailure,
    InconsistentEdges,
    IndexOutOfRange,
    LengthMismatch,
    MalformedPD,
    NonOrientable,
    SameComponent,
)

# position pairs joined by each smoothing
SMOOTHING = {0: ((0, 3), (1, 2)), 1: ((0, 1), (2, 3))}

State = tuple  # tuple of 0/1 bits, one per crossing


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple
    heads: tuple  # heads[c][p] is True when the edge at (c, p) enters crossing c
    loops: tuple = ()

    @classmethod
    def build(cls, crossings: Iterable[Sequence[int]], loops: Iterable[int] = (),
              heads=None) -> "LinkDiagram":
        crossings = tuple(tuple(int(v) for v in x) for x in crossings)
        loops = tuple(int(v) for v in loops)
        _check_edges(crossings, loops)
        if heads is None:
            heads = _infer_heads(crossings)
        else:
            heads = tuple(tuple(bool(h) for h in row) for row in heads)
            _check_heads(crossings, heads)
        return cls(crossings, heads, loops)

    # basic counts ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def signs(self) -> tuple:
        return tuple(1 if h[1] else -1 for h in self.heads)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @cached_property
    def occurrences(self) -> dict:
        occ: dict = {}
        for c, x in enumerate(self.crossings):
            for p, e in enumerate(x):
                occ.setdefault(e, []).append((c, p))
        return occ

    @cached_property
    def edges(self) -> tuple:
        return tuple(sorted(self.occurrences)) + self.loops

    def other_end(self, c: int, p: int) -> tuple:
        a, b = self.occurrences[self.crossings[c][p]]
        return b if a == (c, p) else a

    def head_of(self, e: int) -> tuple:
        """Occurrence (crossing, position) where edge ``e`` enters."""
        for c, p in self.occurrences[e]:
            if self.heads[c][p]:
                return c, p
        raise KeyError(e)

    @cached_property
    def components(self) -> tuple:
        """Oriented edge cycles, each starting at its smallest label."""
        nxt = {}
        for e in self.occurrences:
            c, p = self.head_of(e)
            nxt[e] = self.crossings[c][(p + 2) % 4]
        seen = set()
        comps = []
        for e in sorted(nxt):
            if e in seen:
                continue
            cyc = [e]
            seen.add(e)
            f = nxt[e]
            while f != e:
                cyc.append(f)
                seen.add(f)
                f = nxt[f]
            comps.append(tuple(cyc))
        comps.extend((lp,) for lp in self.loops)
        comps.sort(key=min)
        return tuple(comps)

    @cached_property
    def component_of(self) -> dict:
        return {e: i for i, comp in enumerate(self.components) for e in comp}

    @property
    def num_components(self) -> int:
        return len(self.components)

    # derived diagrams -----------------------------------------------------

    def mirror(self) -> "LinkDiagram":
        """Switch every crossing by reflecting the cyclic order."""
        xs = tuple((a, d, c, b) for a, b, c, d in self.crossings)
        hs = tuple((h[0], h[3], h[2], h[1]) for h in self.heads)
        return LinkDiagram(xs, hs, self.loops)

    def reorient(self, keep: Sequence) -> "LinkDiagram":
        """Reverse the components whose entry in ``keep`` is falsy or -1.

        Crossing order and smoothings are unchanged, so states of the
        result index the same resolutions as states of ``self``.
        """
        if len(keep) != self.num_components:
            raise LengthMismatch(f"orientation has {len(keep)} entries, "
                                 f"diagram has {self.num_components} components")
        flip = {i for i, k in enumerate(keep) if k in (False, 0, -1)}
        xs, hs = [], []
        for c, x in enumerate(self.crossings):
            h = [(not hp) if self.component_of[e] in flip else hp
                 for e, hp in zip(x, self.heads[c])]
            if h[0]:
                xs.append(x)
                hs.append(tuple(h))
            else:  # under-strand reversed: rotate so position 0 is incoming
                xs.append((x[2], x[3], x[0], x[1]))
                hs.append((h[2], h[3], h[0], h[1]))
        return LinkDiagram(tuple(xs), tuple(hs), self.loops)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "crossings": [list(x) for x in self.crossings],
            "signs": list(self.signs),
            "components": [list(c) for c in self.components],
            "loops": list(self.loops),
        }

    def pd_text(self) -> str:
        parts = ["X[%d,%d,%d,%d]" % x for x in self.crossings]
        parts += ["O"] * len(self.loops)
        return " ".join(parts)


@dataclass(frozen=True)
class CrossinglessDiagram:
    circles: tuple  # each circle is a sorted tuple of edge labels
    state: tuple

    @property
    def r(self) -> int:
        return len(self.circles)


@dataclass(frozen=True)
class ABLabeling:
    labels: tuple  # 'a' or 'b' per Seifert circle
    orientation: tuple
    state: tuple
    circles: tuple


# parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*,?\s*(?:X\[([^\]]*)\]|O(?:\[\s*\])?)")


def parse_pd(text: str) -> LinkDiagram:
    """Parse ``X[a,b,c,d] ...`` text (``O`` for a free loop) or a JSON array."""
    s = text.strip()
    if s.startswith("["):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise MalformedPD(str(exc)) from None
        if not isinstance(data, list):
            raise MalformedPD("JSON input must be an array of arrays")
        crossings, nloops = [], 0
        for item in data:
            if not isinstance(item, list):
                raise MalformedPD(f"not an array: {item!r}")
            if len(item) == 0:
                nloops += 1
            else:
                crossings.append(_crossing(item))
        return _assemble(crossings, nloops)
    if s.startswith("PD[") and s.endswith("]"):
        s = s[3:-1]
    crossings, nloops, pos = [], 0, 0
    while pos < len(s):
        if not s[pos:].strip(" \t\r\n,"):
            break
        m = _TOKEN.match(s, pos)
        if m is None or m.end() == pos:
            raise MalformedPD(f"unexpected text at offset {pos}: {s[pos:pos + 20]!r}")
        if m.group(1) is None:
            nloops += 1
        else:
            crossings.append(_crossing(m.group(1).split(",")))
        pos = m.end()
    return _assemble(crossings, nloops)


def _crossing(values) -> tuple:
    if len(values) != 4:
        raise MalformedPD(f"crossing needs 4 labels, got {len(values)}")
    out = []
    for v in values:
        if isinstance(v, bool):
            raise MalformedPD(f"non-integer label {v!r}")
        try:
            iv = int(str(v).strip())
        except ValueError:
            raise MalformedPD(f"non-integer label {v!r}") from None
        if iv <= 0:
            raise MalformedPD(f"labels must be positive, got {iv}")
        out.append(iv)
    return tuple(out)


def _assemble(crossings, nloops) -> LinkDiagram:
    top = max((e for x in crossings for e in x), default=0)
    return LinkDiagram.build(crossings, range(top + 1, top + 1 + nloops))


def _check_edges(crossings, loops) -> None:
    count: dict = {}
    for x in crossings:
        for e in x:
            count[e] = count.get(e, 0) + 1
    bad = sorted(e for e, k in count.items() if k != 2)
    if bad:
        raise InconsistentEdges(f"labels not appearing exactly twice: {bad}")
    if set(loops) & set(count) or len(set(loops)) != len(loops):
        raise InconsistentEdges("free-loop labels collide with crossing edges")


def _check_heads(crossings, heads) -> None:
    occ: dict = {}
    for c, x in enumerate(crossings):
        if not heads[c][0] or heads[c][2] or heads[c][1] == heads[c][3]:
            raise NonOrientable(f"crossing {c} has inconsistent strand directions")
        for p, e in enumerate(x):
            occ.setdefault(e, []).append(heads[c][p])
    for e, hs in occ.items():
        if sorted(hs) != [False, True]:
            raise NonOrientable(f"edge {e} is not directed consistently")


def _infer_heads(crossings) -> tuple:
    occ: dict = {}
    for c, x in enumerate(crossings):
        for p, e in enumerate(x):
            occ.setdefault(e, []).append((c, p))
    role: dict = {}
    queue: list = []

    def assign(o, val):
        old = role.get(o)
        if old is None:
            role[o] = val
            queue.append(o)
        elif old != val:
            raise NonOrientable(f"edge {crossings[o[0]][o[1]]} cannot be oriented")

    def propagate():
        while queue:
            c, p = queue.pop()
            val = role[(c, p)]
            assign((c, (p + 2) % 4), not val)
            a, b = occ[crossings[c][p]]
            assign(b if a == (c, p) else a, not val)

    for c in range(len(crossings)):
        assign((c, 0), True)
        assign((c, 2), False)
    propagate()
    # components that only pass over: follow increasing edge numbering
    while len(role) < 4 * len(crossings):
        e = min(crossings[c][p] for c in range(len(crossings)) for p in range(4)
                if (c, p) not in role)
        o1, o2 = occ[e]
        c, p = o2
        choice = o2 if crossings[c][(p + 2) % 4] == e + 1 else o1
        assign(choice, True)
        propagate()
    return tuple(tuple(role[(c, p)] for p in range(4)) for c in range(len(crossings)))


# resolutions --------------------------------------------------------------

def all_zero(d: LinkDiagram) -> State:
    return (0,) * d.n


def resolve(d: LinkDiagram, u: Sequence[int]) -> CrossinglessDiagram:
    """Circles of the resolution ``D(u)``, ordered by smallest edge label."""
    u = tuple(u)
    if len(u) != d.n:
        raise LengthMismatch(f"state has length {len(u)}, diagram has {d.n} crossings")
    return CrossinglessDiagram(circles_of(d.crossings, u, d.loops), u)


def circles_of(crossings, u, loops=()) -> tuple:
    uf = UnionFind()
    for x, bit in zip(crossings, u):
        for p, q in SMOOTHING[bit]:
            uf.union(x[p], x[q])
    circles = [tuple(sorted(s)) for s in uf.to_sets()]
    circles.extend((lp,) for lp in loops)
    circles.sort(key=lambda c: c[0])
    return tuple(circles)


def seifert_state(d: LinkDiagram) -> State:
    return tuple(0 if s > 0 else 1 for s in d.signs)


def linking_number(d: LinkDiagram, i: int, j: int) -> int:
    k = d.num_components
    if not (0 <= i < k and 0 <= j < k):
        raise IndexOutOfRange(f"component index out of range 0..{k - 1}")
    if i == j:
        raise SameComponent("linking number needs two distinct components")
    total = 0
    for x, s in zip(d.crossings, d.signs):
        pair = {d.component_of[x[0]], d.component_of[x[1]]}
        if pair == {i, j}:
            total += s
    return total // 2


# planar structure ---------------------------------------------------------

def planar_faces(d: LinkDiagram) -> dict:
    """Map each corner ``(c, p)`` (between positions p and p+1) to a face id.

    Raises :class:`EmbeddingFailure` when the rotation system does not
    describe a planar diagram on each connected piece.
    """
    uf = UnionFind()
    for c in range(d.n):
        for p in range(4):
            uf.union((c, p), d.other_end(c, (p + 1) % 4))
    face_of = {}
    for fid, corners in enumerate(sorted(sorted(s) for s in uf.to_sets())):
        for corner in corners:
            face_of[corner] = fid
    for piece in _pieces(d):
        faces = {face_of[(c, p)] for c in piece for p in range(4)}
        if len(faces) != len(piece) + 2:
            raise EmbeddingFailure(
                f"crossings {sorted(piece)} span {len(faces)} faces, "
                f"a planar diagram needs {len(piece) + 2}")
    return face_of


def _pieces(d: LinkDiagram) -> list:
    uf = UnionFind(range(d.n))
    for e, occ in d.occurrences.items():
        uf.union(occ[0][0], occ[1][0])
    return sorted((sorted(s) for s in uf.to_sets()), key=min) if d.n else []


def ab_labeling(d: LinkDiagram, o: Sequence | None = None) -> ABLabeling:
    """Checkerboard a/b labels of the Seifert circles of ``d`` under ``o``.

    ``o`` holds one entry per component; falsy or -1 reverses it.  The
    unbounded face of each connected piece is the face to the right of the
    piece's highest-numbered edge (in the given orientation of ``d``);
    pieces and free loops sit side by side in the unbounded region.
    """
    if o is None:
        o = (1,) * d.num_components
    o = tuple(o)
    do = d.reorient(o)
    state = seifert_state(do)
    circles = circles_of(d.crossings, state, d.loops)
    face_of = planar_faces(d)

    flip = {i for i, k in enumerate(o) if k in (False, 0, -1)}

    def head_in_d(e):
        c, p = d.head_of(e)
        return (c, p) if d.component_of[e] not in flip else d.other_end(c, p)

    regions = UnionFind()
    for c, bit in enumerate(state):
        if bit == 0:
            regions.union(("f", face_of[(c, 0)]), ("f", face_of[(c, 2)]))
        else:
            regions.union(("f", face_of[(c, 1)]), ("f", face_of[(c, 3)]))
    outer = "outer"
    regions.union(outer, outer)
    for piece in _pieces(d):
        top = max(d.crossings[c][p] for c in piece for p in range(4))
        c, p = d.head_of(top)
        regions.union(outer, ("f", face_of[(c, p)]))

    sides = []
    for circ in circles:
        e = circ[0]
        if e in d.loops:
            inside = ("loop", e)
            regions.union(inside, inside)
            ccw = d.component_of[e] not in flip
            sides.append((inside, outer) if ccw else (outer, inside))
            continue
        c, p = head_in_d(e)
        sides.append((("f", face_of[(c, (p - 1) % 4)]), ("f", face_of[(c, p)])))

    # two-colour the region tree, unbounded region white
    adj: dict = {}
    for left, right in sides:
        a, b = regions[left], regions[right]
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    colour = {regions[outer]: 0}
    stack = [regions[outer]]
    while stack:
        r = stack.pop()
        for s in adj.get(r, []):
            if s not in colour:
                colour[s] = 1 - colour[r]
                stack.append(s)
            elif colour[s] == colour[r]:
                raise EmbeddingFailure("Seifert regions are not two-colourable")
    labels = tuple("a" if colour[regions[left]] == 1 else "b" for left, _ in sides)
    return ABLabeling(labels, o, state, circles)


def all_orientations(d: LinkDiagram) -> list:
    """Every orientation as a tuple of +1/-1, the given one first."""
    k = d.num_components
    out = []
    for mask in range(2 ** k):
        out.append(tuple(-1 if (mask >> i) & 1 else 1 for i in range(k)))
    return out


def statistics(d: LinkDiagram) -> dict:
    return {
        "crossings": d.n,
        "components": d.num_components,
        "n_plus": d.n_plus,
        "n_minus": d.n_minus,
        "seifert_circles": len(resolve(d, seifert_state(d)).circles),
    }
