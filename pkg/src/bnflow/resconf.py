"""Resolution configurations, surgery, labelled posets and cube blocks.

A configuration is stored as a resolved PD diagram: the crossing tuples, a
state saying how each crossing is smoothed, and the subset of crossings
that still carry an arc.  Surgery along an arc flips the smoothing at its
crossing, which is exactly the embedded surgery in the plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .diagram import SMOOTHING, LinkDiagram, circles_of, parse_pd
from .errors import InvalidArc


@dataclass(frozen=True)
class ResolutionConfiguration:
    crossings: tuple
    state: tuple
    arcs: tuple  # crossing indices carrying an arc, in arc order
    loops: tuple = ()
    ids: tuple = ()  # stable identifier of each circle, aligned with ``circles``

    def __post_init__(self):
        if not self.ids:
            object.__setattr__(self, "ids", tuple(range(len(self.circles))))

    @cached_property
    def circles(self) -> tuple:
        return circles_of(self.crossings, self.state, self.loops)

    @property
    def index(self) -> int:
        return len(self.arcs)

    def circle_containing(self, edge: int) -> int:
        for k, circ in enumerate(self.circles):
            if edge in circ:
                return k
        raise KeyError(edge)

    def arc_ends(self, arc: int) -> tuple:
        """Positions in ``circles`` of the two circles an arc touches."""
        x = self.crossings[arc]
        (p, _), (q, _) = SMOOTHING[self.state[arc]]
        return self.circle_containing(x[p]), self.circle_containing(x[q])

    def components(self) -> list:
        """Groups of circle positions joined by arcs."""
        g = nx.Graph()
        g.add_nodes_from(range(len(self.circles)))
        for a in self.arcs:
            g.add_edge(*self.arc_ends(a))
        return sorted((sorted(c) for c in nx.connected_components(g)), key=min)

    def to_json(self) -> dict:
        return {
            "circles": [{"id": i, "edges": list(c)} for i, c in zip(self.ids, self.circles)],
            "arcs": [{"crossing": a, "ends": [self.ids[k] for k in self.arc_ends(a)]}
                     for a in self.arcs],
        }


def associated_config(d: LinkDiagram) -> ResolutionConfiguration:
    return ResolutionConfiguration(d.crossings, (0,) * d.n, tuple(range(d.n)), d.loops)


def surgery(c: ResolutionConfiguration, B: Iterable[int]) -> ResolutionConfiguration:
    B = set(B)
    if not B <= set(c.arcs):
        raise InvalidArc(f"arcs {sorted(B - set(c.arcs))} are not in the configuration")
    if not B:
        return c
    state = tuple(1 - s if i in B else s for i, s in enumerate(c.state))
    old = dict(zip(c.circles, c.ids))
    new_circles = circles_of(c.crossings, state, c.loops)
    kept = {old[circ] for circ in new_circles if circ in old}
    fresh = (i for i in range(len(old) + len(new_circles) + 1) if i not in kept)
    ids = tuple(old[circ] if circ in old else next(fresh) for circ in new_circles)
    arcs = tuple(a for a in c.arcs if a not in B)
    return ResolutionConfiguration(c.crossings, state, arcs, c.loops, ids)


def maximal_surgery(c: ResolutionConfiguration) -> ResolutionConfiguration:
    return surgery(c, c.arcs)


def ladybug_config() -> ResolutionConfiguration:
    """One circle with two arcs whose single surgeries each split it."""
    return associated_config(parse_pd("X[1,4,2,3] X[2,4,1,3]"))


def hopf_config() -> ResolutionConfiguration:
    """Two circles joined by two arcs, as for a two-crossing Hopf diagram."""
    return associated_config(parse_pd("X[1,3,2,4] X[3,1,4,2]"))


# labelled configurations and relations -----------------------------------

@dataclass(frozen=True)
class LabeledConfiguration:
    config: ResolutionConfiguration
    labels: tuple  # aligned with config.circles

    @property
    def state(self) -> tuple:
        return self.config.state


@dataclass(frozen=True)
class BasicRelation:
    """Allowed label changes under one merge or one split."""

    labels: tuple
    merge: Mapping  # (l1, l2) -> set of (l,)
    split: Mapping  # (l,) -> set of (l1, l2)


KHOVANOV = BasicRelation(
    labels=("1", "X"),
    merge={("1", "1"): {("1",)}, ("1", "X"): {("X",)}, ("X", "1"): {("X",)},
           ("X", "X"): set()},
    split={("1",): {("1", "X"), ("X", "1")}, ("X",): {("X", "X")}},
)

XY = BasicRelation(
    labels=("X", "Y"),
    merge={("X", "X"): {("X",)}, ("Y", "Y"): {("Y",)}, ("X", "Y"): set(), ("Y", "X"): set()},
    split={("X",): {("X", "X")}, ("Y",): {("Y", "Y")}},
)


def single_surgery_change(c: ResolutionConfiguration, arc: int):
    """Describe surgery along one arc as (target, removed positions, added positions)."""
    t = surgery(c, [arc])
    before, after = set(c.circles), set(t.circles)
    gone = sorted(c.circles.index(x) for x in before - after)
    born = sorted(t.circles.index(x) for x in after - before)
    return t, gone, born


def successors(obj: LabeledConfiguration, rel: BasicRelation, arc: int) -> list:
    """Labelled configurations reachable by surgery along ``arc``.

    Circles not touched by the surgery keep their labels.
    """
    c = obj.config
    t, gone, born = single_surgery_change(c, arc)
    key = tuple(obj.labels[k] for k in gone)
    table = rel.merge if len(gone) == 2 else rel.split
    outs = []
    carried = {circ: lab for circ, lab in zip(c.circles, obj.labels)}
    for new in sorted(table.get(key, set())):
        fill = dict(zip((t.circles[k] for k in born), new))
        labels = tuple(carried.get(circ, fill.get(circ)) for circ in t.circles)
        outs.append(LabeledConfiguration(t, labels))
    return outs


@dataclass
class Poset:
    objects: list
    covers: list  # pairs (lower, upper) of indices into objects
    graph: nx.DiGraph = field(repr=False, default=None)

    def index_of(self, obj: LabeledConfiguration) -> int:
        return self._lookup[(obj.config.state, obj.labels)]

    def __post_init__(self):
        self._lookup = {(o.config.state, o.labels): i for i, o in enumerate(self.objects)}
        if self.graph is None:
            self.graph = nx.DiGraph()
            self.graph.add_nodes_from(range(len(self.objects)))
            self.graph.add_edges_from(self.covers)

    def less_equal(self, i: int, j: int) -> bool:
        return i == j or nx.has_path(self.graph, i, j)


def all_surgeries(c: ResolutionConfiguration) -> list:
    """Surgeries along every subset of arcs, ordered by size then lexicographically."""
    out = []
    for k in range(c.index + 1):
        for B in combinations(c.arcs, k):
            out.append((B, surgery(c, B)))
    return out


def poset(c: ResolutionConfiguration, rel: BasicRelation) -> Poset:
    objects, lookup = [], {}
    for _, s in all_surgeries(c):
        for labels in product(rel.labels, repeat=len(s.circles)):
            lookup[(s.state, labels)] = len(objects)
            objects.append(LabeledConfiguration(s, labels))
    covers = []
    for i, obj in enumerate(objects):
        for arc in obj.config.arcs:
            for nxt in successors(obj, rel, arc):
                covers.append((i, lookup[(nxt.config.state, nxt.labels)]))
    return Poset(objects, covers)


@dataclass(frozen=True)
class DecoratedConfiguration:
    config: ResolutionConfiguration
    y: tuple  # labels on config.circles
    x: tuple  # labels on maximal_surgery(config).circles


def admissible(dec: DecoratedConfiguration) -> bool:
    """XY-admissibility: labels constant on each connected piece, before and after."""
    c = dec.config
    top = maximal_surgery(c)
    circle_piece = {}
    for n, comp in enumerate(c.components()):
        for k in comp:
            circle_piece[c.circles[k]] = n
    piece_label: dict = {}
    for circ, lab in zip(c.circles, dec.y):
        if piece_label.setdefault(circle_piece[circ], lab) != lab:
            return False
    for circ, lab in zip(top.circles, dec.x):
        piece = circle_piece[_piece_representative(c, circ)]
        if piece_label.setdefault(piece, lab) != lab:
            return False
    return True


def _piece_representative(c: ResolutionConfiguration, circ: tuple) -> tuple:
    return c.circles[c.circle_containing(circ[0])]


# cube decomposition -------------------------------------------------------

@dataclass(frozen=True)
class CubeBlock:
    min_object: LabeledConfiguration
    max_object: LabeledConfiguration
    k: int
    directions: tuple  # arcs surgered inside the block, in arc order
    vertices: Mapping  # bits over ``directions`` -> LabeledConfiguration

    def vertex_embedding(self, v: Sequence[int]) -> tuple:
        """State in the ambient cube for local vertex ``v``."""
        u = list(self.min_object.state)
        for bit, a in zip(v, self.directions):
            if bit:
                u[a] = 1 - u[a]
        return tuple(u)


def cube_decomposition(c: ResolutionConfiguration, P: Poset | None = None) -> list:
    """Blocks of the XY poset; each is checked to be a cube poset."""
    if P is None:
        P = poset(c, XY)
    und = P.graph.to_undirected()
    blocks = []
    for comp in nx.connected_components(und):
        blocks.append(_as_cube(P, sorted(comp)))
    blocks.sort(key=lambda b: (b.min_object.state, b.min_object.labels))
    return blocks


def _as_cube(P: Poset, comp: list) -> CubeBlock:
    sub = P.graph.subgraph(comp)
    mins = [i for i in comp if sub.in_degree(i) == 0]
    maxs = [i for i in comp if sub.out_degree(i) == 0]
    if len(mins) != 1 or len(maxs) != 1:
        raise ValueError("poset block does not have a unique minimum and maximum")
    lo, hi = P.objects[mins[0]], P.objects[maxs[0]]
    dirs = tuple(a for a in range(len(lo.state)) if lo.state[a] != hi.state[a])
    vertices = {}
    for i in comp:
        o = P.objects[i]
        v = tuple(int(o.state[a] != lo.state[a]) for a in dirs)
        if v in vertices:
            raise ValueError("poset block has two objects over one cube vertex")
        vertices[v] = o
    if len(vertices) != 2 ** len(dirs):
        raise ValueError("poset block is not a full cube")
    for i, j in sub.edges:
        a, b = P.objects[i].state, P.objects[j].state
        if sum(x != y for x, y in zip(a, b)) != 1:
            raise ValueError("cover relation of relative index other than one")
    return CubeBlock(lo, hi, len(dirs), dirs, vertices)
