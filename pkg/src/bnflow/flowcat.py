"""Framed flow categories truncated to moduli of dimension at most one.

Conventions
-----------
``M(x, y)`` is defined for ``|x| > |y|``.  A 0-dimensional moduli space is
a list of signed points; a 1-dimensional one is a list of components, each
an interval or a circle.  An interval end is a composite ``(p, q)`` with
``p`` a point of ``M(z, y)`` and ``q`` a point of ``M(x, z)``.

The associated cochain complex has ``delta(y*) = sum #M(x, y) x*``, so the
matrix entry in row ``x`` and column ``y`` is the signed count of
``M(x, y)``.

The moves (slide, cancel, Whitney trick) each have a public form returning
a new category and an in-place form prefixed with ``_`` used by batch
procedures.
"""

from __future__ import annotations

import copy as _copy
import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable

from networkx.utils import UnionFind

from .complex import GradedChainComplex, quantum_grading
from .cube import (
    FrameAssignment,
    SignAssignment,
    edge_key,
    frame_from_sign,
    standard_frame,
    standard_sign,
    verify_frame_pair,
    verify_sign,
)
from .diagram import LinkDiagram
from .errors import (
    GradingMismatch,
    IncompatiblePair,
    MalformedScript,
    NotASignAssignment,
    NotCancellable,
    NotOppositePair,
    Stuck,
)


@dataclass
class Point:
    upper: Hashable
    lower: Hashable
    sign: int


@dataclass
class Component:
    upper: Hashable
    lower: Hashable
    kind: str  # "interval" or "circle"
    ends: tuple  # two composites for an interval, () for a circle
    framing: int = 0


@dataclass
class FlowCategory1:
    grading: dict = field(default_factory=dict)
    qgr: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)
    reversed: set = field(default_factory=set)
    points: dict = field(default_factory=dict)
    comps: dict = field(default_factory=dict)
    log: list = field(default_factory=list)
    counter: int = 0
    # indices, insertion-ordered dicts used as ordered sets
    _pts_pair: dict = field(default_factory=lambda: defaultdict(dict))
    _pts_from: dict = field(default_factory=lambda: defaultdict(dict))
    _pts_to: dict = field(default_factory=lambda: defaultdict(dict))
    _cmp_pair: dict = field(default_factory=lambda: defaultdict(dict))
    _cmp_from: dict = field(default_factory=lambda: defaultdict(dict))
    _cmp_to: dict = field(default_factory=lambda: defaultdict(dict))
    _cmp_at_point: dict = field(default_factory=lambda: defaultdict(dict))

    # construction -----------------------------------------------------------

    def copy(self) -> "FlowCategory1":
        return _copy.deepcopy(self)

    def _new_id(self) -> int:
        self.counter += 1
        return self.counter

    def add_object(self, obj, grading: int, q: int | None = None, name: str | None = None):
        self.grading[obj] = grading
        if q is not None:
            self.qgr[obj] = q
        self.names[obj] = name if name is not None else str(obj)

    def add_point(self, x, y, sign: int) -> int:
        pid = self._new_id()
        self.points[pid] = Point(x, y, sign)
        self._pts_pair[(x, y)][pid] = None
        self._pts_from[x][pid] = None
        self._pts_to[y][pid] = None
        return pid

    def remove_point(self, pid: int) -> None:
        p = self.points.pop(pid)
        del self._pts_pair[(p.upper, p.lower)][pid]
        del self._pts_from[p.upper][pid]
        del self._pts_to[p.lower][pid]

    def add_component(self, x, y, kind: str, ends: tuple = (), framing: int = 0) -> int:
        cid = self._new_id()
        self.comps[cid] = Component(x, y, kind, tuple(ends), framing % 2)
        self._cmp_pair[(x, y)][cid] = None
        self._cmp_from[x][cid] = None
        self._cmp_to[y][cid] = None
        for end in ends:
            for pid in end:
                self._cmp_at_point[pid][cid] = None
        return cid

    def remove_component(self, cid: int) -> None:
        c = self.comps.pop(cid)
        del self._cmp_pair[(c.upper, c.lower)][cid]
        del self._cmp_from[c.upper][cid]
        del self._cmp_to[c.lower][cid]
        for end in c.ends:
            for pid in end:
                self._cmp_at_point[pid].pop(cid, None)

    def remove_object(self, obj) -> None:
        for cid in list(self._cmp_from.get(obj, ())) + list(self._cmp_to.get(obj, ())):
            if cid in self.comps:
                self.remove_component(cid)
        for pid in list(self._pts_from.get(obj, ())) + list(self._pts_to.get(obj, ())):
            if pid in self.points:
                self.remove_point(pid)
        del self.grading[obj]
        self.qgr.pop(obj, None)
        self.names.pop(obj, None)
        self.reversed.discard(obj)

    # queries ------------------------------------------------------------------

    @property
    def objects(self) -> list:
        return sorted(self.grading, key=lambda o: (self.grading[o], _sort_key(o)))

    def moduli0(self, x, y) -> list:
        return list(self._pts_pair.get((x, y), {}))

    def moduli1(self, x, y) -> list:
        return list(self._cmp_pair.get((x, y), {}))

    def count(self, x, y) -> int:
        return sum(self.points[p].sign for p in self._pts_pair.get((x, y), {}))

    def signs0(self, x, y) -> list:
        return sorted(self.points[p].sign for p in self._pts_pair.get((x, y), {}))

    def nonempty_pairs0(self) -> list:
        return sorted((k for k, v in self._pts_pair.items() if v),
                      key=lambda k: (_sort_key(k[0]), _sort_key(k[1])))

    def nonempty_pairs1(self) -> list:
        return sorted((k for k, v in self._cmp_pair.items() if v),
                      key=lambda k: (_sort_key(k[0]), _sort_key(k[1])))

    def by_name(self, name: str):
        for o, nm in self.names.items():
            if nm == name:
                return o
        raise KeyError(name)

    # invariants ---------------------------------------------------------------

    def composites(self) -> dict:
        """(x, y) -> Counter of composites (p, q) through intermediate objects."""
        out: dict = defaultdict(Counter)
        for qid, q in self.points.items():
            for pid in self._pts_from.get(q.lower, ()):
                p = self.points[pid]
                out[(q.upper, p.lower)][(pid, qid)] += 1
        return out

    def check(self) -> None:
        """Boundary matching and the chain condition; raises Stuck on failure."""
        comp = self.composites()
        ends: dict = defaultdict(Counter)
        for cid, c in self.comps.items():
            if c.kind == "interval":
                if len(c.ends) != 2:
                    raise Stuck(f"interval {cid} does not have two ends")
                s = [self.points[a].sign * self.points[b].sign for a, b in c.ends]
                if s[0] != -s[1]:
                    raise Stuck(f"interval {cid} has ends of equal sign")
                for e in c.ends:
                    ends[(c.upper, c.lower)][e] += 1
            elif c.ends:
                raise Stuck(f"circle {cid} has ends")
        for key in set(comp) | set(ends):
            if comp.get(key, Counter()) != ends.get(key, Counter()):
                raise Stuck(f"boundary of M{self._pair_name(key)} does not match composites")
        for key, cnt in comp.items():
            total = sum(self.points[a].sign * self.points[b].sign * m for (a, b), m in cnt.items())
            if total:
                raise Stuck(f"chain condition fails on M{self._pair_name(key)}")

    def is_valid(self) -> bool:
        try:
            self.check()
        except Stuck:
            return False
        return True

    def _pair_name(self, key) -> str:
        return f"({self.names.get(key[0], key[0])}, {self.names.get(key[1], key[1])})"

    # complexes ------------------------------------------------------------------

    def associated_complex(self, reversal: bool = False) -> GradedChainComplex:
        """Cochain complex; with ``reversal`` objects flagged reversed are negated."""
        gens: dict = {}
        for o in self.objects:
            gens.setdefault(self.grading[o], []).append(o)
        idx = {o: i for lst in gens.values() for i, o in enumerate(lst)}
        d: dict = {}
        for (x, y), pts in self._pts_pair.items():
            if not pts:
                continue
            v = sum(self.points[p].sign for p in pts)
            if reversal and (x in self.reversed) != (y in self.reversed):
                v = -v
            if v:
                d.setdefault(self.grading[y], {})[(idx[x], idx[y])] = v
        return GradedChainComplex(gens, d, step=1, qgr=dict(self.qgr))

    # serialization -----------------------------------------------------------------

    def to_json(self) -> dict:
        name = self.names
        return {
            "schema": 1,
            "objects": [{"name": name[o], "grading": self.grading[o], "qgr": self.qgr.get(o),
                         "reversed": o in self.reversed} for o in self.objects],
            "points": [{"id": pid, "from": name[p.upper], "to": name[p.lower], "sign": p.sign}
                       for pid, p in sorted(self.points.items())],
            "components": [{"id": cid, "from": name[c.upper], "to": name[c.lower], "kind": c.kind,
                            "ends": [list(e) for e in c.ends], "framing": c.framing}
                           for cid, c in sorted(self.comps.items())],
            "log": [list(map(str, entry)) for entry in self.log],
        }

    def census(self) -> dict:
        return {
            "objects": len(self.grading),
            "points": len(self.points),
            "intervals": sum(1 for c in self.comps.values() if c.kind == "interval"),
            "circles": sum(1 for c in self.comps.values() if c.kind == "circle"),
        }

    # moves ------------------------------------------------------------------------------

    def _slide(self, x, y, eps: int) -> None:
        if self.grading[x] != self.grading[y]:
            raise GradingMismatch("handle slides need objects of equal grading")
        if eps not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        A = list(self._pts_to.get(x, ()))  # points of M(a, x)
        B = list(self._pts_from.get(y, ()))  # points of M(y, b)
        J = list(self._cmp_to.get(x, ()))
        K = list(self._cmp_from.get(y, ()))
        P = self.points
        copyA = {p: self.add_point(P[p].upper, y, -eps * P[p].sign) for p in A}
        copyB = {q: self.add_point(x, P[q].lower, eps * P[q].sign) for q in B}
        for cid in J:
            c = self.comps[cid]
            ends = tuple((copyA[r], s) for r, s in c.ends)
            self.add_component(c.upper, y, c.kind, ends, c.framing)
        for cid in K:
            c = self.comps[cid]
            ends = tuple((r, copyB[s]) for r, s in c.ends)
            self.add_component(x, c.lower, c.kind, ends, c.framing)
        for p in A:
            for q in B:
                self.add_component(P[p].upper, P[q].lower, "interval",
                                   ((q, copyA[p]), (copyB[q], p)), 0)
        self.log.append(("slide", x, y, eps))

    def _cancel(self, x, y) -> None:
        pts = self.moduli0(x, y)
        if self.grading.get(x) is None or self.grading.get(y) is None \
                or self.grading[x] != self.grading[y] + 1 or len(pts) != 1:
            raise NotCancellable("M(x, y) must be a single point with |x| = |y| + 1")
        P = self.points
        sigma = P[pts[0]].sign
        p_ay = [p for p in self._pts_to.get(y, ()) if P[p].upper != x]
        q_xb = [q for q in self._pts_from.get(x, ()) if P[q].lower != y]
        glued = {}
        for p in p_ay:
            for q in q_xb:
                glued[(q, p)] = self.add_point(P[p].upper, P[q].lower,
                                               -sigma * P[p].sign * P[q].sign)
        pieces = []
        replaced = set()
        # old components with an end through x or y
        for pid in list(self._pts_to.get(x, ())) + list(self._pts_to.get(y, ())):
            for cid in self._cmp_at_point.get(pid, ()):
                c = self.comps[cid]
                if c.upper in (x, y) or c.lower in (x, y) or cid in replaced:
                    continue
                replaced.add(cid)
                ends = []
                for r, s in c.ends:
                    z = P[s].lower
                    if z == x:
                        ends.append(("g", ("x", r, s)))
                    elif z == y:
                        ends.append(("g", ("y", r, s)))
                    else:
                        ends.append(("n", (r, s)))
                pieces.append((c.upper, c.lower, c.kind, ends, c.framing))
        # I x p: intervals of M(x, b) times points of M(a, y)
        for cid in list(self._cmp_from.get(x, ())):
            c = self.comps[cid]
            if c.lower == y:
                continue
            for p in p_ay:
                ends = []
                for r, s in c.ends:
                    if P[s].lower == y:
                        ends.append(("g", ("y", r, p)))
                    else:
                        ends.append(("n", (r, glued[(s, p)])))
                pieces.append((P[p].upper, c.lower, c.kind, ends, c.framing))
        # q x J: points of M(x, b) times intervals of M(a, y)
        for cid in list(self._cmp_to.get(y, ())):
            c = self.comps[cid]
            if c.upper == x:
                continue
            for q in q_xb:
                ends = []
                for r, s in c.ends:
                    if P[r].upper == x:
                        ends.append(("g", ("x", q, s)))
                    else:
                        ends.append(("n", (glued[(q, r)], s)))
                pieces.append((c.upper, P[q].lower, c.kind, ends, c.framing))
        for cid in replaced:
            self.remove_component(cid)
        self.remove_object(x)
        self.remove_object(y)
        for spec in _concatenate(pieces):
            self.add_component(*spec)
        self.log.append(("cancel", x, y))

    def _whitney(self, x, y, Pid: int, Qid: int) -> None:
        P = self.points
        if Pid not in P or Qid not in P or Pid == Qid:
            raise NotOppositePair("points are not in the moduli space")
        for pid in (Pid, Qid):
            if (P[pid].upper, P[pid].lower) != (x, y):
                raise NotOppositePair("points are not in M(x, y)")
        if P[Pid].sign != -P[Qid].sign:
            raise NotOppositePair("points have equal signs")
        pieces = []
        touched = set(self._cmp_at_point.get(Pid, ())) | set(self._cmp_at_point.get(Qid, ()))
        for cid in sorted(touched):
            c = self.comps[cid]
            ends = []
            for r, s in c.ends:
                if r in (Pid, Qid) and c.lower == y:
                    ends.append(("g", ("a", s)))
                elif s in (Pid, Qid) and c.upper == x:
                    ends.append(("g", ("b", r)))
                else:
                    ends.append(("n", (r, s)))
            pieces.append((c.upper, c.lower, c.kind, ends, c.framing))
        for cid in touched:
            self.remove_component(cid)
        self.remove_point(Pid)
        self.remove_point(Qid)
        for spec in _concatenate(pieces):
            self.add_component(*spec)
        self.log.append(("whitney", x, y, Pid, Qid))


def _concatenate(pieces: list) -> list:
    """Join pieces along shared glue keys; returns component specs."""
    uf = UnionFind(range(len(pieces)))
    where: dict = defaultdict(list)
    for k, (_, _, _, ends, _) in enumerate(pieces):
        for kind, val in ends:
            if kind == "g":
                where[val].append(k)
    for key, ks in where.items():
        if len(ks) != 2:
            raise Stuck(f"gluing key {key!r} occurs {len(ks)} times")
        uf.union(ks[0], ks[1])
    groups: dict = defaultdict(list)
    for k in range(len(pieces)):
        groups[uf[k]].append(k)
    out = []
    for _, ks in sorted(groups.items(), key=lambda kv: min(kv[1])):
        ends = [val for k in ks for kind, val in pieces[k][3] if kind == "n"]
        framing = sum(pieces[k][4] for k in ks) % 2
        upper, lower = pieces[ks[0]][0], pieces[ks[0]][1]
        circle_piece = any(pieces[k][2] == "circle" for k in ks)
        if circle_piece or not ends:
            if ends:
                raise Stuck("a circle was glued to an interval")
            out.append((upper, lower, "circle", (), framing))
        elif len(ends) == 2:
            out.append((upper, lower, "interval", tuple(ends), framing))
        else:
            raise Stuck(f"glued component has {len(ends)} free ends")
    return out


def _sort_key(o):
    return (0, o) if isinstance(o, tuple) else (1, str(o))


# public moves ----------------------------------------------------------------------

def handle_slide(c: FlowCategory1, x, y, epsilon: int = 1) -> FlowCategory1:
    out = c.copy()
    out._slide(x, y, epsilon)
    out.names[x] = out.names[x] + "'"
    return out


def handle_cancel(c: FlowCategory1, x, y) -> FlowCategory1:
    out = c.copy()
    out._cancel(x, y)
    return out


def whitney_trick(c: FlowCategory1, x, y, P: int, Q: int) -> FlowCategory1:
    out = c.copy()
    out._whitney(x, y, P, Q)
    return out


def replay(initial: FlowCategory1, log: list) -> FlowCategory1:
    out = initial.copy()
    for entry in log:
        op = entry[0]
        if op == "slide":
            out._slide(entry[1], entry[2], entry[3])
        elif op == "cancel":
            out._cancel(entry[1], entry[2])
        elif op == "whitney":
            out._whitney(*entry[1:])
        else:
            raise ValueError(f"unknown move {op!r}")
    return out


def run_script(c: FlowCategory1, text: str) -> FlowCategory1:
    """Apply ``cancel x y`` / ``slide x y +1`` / ``whitney x y p q`` lines."""
    out = c.copy()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, *args = line.split()
        try:
            if op == "cancel" and len(args) == 2:
                out._cancel(out.by_name(args[0]), out.by_name(args[1]))
            elif op == "slide" and len(args) == 3:
                x = out.by_name(args[0])
                out._slide(x, out.by_name(args[1]), int(args[2]))
                out.names[x] += "'"
            elif op == "whitney" and len(args) == 4:
                out._whitney(out.by_name(args[0]), out.by_name(args[1]), int(args[2]), int(args[3]))
            else:
                raise MalformedScript(f"cannot parse move line {raw!r}")
        except KeyError as exc:
            raise MalformedScript(f"no object named {exc.args[0]!r} in line {raw!r}") from None
        except ValueError as exc:
            raise MalformedScript(f"bad number in line {raw!r}: {exc}") from None
    return out


# cube skeleton ---------------------------------------------------------------------------

def _add_cube(cat: FlowCategory1, k: int, s: SignAssignment, f: FrameAssignment, obj, grading,
              qgr=None, name=None) -> None:
    verts = list(product((0, 1), repeat=k))
    for v in verts:
        o = obj(v)
        cat.add_object(o, grading(v), None if qgr is None else qgr(v), None if name is None else name(v))
    edge_pt = {}
    for v in verts:
        for i in range(k):
            if v[i]:
                w = v[:i] + (0,) + v[i + 1:]
                edge_pt[(v, i)] = cat.add_point(obj(v), obj(w), -1 if s(v, i) else 1)
    for v in verts:
        for i in range(k):
            for j in range(i + 1, k):
                if v[i] or v[j]:
                    continue
                top = _flip(_flip(v, i), j)
                wi, wj = _flip(v, i), _flip(v, j)
                ends = ((edge_pt[(wi, i)], edge_pt[(top, j)]), (edge_pt[(wj, j)], edge_pt[(top, i)]))
                face = "".join("*" if t in (i, j) else str(b) for t, b in enumerate(v))
                cat.add_component(obj(top), obj(v), "interval", ends, f.values[face])


def _flip(v, i):
    return v[:i] + (1 - v[i],) + v[i + 1:]


def cube_skeleton(n: int, s: SignAssignment | None = None,
                  f: FrameAssignment | None = None) -> FlowCategory1:
    s = s or standard_sign(n)
    f = f or standard_frame(n)
    if s.n != n or f.n != n or not verify_sign(s) or not verify_frame_pair(s, f):
        raise IncompatiblePair("sign and frame assignments are not a compatible pair")
    cat = FlowCategory1()
    _add_cube(cat, n, s, f, obj=lambda v: v, grading=sum, name=lambda v: "".join(map(str, v)))
    return cat


def cube_contract(cat: FlowCategory1, n: int) -> tuple:
    """Cancel ((v,1), (v,0)) by decreasing |v|; returns (category, side-effect count)."""
    out = cat.copy()
    side = 0
    for v in sorted(product((0, 1), repeat=n - 1), key=lambda v: (-sum(v), v)):
        before = len(out.points) + len(out.comps)
        x, y = v + (1,), v + (0,)
        removed = len(out.moduli0(x, y))
        gone = set(out._pts_from.get(x, ())) | set(out._pts_to.get(x, ())) \
            | set(out._pts_from.get(y, ())) | set(out._pts_to.get(y, ()))
        gone_c = set(out._cmp_from.get(x, ())) | set(out._cmp_to.get(x, ())) \
            | set(out._cmp_from.get(y, ())) | set(out._cmp_to.get(y, ()))
        out._cancel(x, y)
        after = len(out.points) + len(out.comps)
        side += after - (before - len(gone) - len(gone_c))
        del removed
    return out, side


# XY and Bar-Natan categories -------------------------------------------------------------

def _diagram_data(d):
    """(configuration, n_plus, n_minus, sign assignment dimension) for a diagram or config."""
    from .resconf import ResolutionConfiguration, associated_config

    if isinstance(d, ResolutionConfiguration):
        return d, 0, 0
    return associated_config(d), d.n_plus, d.n_minus


def obj_name(u, labels) -> str:
    return "".join(map(str, u)) + ":" + "".join(labels)


def xy_flow_category(d, s: SignAssignment | None = None) -> FlowCategory1:
    """Disjoint union of cube skeletons, one per block of the XY poset."""
    from .resconf import cube_decomposition, single_surgery_change

    config, n_plus, n_minus = _diagram_data(d)
    n = len(config.state)
    s = s or standard_sign(n)
    cat = FlowCategory1()
    for block in cube_decomposition(config):
        k, dirs = block.k, block.directions
        vals = {}
        for v in product((0, 1), repeat=k):
            for a in range(k):
                if v[a]:
                    continue
                u = block.vertex_embedding(v)
                obj = block.vertices[v]
                _, gone, _ = single_surgery_change(obj.config, dirs[a])
                t = int(len(gone) == 2 and all(obj.labels[g] == "Y" for g in gone))
                vals[edge_key(v, a)] = (s.values[edge_key(u, dirs[a])] + t) % 2
        s_block = SignAssignment(k, vals)
        if not verify_sign(s_block):
            raise NotASignAssignment("adjusted sign on a block is not a sign assignment")
        f_block = frame_from_sign(s_block)

        def obj(v, block=block):
            o = block.vertices[v]
            return (o.state, o.labels)

        def grading(v, block=block):
            return sum(block.vertex_embedding(v)) - n_minus

        def qgr(v, block=block):
            o = block.vertices[v]
            return quantum_grading((o.state, _to_1x(o.labels)), n_plus, n_minus)

        _add_cube(cat, k, s_block, f_block, obj, grading, qgr, name=lambda v, obj=obj: obj_name(*obj(v)))
    return cat


def _to_1x(labels) -> tuple:
    return tuple("X" if x in ("X", "X'") else "1" for x in labels)


def cubic_handle_slides(c: FlowCategory1, d=None) -> FlowCategory1:
    """Positive slides of every X-labelled object over its Y neighbour, vertex by vertex.

    Afterwards objects are renamed to their 1X labels (X' -> X, Y -> 1) and
    those with an odd number of ``1`` labels are flagged as reversed.
    """
    out = c.copy()
    by_state: dict = defaultdict(list)
    for o in out.grading:
        by_state[o[0]].append(o)
    for u in sorted(by_state):
        r = len(by_state[u][0][1])
        for i in range(r):
            for v in product((0, 1), repeat=r):
                if v[i]:
                    continue
                w = v[:i] + (1,) + v[i + 1:]
                x = (u, tuple("XY"[b] for b in v))
                y = (u, tuple("XY"[b] for b in w))
                out._slide(x, y, 1)
    for o in list(out.grading):
        u, labels = o
        out.names[o] = obj_name(u, _to_1x(labels))
        if sum(1 for x in labels if x == "Y") % 2:
            out.reversed.add(o)
    return out


def bn_flow_category(d, s: SignAssignment | None = None) -> FlowCategory1:
    return cubic_handle_slides(xy_flow_category(d, s), d)


def as_1x(o) -> tuple:
    """Bar-Natan generator key of an XY object after cubic slides."""
    return (o[0], _to_1x(o[1]))


def matches_bar_natan(cat: FlowCategory1, bn: GradedChainComplex) -> bool:
    """Entrywise comparison with the Bar-Natan complex under X' -> X, Y -> -1."""
    comp = cat.associated_complex(reversal=True)
    idx = {k: {g: i for i, g in enumerate(lst)} for k, lst in bn.gens.items()}
    mine = {}
    for k, ent in comp.d.items():
        src, tgt = comp.gens[k], comp.gens[k + 1]
        for (i, j), v in ent.items():
            x, y = as_1x(tgt[i]), as_1x(src[j])
            mine[(k, idx[k + 1][x], idx[k][y])] = v
    theirs = {(k, i, j): v for k, ent in bn.d.items() for (i, j), v in ent.items()}
    if set(comp.gens) != set(bn.gens):
        return False
    return mine == theirs


# chain oracles ------------------------------------------------------------------------------

def _below(labels) -> list:
    """Label vectors obtained by turning some Y into X (horizontal predecessors)."""
    ys = [i for i, x in enumerate(labels) if x == "Y"]
    out = []
    for mask in product((0, 1), repeat=len(ys)):
        lab = list(labels)
        for i, m in zip(ys, mask):
            if m:
                lab[i] = "X"
        out.append((tuple(lab), sum(mask)))
    return out


def _above(labels) -> list:
    xs = [i for i, x in enumerate(labels) if x == "X"]
    out = []
    for mask in product((0, 1), repeat=len(xs)):
        lab = list(labels)
        for i, m in zip(xs, mask):
            if m:
                lab[i] = "Y"
        out.append((tuple(lab), sum(mask)))
    return out


def chains_oracle_0dim(cxy: FlowCategory1) -> dict:
    """(x, y) -> sorted signs predicted for the slid category."""
    out: dict = defaultdict(list)
    for p in cxy.points.values():
        (u1, w1), (u0, w0) = p.upper, p.lower
        for lab_x, _ in _below(w1):
            for lab_y, l2 in _above(w0):
                out[((u1, lab_x), (u0, lab_y))].append((-1) ** l2 * p.sign)
    return {k: sorted(v) for k, v in out.items()}


def chains_oracle_1dim(cxy: FlowCategory1) -> dict:
    """(x, y) -> number of 1-dimensional components predicted after the slides."""
    out: Counter = Counter()
    for c in cxy.comps.values():
        (u1, w1), (u0, w0) = c.upper, c.lower
        for lab_x, _ in _below(w1):
            for lab_y, _ in _above(w0):
                out[((u1, lab_x), (u0, lab_y))] += 1
    # two points joined by a strictly increasing horizontal arrow
    by_upper_state: dict = defaultdict(list)
    for p in cxy.points.values():
        by_upper_state[p.upper[0]].append(p)
    for p1 in cxy.points.values():
        (u1, w1), (um, wm) = p1.upper, p1.lower
        for p2 in by_upper_state.get(um, ()):
            wx2 = p2.upper[1]
            if wx2 == wm or not _leq(wm, wx2):
                continue
            l = sum(a != b for a, b in zip(wm, wx2))
            (u0, w0) = p2.lower
            for lab_x, _ in _below(w1):
                for lab_y, _ in _above(w0):
                    out[((u1, lab_x), (u0, lab_y))] += 2 ** (l - 1)
    return dict(out)


def _leq(a, b) -> bool:
    """Horizontal order: b is a with some X turned into Y."""
    return all(x == y or (x == "X" and y == "Y") for x, y in zip(a, b))


def engine_census0(cat: FlowCategory1) -> dict:
    return {k: cat.signs0(*k) for k in cat.nonempty_pairs0()}


def engine_census1(cat: FlowCategory1) -> dict:
    return {k: len(cat.moduli1(*k)) for k in cat.nonempty_pairs1()}


# quantum elimination ---------------------------------------------------------------------

def eliminate_quantum_increasing(c: FlowCategory1) -> FlowCategory1:
    """Whitney-cancel every opposite-sign pair of points, pair by pair.

    Raises :class:`Stuck` when a point between quantum-increasing objects
    survives.
    """
    out = c.copy()
    for key in out.nonempty_pairs0():
        x, y = key
        while True:
            pts = out.moduli0(x, y)
            pos = [p for p in pts if out.points[p].sign > 0]
            neg = [p for p in pts if out.points[p].sign < 0]
            if not pos or not neg:
                break
            first = min(pts)
            other = min(neg) if out.points[first].sign > 0 else min(pos)
            out._whitney(x, y, first, other)
    for x, y in out.nonempty_pairs0():
        if out.qgr and out.qgr[x] < out.qgr[y]:
            raise Stuck(f"quantum-increasing point survives in M{out._pair_name((x, y))}")
    return out


def increasing_components(c: FlowCategory1) -> list:
    """Components between objects of relative grading 2 with gr_q(x) < gr_q(y)."""
    out = []
    for cid, comp in c.comps.items():
        if c.grading[comp.upper] - c.grading[comp.lower] == 2 and c.qgr[comp.upper] < c.qgr[comp.lower]:
            out.append(cid)
    return out


def canonical_objects(d: LinkDiagram) -> list:
    """XY objects that are the a/b labelled Seifert states (a = X, b = Y)."""
    from .diagram import ab_labeling, all_orientations

    out = []
    for o in all_orientations(d):
        lab = ab_labeling(d, o)
        out.append((lab.state, tuple("X" if x == "a" else "Y" for x in lab.labels)))
    return out
