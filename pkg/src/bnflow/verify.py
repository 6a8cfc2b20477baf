"""Invariant suites run by ``bnflow verify``.

Every suite yields :class:`Check` records.  The suites are deterministic:
random sign assignments come from a seeded generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from . import corpus
from .cobord import (
    canonical_degree_matrix,
    cobordism_map,
    is_quasi_isomorphism,
    parse_move,
    parse_moves,
    reidemeister_move,
)
from .complex import xy_complex, conjugate_matches
from .cube import (
    SignAssignment,
    all_faces,
    cube_complex,
    frame_from_sign,
    standard_frame,
    standard_sign,
    verify_frame_pair,
    verify_sign,
    vertex_coboundary,
)
from .diagram import all_orientations
from .errors import DomainError
from .flowcat import (
    bn_flow_category,
    chains_oracle_0dim,
    chains_oracle_1dim,
    cube_contract,
    cube_skeleton,
    eliminate_quantum_increasing,
    engine_census0,
    engine_census1,
    increasing_components,
    matches_bar_natan,
    xy_flow_category,
)
from .homology import (
    bar_natan_complex,
    homology,
    mirror_dual,
    predicted_canonical_degree,
    s_invariant,
    s_report,
)
from .resconf import hopf_config, ladybug_config

# known values for the bundled knots
EXPECTED_S = {
    "unknot": 0,
    "trefoil_right": 2,
    "trefoil_left": -2,
    "figure_eight": 0,
    "torus_2_5": 4,
    "torus_3_4": 6,
}

# (diagram, moves applied first, move whose chain map is checked)
MOVE_SITES = (
    ("trefoil_right", (), "r1+ e2"),
    ("trefoil_left", (), "r1- e3"),
    ("figure_eight", (), "r2 e1 e6"),
    ("figure_eight", ("r2 e1 e6",), "r2 c5 c6"),
    ("figure_eight", ("r2 e1 e6",), "r3 c1 c3 c6"),
)

# connected cobordisms from a knot to a knot
COBORDISMS = (
    ("trefoil_right", ("r1+ e2", "r1+ c4")),
    ("trefoil_right", ("cup", "saddle e1 e7")),
    ("figure_eight", ("r2 e1 e6", "r3 c1 c3 c6")),
)


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f"  {self.detail}" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.suite}: {self.name}{tail}"


def random_sign(n: int, rng: random.Random) -> SignAssignment:
    """Standard sign plus the coboundary of a random vertex cochain."""
    b = {v: rng.randint(0, 1) for v in product((0, 1), repeat=n)}
    return standard_sign(n).plus(vertex_coboundary(n, b))


def _diagrams(max_crossings):
    return corpus.all_diagrams(max_crossings)


def _knots(max_crossings):
    return {k: d for k, d in _diagrams(max_crossings).items() if k in corpus.KNOTS}


def _guard(suite, name, fn):
    try:
        ok, detail = fn()
    except DomainError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(suite, name, ok, detail)


# suites ----------------------------------------------------------------------------------

def sign_assignments(n: int = 8, **_):
    for k in range(1, n + 1):
        yield _guard("sign-assignments", f"n={k}",
                     lambda k=k: (verify_sign(standard_sign(k)), f"{len(all_faces(k, 2))} squares"))


def frame_assignments(n: int = 6, samples: int = 100, seed: int = 0, **_):
    for k in range(2, n + 1):
        yield _guard("frame-assignments", f"standard pair n={k}",
                     lambda k=k: (verify_frame_pair(standard_sign(k), standard_frame(k)),
                                  f"{len(all_faces(k, 2))} 2-faces, {len(all_faces(k, 3))} 3-faces"))
    rng = random.Random(seed)
    for k in (4, 5):
        if k > n:
            continue

        def run(k=k):
            good = 0
            for _ in range(samples):
                s = random_sign(k, rng)
                good += verify_sign(s) and verify_frame_pair(s, frame_from_sign(s))
            return good == samples, f"{good}/{samples} random sign assignments"

        yield _guard("frame-assignments", f"frame_from_sign n={k}", run)


def cube(n: int = 6, seed: int = 0, **_):
    rng = random.Random(seed)
    for k in range(1, n + 1):
        for label, s in (("standard", standard_sign(k)), ("random", random_sign(k, rng))):
            yield _guard("cube", f"acyclic n={k} {label}",
                         lambda k=k, s=s: (homology(cube_complex(k, s)).total_rank() == 0, ""))
    for k in range(1, min(n, 5) + 1):
        def run(k=k):
            cat = cube_skeleton(k)
            cat.check()
            out, side = cube_contract(cat, k)
            return (not out.grading and side == 0,
                    f"{len(cat.points)} points, {len(cat.comps)} intervals, side effects {side}")

        yield _guard("cube", f"skeleton contracts n={k}", run)


def structure(max_crossings: int | None = 6, **_):
    for name, d in _diagrams(max_crossings).items():
        def run(d=d):
            h = homology(bar_natan_complex(d), "Z")
            want = sorted(predicted_canonical_degree(d, o) for o in all_orientations(d))
            got = h.nonzero_degrees()
            return h.is_free() and got == want, f"degrees {got}"

        yield _guard("structure", name, run)


def s_invariants(max_crossings: int | None = 6, **_):
    for name, d in _knots(max_crossings).items():
        for coeffs in ("Q", "F2", "F3"):
            def run(d=d, coeffs=coeffs, name=name):
                rep = s_report(d, coeffs)
                ok = rep.s == EXPECTED_S[name] and rep.s_max - rep.s_min == 2
                return ok, f"s={rep.s} span={rep.s_max - rep.s_min}"

            yield _guard("s-invariants", f"{name} over {coeffs}", run)


def basis_change(max_crossings: int | None = 6, **_):
    for name, d in _diagrams(max_crossings).items():
        yield _guard("basis-change", name,
                     lambda d=d: (conjugate_matches(xy_complex(d), bar_natan_complex(d)), ""))


def oracles(max_crossings: int | None = 6, **_):
    for name, d in _diagrams(min(max_crossings or 6, 6)).items():
        def run(d=d):
            xy = xy_flow_category(d)
            bn = bn_flow_category(d)
            ok0 = engine_census0(bn) == chains_oracle_0dim(xy)
            ok1 = engine_census1(bn) == chains_oracle_1dim(xy)
            ok2 = matches_bar_natan(bn, bar_natan_complex(d))
            return ok0 and ok1 and ok2, f"0-dim {ok0}, 1-dim {ok1}, Bar-Natan {ok2}"

        yield _guard("oracles", name, run)


def _census_between(cat, upper, lower):
    kinds = [cat.comps[c].kind for c in cat.moduli1(cat.by_name(upper), cat.by_name(lower))]
    return sorted(kinds)


def examples(**_):
    def ladybug():
        # after the slides the Y-labelled object is named by its 1X label
        bn = bn_flow_category(ladybug_config())
        before = _census_between(bn, "11:X", "00:1")
        after = _census_between(eliminate_quantum_increasing(bn), "11:X", "00:1")
        return len(before) == 6 and after == ["interval", "interval"], \
            f"{len(before)} components, then {after}"

    def hopf():
        # the components between the quantum-increasing pair
        bn = bn_flow_category(hopf_config())
        before = [bn.comps[c].kind for c in increasing_components(bn)]
        el = eliminate_quantum_increasing(bn)
        after = [el.comps[c].kind for c in increasing_components(el)]
        ok = before == ["interval"] * 4 and after == ["circle"]
        return ok, f"{len(before)} intervals, then {after}"

    yield _guard("examples", "ladybug", ladybug)
    yield _guard("examples", "hopf", hopf)


def elimination(max_crossings: int | None = 6, **_):
    for name, d in _diagrams(max_crossings).items():
        def run(d=d):
            el = eliminate_quantum_increasing(bn_flow_category(d))
            bad0 = [k for k in el.nonempty_pairs0() if el.qgr[k[0]] < el.qgr[k[1]]]
            bad1 = [c for c in increasing_components(el) if el.comps[c].kind != "circle"]
            return not bad0 and not bad1, f"{len(increasing_components(el))} increasing circles"

        yield _guard("elimination", name, run)


def moves(**_):
    for name, before, move in MOVE_SITES:
        def run(name=name, before=before, move=move):
            d = corpus.load(name)
            for m in before:
                d = reidemeister_move(d, parse_move(m)).diagram
            res = reidemeister_move(d, parse_move(move))
            h0 = homology(bar_natan_complex(d)).to_json()
            h1 = homology(bar_natan_complex(res.diagram)).to_json()
            same_s = s_invariant(d) == s_invariant(res.diagram) if d.num_components == 1 else True
            ok = (res.forward.is_chain_map() and res.backward.is_chain_map()
                  and is_quasi_isomorphism(res.forward) and h0 == h1 and same_s)
            return ok, f"{d.n} -> {res.diagram.n} crossings"

        yield _guard("moves", f"{name} {' / '.join(before + (move,))}", run)


def duality(max_crossings: int | None = 6, **_):
    for name, d in _diagrams(max_crossings).items():
        def run(d=d, name=name):
            mirror_dual(d)
            if name in corpus.KNOTS:
                s, sm = s_invariant(d), s_invariant(d.mirror())
                return s == -sm, f"s={s}, mirror s={sm}"
            return True, "chain isomorphism"

        yield _guard("duality", name, run)


def canonical(**_):
    for name, script in COBORDISMS:
        def run(name=name, script=script):
            cob = cobordism_map(corpus.load(name), parse_moves("\n".join(script)))
            m = canonical_degree_matrix(cob)
            ok = (abs(m[("alpha", "alpha")]) == 1 and abs(m[("beta", "beta")]) == 1
                  and m[("alpha", "beta")] == 0 and m[("beta", "alpha")] == 0)
            return ok, " ".join(f"{a[0]}{b[0]}={v}" for (a, b), v in m.items())

        yield _guard("canonical", f"{name}: {'; '.join(script)}", run)


SUITES = {
    "sign-assignments": sign_assignments,
    "frame-assignments": frame_assignments,
    "cube": cube,
    "structure": structure,
    "s-invariants": s_invariants,
    "basis-change": basis_change,
    "oracles": oracles,
    "examples": examples,
    "elimination": elimination,
    "moves": moves,
    "duality": duality,
    "canonical": canonical,
}


def run_suite(name: str, n: int | None = None, max_crossings: int | None = 6):
    """Yield checks of one suite, or of every suite for ``all``."""
    names = list(SUITES) if name == "all" else [name]
    for suite in names:
        kwargs = {"max_crossings": max_crossings}
        if n is not None:
            kwargs["n"] = n
        yield from SUITES[suite](**kwargs)
