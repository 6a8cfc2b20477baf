"""Command-line front end.

Exit status is 0 on success, 1 when the input is well formed but the
computation fails (bad PD code, invalid move site, failed verification),
and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .cobord import (
    canonical_degree_matrix,
    cobordism_map,
    is_quasi_isomorphism,
    morse_map,
    parse_moves,
    reidemeister_move,
)
from .complex import frobenius_spec, khovanov_complex
from .cube import SignAssignment, verify_sign
from .diagram import LinkDiagram, parse_pd
from .errors import DimensionMismatch, DomainError, NotASignAssignment
from .flowcat import (
    bn_flow_category,
    eliminate_quantum_increasing,
    run_script,
    xy_flow_category,
)
from .homology import bar_natan_complex, bigraded_homology, canonical_cycles, homology, s_report
from .verify import SUITES, run_suite

COEFFS = ("Z", "Q", "F2", "F3")


class UsageError(Exception):
    pass


# inputs -------------------------------------------------------------------------------------

def load_diagram(spec: str) -> LinkDiagram:
    """A bundled diagram name, a PD code, or ``@path`` to a file holding one."""
    text = spec.strip()
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc.strerror}") from None
    name = corpus.ALIASES.get(text, text)
    if name in corpus.NAMES:
        return corpus.load(name)
    return parse_pd(text)


def load_sign(option: str | None, d: LinkDiagram) -> SignAssignment | None:
    if option in (None, "standard"):
        return None
    if not option.startswith("file:"):
        raise UsageError("--sign must be 'standard' or 'file:<path>'")
    path = Path(option[5:])
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise NotASignAssignment(f"{path} is not JSON: {exc}") from None
    values = {str(k): int(v) % 2 for k, v in raw.items()}
    s = SignAssignment(d.n, values)
    lengths = {len(k) for k in values}
    if lengths and lengths != {d.n}:
        raise DimensionMismatch(f"sign assignment keys have length {sorted(lengths)}, diagram has {d.n} crossings")
    if not verify_sign(s):
        raise NotASignAssignment("delta s is not identically 1")
    return s


def read_script(path: str | None) -> str:
    if path is None:
        raise UsageError("this command needs --script")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# commands -------------------------------------------------------------------------------------

def cmd_complex(args) -> object:
    d = load_diagram(args.pd)
    s = load_sign(args.sign, d)
    if args.theory == "khovanov":
        c = khovanov_complex(d, frobenius_spec(0, 0), s)
    else:
        c = bar_natan_complex(d, s)
    return c.to_text() if args.text else c.to_json()


def cmd_homology(args) -> object:
    d = load_diagram(args.pd)
    s = load_sign(args.sign, d)
    c = bar_natan_complex(d, s) if args.theory == "bar-natan" else khovanov_complex(d, frobenius_spec(0, 0), s)
    h = bigraded_homology(c, args.coeffs) if args.bigraded else homology(c, args.coeffs)
    return h.to_text() if args.text else h.to_json()


def cmd_s(args) -> object:
    d = load_diagram(args.pd)
    coeffs = "Q" if args.coeffs == "Z" else args.coeffs
    rep = s_report(d, coeffs, bar_natan_complex(d, load_sign(args.sign, d)))
    if not args.json:
        return f"{rep.s}\n"
    return {"schema": 1, "coeffs": rep.coeffs, "s": rep.s, "s_min": rep.s_min, "s_max": rep.s_max,
            "alpha_grading": rep.alpha_grading, "beta_grading": rep.beta_grading}


def cmd_canonical(args) -> object:
    d = load_diagram(args.pd)
    if args.script is None:
        c = bar_natan_complex(d)
        return {"schema": 1, "classes": [
            {"orientation": list(k.orientation), "degree": k.degree, "state": "".join(map(str, k.state)),
             "labels": "".join(k.labels), "qgr": k.qgr}
            for k in canonical_cycles(d, c)]}
    cob = cobordism_map(d, parse_moves(read_script(args.script)))
    m = canonical_degree_matrix(cob)
    return {"schema": 1, "target": cob.target.pd_text(), "euler": cob.euler,
            "degrees": [{"source": a, "target": b, "degree": str(v)} for (a, b), v in m.items()]}


def cmd_flowcat(args) -> object:
    d = load_diagram(args.pd)
    s = load_sign(args.sign, d)
    cat = xy_flow_category(d, s) if args.stage == "xy" else bn_flow_category(d, s)
    if args.stage == "eliminated":
        cat = eliminate_quantum_increasing(cat)
    if args.script is not None:
        cat = run_script(cat, read_script(args.script))
    cat.check()
    if args.census:
        return {"schema": 1, **cat.census()}
    return cat.to_json()


def cmd_moves(args) -> object:
    d = load_diagram(args.pd)
    steps = []
    for m in parse_moves(read_script(args.script)):
        if m.kind.startswith("r"):
            res = reidemeister_move(d, m)
            f, new = res.forward, res.diagram
            quasi = is_quasi_isomorphism(f)
        else:
            new, f = morse_map(d, m)
            quasi = None
        steps.append({"move": str(m), "diagram": new.pd_text(), "chain_map": f.is_chain_map(),
                      "quasi_isomorphism": quasi, "qshift": f.qshift})
        d = new
    return {"schema": 1, "steps": steps, "final": d.pd_text(),
            "homology": homology(bar_natan_complex(d), args.coeffs).to_json()}


def cmd_verify(args) -> tuple:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    lines, failed = [], 0
    for check in run_suite(args.suite, n=args.n, max_crossings=args.max_crossings):
        lines.append(check.line())
        failed += not check.ok
    lines.append(f"{'PASS' if not failed else 'FAIL'} {len(lines)} checks, {failed} failed")
    return "\n".join(lines) + "\n", 1 if failed else 0


def cmd_export(args) -> object:
    d = load_diagram(args.pd)
    s = load_sign(args.sign, d)
    c = bar_natan_complex(d, s)
    out = {"schema": 1, "diagram": d.to_json(), "complex": c.to_json(),
           "homology": homology(c, args.coeffs).to_json()}
    if d.num_components == 1:
        rep = s_report(d, "Q" if args.coeffs == "Z" else args.coeffs, c)
        out["s"] = rep.s
    return out


COMMANDS = {
    "complex": cmd_complex,
    "homology": cmd_homology,
    "s": cmd_s,
    "canonical": cmd_canonical,
    "flowcat": cmd_flowcat,
    "moves": cmd_moves,
    "verify": cmd_verify,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bnflow", description="Bar-Natan complexes, flow categories and move maps.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, pd=True):
        if pd:
            sp.add_argument("--pd", required=True,
                            help="PD code, bundled diagram name, or @file; an empty string is the empty link")
        sp.add_argument("--coeffs", choices=COEFFS, default="Z")
        sp.add_argument("--sign", default="standard", help="standard or file:<path> (JSON edge -> 0/1)")
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = common(sub.add_parser("complex", help="print the chain complex"))
    sp.add_argument("--theory", choices=("bar-natan", "khovanov"), default="bar-natan")
    sp.add_argument("--text", action="store_true", help="plain listing instead of JSON")

    sp = common(sub.add_parser("homology", help="homology groups"))
    sp.add_argument("--theory", choices=("bar-natan", "khovanov"), default="bar-natan")
    sp.add_argument("--bigraded", action="store_true")
    sp.add_argument("--text", action="store_true")

    sp = common(sub.add_parser("s", help="s-invariant of a knot"))
    sp.add_argument("--json", action="store_true", help="full report")

    sp = common(sub.add_parser("canonical", help="canonical classes, or degrees under a cobordism"))
    sp.add_argument("--script", help="move script describing a cobordism")

    sp = common(sub.add_parser("flowcat", help="flow category of a diagram"))
    sp.add_argument("--stage", choices=("xy", "1x", "eliminated"), default="1x")
    sp.add_argument("--script", help="flow-category move script (cancel/slide/whitney)")
    sp.add_argument("--census", action="store_true", help="only count objects and moduli")

    sp = common(sub.add_parser("moves", help="apply a Reidemeister/Morse move script"))
    sp.add_argument("--script", required=True)

    sp = common(sub.add_parser("verify", help="run invariant suites"), pd=False)
    sp.add_argument("--suite", default="all", help="one of: all, " + ", ".join(SUITES))
    sp.add_argument("--n", type=int, help="cube dimension for the cube suites")
    sp.add_argument("--max-crossings", type=int, default=6)

    common(sub.add_parser("export", help="diagram, complex, homology and s as one JSON document"))
    return p


def _render(result) -> str:
    if isinstance(result, str):
        return result
    return json.dumps(result, indent=2, sort_keys=False) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args)
        code = 0
        if isinstance(result, tuple):
            result, code = result
        text = _render(result)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return code
    except UsageError as exc:
        print(f"bnflow: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"bnflow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
