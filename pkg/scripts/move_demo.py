"""Walk a move script, reporting each chain map and the canonical degrees of the composite.

    python3 scripts/move_demo.py trefoil_right "r1+ e2" "r1+ c4"
    python3 scripts/move_demo.py figure_eight "r2 e1 e6" "r3 c1 c3 c6"
"""

import argparse

from bnflow import corpus
from bnflow.cobord import apply_move, canonical_degree_matrix, cobordism_map, is_quasi_isomorphism, parse_move
from bnflow.errors import NotConnectedCobordism
from bnflow.homology import bar_natan_complex, homology


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("diagram", help="bundled diagram name")
    ap.add_argument("moves", nargs="+")
    args = ap.parse_args()

    d = corpus.load(args.diagram)
    moves = [parse_move(m) for m in args.moves]
    print(f"start: {d.pd_text() or '(empty)'}")
    for m in moves:
        new, f, _, _ = apply_move(d, m)
        quasi = is_quasi_isomorphism(f) if m.kind.startswith("r") else "n/a"
        print(f"{m}: {d.n} -> {new.n} crossings, chain map {f.is_chain_map()}, "
              f"quasi-iso {quasi}, q-shift {f.qshift}")
        d = new
    print(f"end:   {d.pd_text() or '(empty)'}")
    print(f"homology degrees {homology(bar_natan_complex(d)).nonzero_degrees()}")
    cob = cobordism_map(corpus.load(args.diagram), moves)
    try:
        for (a, b), v in canonical_degree_matrix(cob).items():
            print(f"  <f[{a}], [{b}']> = {v}")
    except NotConnectedCobordism as exc:
        print(f"no canonical degrees: {exc}")


if __name__ == "__main__":
    main()
