"""Homology and s-invariant table for the bundled diagrams.

    python3 scripts/corpus_table.py [--max-crossings 8] [--coeffs Q F2 F3]
"""

import argparse
import time

from bnflow import corpus
from bnflow.complex import frobenius_spec, khovanov_complex
from bnflow.homology import bar_natan_complex, homology, s_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-crossings", type=int, default=8)
    ap.add_argument("--coeffs", nargs="+", default=["Q", "F2", "F3"])
    args = ap.parse_args()

    cols = ["diagram", "n", "H_BN degrees", "Kh(Z) rank", "Kh torsion"] + [f"s/{c}" for c in args.coeffs] + ["time"]
    print(" | ".join(cols))
    print(" | ".join("---" for _ in cols))
    for name, d in corpus.all_diagrams(args.max_crossings).items():
        t0 = time.time()
        c = bar_natan_complex(d)
        h = homology(c, "Z")
        kh = homology(khovanov_complex(d, frobenius_spec(0, 0)), "Z")
        tors = {k: list(t) for k, (_, t) in kh.groups.items() if t}
        row = [name, str(d.n), str(h.nonzero_degrees()), str(kh.total_rank()), str(tors or "-")]
        for coeffs in args.coeffs:
            row.append(str(s_report(d, coeffs, c).s) if d.num_components == 1 else "-")
        row.append(f"{time.time() - t0:.1f}s")
        print(" | ".join(row))


if __name__ == "__main__":
    main()
