"""Bigraded Khovanov and Bar-Natan tables (homological degree x quantum degree).

    python3 scripts/kh_tables.py trefoil_right figure_eight --coeffs Q
"""

import argparse

from bnflow import corpus
from bnflow.complex import frobenius_spec, khovanov_complex
from bnflow.homology import bigraded_homology


def table(h):
    degs = sorted({k for k, _ in h.qgradings})
    qs = sorted({q for _, q in h.qgradings}, reverse=True)
    lines = ["q\\i " + "".join(f"{k:>4}" for k in degs)]
    for q in qs:
        cells = "".join(f"{h.qgradings.get((k, q), 0) or '.':>4}" for k in degs)
        lines.append(f"{q:>3} " + cells)
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="+")
    ap.add_argument("--coeffs", default="Q", choices=["Q", "F2", "F3"])
    args = ap.parse_args()
    for name in args.names:
        h = bigraded_homology(khovanov_complex(corpus.load(name), frobenius_spec(0, 0)), args.coeffs)
        print(f"{name}: Khovanov homology over {args.coeffs}")
        print(table(h))
        print()


if __name__ == "__main__":
    main()
