"""Print a PD code for the closure of a positive braid word.

Used once to produce the bundled torus-knot diagrams:

    python scripts/braid_to_pd.py 3 1 2 1 2 1 2 1 2     # T(3,4)
"""

import sys


def closure_pd(strands: int, word: list[int]) -> str:
    # current edge label on each strand position; labels are renumbered later
    label = list(range(strands))
    nxt = strands
    raw = []
    for g in word:
        i = g - 1
        l_in, r_in = label[i], label[i + 1]
        l_out, r_out = nxt, nxt + 1
        nxt += 2
        # strand l_in -> r_out passes under; listing counterclockwise from it
        raw.append((l_in, r_in, r_out, l_out))
        label[i], label[i + 1] = l_out, r_out
    final = {label[k]: k for k in range(strands)}
    # follow each strand to relabel edges consecutively along the orientation
    succ = {}
    for a, b, c, d in raw:
        succ[a] = c
        succ[b] = d
    ident = lambda e: final.get(e, e)
    order, seen = {}, set()
    count = 0
    for start in range(strands):
        e = start
        while e not in seen:
            seen.add(e)
            count += 1
            order[e] = count
            e = ident(succ[e])
    return " ".join("X[%d,%d,%d,%d]" % tuple(order[ident(e)] for e in x) for x in raw)


if __name__ == "__main__":
    n, *w = map(int, sys.argv[1:])
    print(closure_pd(n, w))
