"""Flow-category census per diagram: after cubic slides and after quantum elimination.

Also checks the two chain oracles against the slid category.

    python3 scripts/flowcat_census.py [--max-crossings 6]
"""

import argparse
import time

from bnflow import corpus
from bnflow.flowcat import (
    bn_flow_category,
    chains_oracle_0dim,
    chains_oracle_1dim,
    eliminate_quantum_increasing,
    engine_census0,
    engine_census1,
    increasing_components,
    xy_flow_category,
)


def fmt(census):
    return f"{census['objects']} obj, {census['points']} pts, {census['intervals']} int, {census['circles']} circ"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-crossings", type=int, default=6)
    args = ap.parse_args()
    print("diagram | 1X category | oracles | eliminated | increasing circles | time")
    print("--- | --- | --- | --- | --- | ---")
    for name, d in corpus.all_diagrams(args.max_crossings).items():
        t0 = time.time()
        xy, bn = xy_flow_category(d), bn_flow_category(d)
        oracle = engine_census0(bn) == chains_oracle_0dim(xy) and engine_census1(bn) == chains_oracle_1dim(xy)
        el = eliminate_quantum_increasing(bn)
        circles = len(increasing_components(el))
        print(f"{name} | {fmt(bn.census())} | {'agree' if oracle else 'DIFFER'} | {fmt(el.census())} "
              f"| {circles} | {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
