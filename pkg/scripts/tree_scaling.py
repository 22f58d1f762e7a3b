"""Rows and wall time of the tree LP as the chain grows."""

import argparse
import time

import numpy as np

from isingembed.cuts import tree_edge_cuts
from isingembed.generators import random_instance, random_tree
from isingembed.lp import build_lp, solve_simplex


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[5, 50, 500, 1000, 2000])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--gamma", type=float, default=1.0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>6} {'rows':>7} {'build s':>8} {'solve s':>8} {'pivots':>7} {'theta':>12}")
    for n in args.sizes:
        inst = random_instance(random_tree(n, rng), rng, gamma=args.gamma)
        t0 = time.perf_counter()
        lp = build_lp(inst, tree_edge_cuts(inst.graph))
        t1 = time.perf_counter()
        sol = solve_simplex(lp)
        t2 = time.perf_counter()
        print(f"{n:>6} {len(lp):>7} {t1 - t0:>8.3f} {t2 - t1:>8.3f} {sol.iterations:>7} {sol.theta:>12.6g}")


if __name__ == "__main__":
    main()
