"""Optimal coupling over all cuts, connected cuts and tree cuts on random graphs."""

import argparse

import numpy as np

from isingembed.generators import random_connected_graph, random_instance
from isingembed.oracle import verify_redundancy


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--max-n", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    worst, rows_all, rows_conn = 0.0, 0, 0
    for _ in range(args.count):
        n = int(rng.integers(2, args.max_n + 1))
        G = random_connected_graph(n, rng, p=float(rng.uniform(0, 0.6)))
        inst = random_instance(G, rng, gamma=float(rng.choice([0.1, 1.0])))
        rep = verify_redundancy(inst)
        worst = max(worst, abs(rep.theta_all - rep.theta_connected))
        if rep.theta_tree is not None:
            worst = max(worst, abs(rep.theta_tree - rep.theta_connected))
        rows_all += rep.n_all
        rows_conn += rep.n_connected
    print(f"instances {args.count}  max |theta difference| {worst:.3e}")
    print(f"cut rows: all subsets {rows_all}, connected cuts {rows_conn} ({rows_conn / rows_all:.1%})")


if __name__ == "__main__":
    main()
