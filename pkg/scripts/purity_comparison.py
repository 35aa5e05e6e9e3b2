#!/usr/bin/env python3
"""Compare clustering purity of the merge-based method against k-means.

Planted 100:20 two-sense mixtures at increasing noise levels stand in for
languages with decreasing embedding quality; purity is averaged over seeds.
"""

import argparse

import numpy as np

import semshift as ss
from semshift.clustering import ClusterParams, TwoPassParams

LEVELS = [
    ("clean", 0.05, 0.34, 0.40),
    ("mild", 0.25, 0.34, 0.40),
    ("noisy", 0.35, 0.45, 0.55),
    ("hard", 0.45, 0.55, 0.65),
]


def purity_of(cluster_set, gold, covered_only):
    labels = cluster_set.labels(len(gold))
    idx = [i for i in range(len(gold)) if labels[i] >= 0] if covered_only \
        else list(range(len(gold)))
    return ss.purity({i: int(labels[i]) for i in idx},
                     {i: int(gold[i]) for i in idx})


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=50)
    parser.add_argument("--dim", type=int, default=16)
    args = parser.parse_args()

    e0, e1 = np.eye(args.dim)[0], np.eye(args.dim)[1]
    print(f"{'level':<8} {'spread':>6} {'two_pass':>9} {'k-means':>9}")
    for name, spread, t0, t1 in LEVELS:
        comps = [(e0, 100, spread), (e1, 20, spread)]
        params = TwoPassParams(ClusterParams(t0, 5), ClusterParams(t1, 0))
        ours, km = [], []
        for seed in range(args.seeds):
            cloud = ss.synth_cloud(comps, seed=10_000 + seed)
            gold = ss.component_labels(comps)
            try:
                ours.append(purity_of(ss.two_pass(cloud, params), gold, True))
            except ss.DataError:
                ours.append(0.0)
            km.append(purity_of(ss.kmeans_baseline(cloud, 2, seed=20_000 + seed),
                                gold, False))
        print(f"{name:<8} {spread:>6.2f} {np.mean(ours):>9.3f} {np.mean(km):>9.3f}")


if __name__ == "__main__":
    main()
