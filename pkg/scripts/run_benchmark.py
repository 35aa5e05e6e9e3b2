#!/usr/bin/env python3
"""Run the synthetic change-detection benchmark and print the ablation table.

Builds the planted 20-word benchmark, classifies every target under the full
configuration and under each ablation (centroid metrics, time-independent
strategy), and prints per-setup accuracies.
"""

import argparse
import time

import semshift as ss

SETUPS = [
    ("full (neighbor, time-dep.)", "neighbor_based", "time_dependent"),
    ("centroid cosine", "centroid_cosine", "time_dependent"),
    ("centroid euclidean", "centroid_euclidean", "time_dependent"),
    ("time-independent", "neighbor_based", "time_independent"),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--lang", default="en", choices=["en", "de", "la", "sv"])
    args = parser.parse_args()

    store_t0, store_t1, gold = ss.build_benchmark(args.seed)
    words = sorted(gold)
    preset = ss.preset_for(args.lang)

    print(f"benchmark seed={args.seed}, {len(words)} target words, "
          f"{len(store_t0)} vocabulary words, params {preset}")
    print(f"{'setup':<30} {'accuracy':>8} {'seconds':>8}")
    for label, metric, strategy in SETUPS:
        cfg = preset.detection_config(metric=metric, strategy=strategy)
        start = time.perf_counter()
        reports = ss.classify_words(words, store_t0, store_t1, cfg)
        elapsed = time.perf_counter() - start
        acc = ss.accuracy({r.word: int(r.changed) for r in reports}, gold)
        print(f"{label:<30} {acc:>8.3f} {elapsed:>8.2f}")


if __name__ == "__main__":
    main()
