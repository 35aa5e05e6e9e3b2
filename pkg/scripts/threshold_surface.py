#!/usr/bin/env python3
"""Sweep the two merge thresholds on a calibrated dev fixture and dump the
summed-AMI surface as JSON (one record per grid point, heatmap-ready)."""

import argparse
import sys

import numpy as np

import semshift as ss
from semshift.evaluation import DevWord, default_grid, tune


def band_word(word, cos_sub, seed, dim=8, group=4):
    sin_sub = float(np.sqrt(1 - cos_sub ** 2))
    e = np.eye(dim)
    comps = [(e[0], group, 0.0), (cos_sub * e[0] + sin_sub * e[1], group, 0.0),
             (e[2], group, 0.0), (cos_sub * e[2] + sin_sub * e[3], group, 0.0)]
    cloud = ss.synth_cloud(comps, seed=seed, word=word)
    return DevWord(word, np.array([0] * (2 * group) + [1] * (2 * group)), cloud)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="-")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    dev = [band_word("wa", 0.845, args.seed), band_word("wb", 0.795, args.seed + 1)]
    result = tune(dev, default_grid(0.10, 0.35), default_grid(0.10, 0.45))
    payload = result.to_json_bytes()
    if args.out == "-":
        sys.stdout.buffer.write(payload)
    else:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    print(f"\nbest thresholds: t0={result.best[0]:.2f} t1={result.best[1]:.2f}",
          file=sys.stderr)


if __name__ == "__main__":
    main()
