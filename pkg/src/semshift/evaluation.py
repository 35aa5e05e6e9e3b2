"""Scoring and tuning: binary accuracy, Spearman correlation, purity, adjusted
mutual information, and the grid-search threshold tuner.

AMI uses the permutation-model expected mutual information and the arithmetic
mean of the two entropies as normalizer; 0/0 resolves to 0.  The tuner scans
a (pass-0, pass-1) threshold grid, scoring each point by the summed AMI
between gold token labels and the induced cluster labels over all dev words.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .clustering import ClusterParams, TwoPassParams, two_pass
from .store import DataError, TokenCloud, load_store


def accuracy(pred: Mapping[str, int], gold: Mapping[str, int]) -> float:
    """Fraction of matching labels over identical key sets."""
    if set(pred) != set(gold):
        raise DataError("prediction and gold key sets differ")
    if not gold:
        raise DataError("empty gold labels")
    return sum(1 for w in gold if pred[w] == gold[w]) / len(gold)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0  # average rank, 1-based
        i = j + 1
    return ranks


def spearman(pred_scores, gold_scores) -> float:
    """Pearson correlation of average-ranked values; ties share their mean rank."""
    a = np.asarray(pred_scores, dtype=np.float64)
    b = np.asarray(gold_scores, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.shape[0] < 2:
        raise DataError("need two aligned score vectors of length >= 2")
    ra, rb = _average_ranks(a), _average_ranks(b)
    da, db = ra - ra.mean(), rb - rb.mean()
    denom = math.sqrt(float((da ** 2).sum()) * float((db ** 2).sum()))
    if denom == 0.0:
        raise DataError("undefined correlation: constant input")
    return float((da * db).sum()) / denom


def purity(pred_clusters: Mapping, gold: Mapping) -> float:
    """Mean over clusters of their dominant gold-sense share."""
    if set(pred_clusters) != set(gold):
        raise DataError("prediction and gold token sets differ")
    if not gold:
        raise DataError("empty labelings")
    by_cluster: dict = {}
    for token, cluster in pred_clusters.items():
        by_cluster.setdefault(cluster, []).append(gold[token])
    hit = 0
    for senses in by_cluster.values():
        counts: dict = {}
        for s in senses:
            counts[s] = counts.get(s, 0) + 1
        hit += max(counts.values())
    return hit / len(gold)


def _contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def _entropy(counts: np.ndarray) -> float:
    n = counts.sum()
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def _mutual_information(table: np.ndarray) -> float:
    n = table.sum()
    mi = 0.0
    rows = table.sum(axis=1)
    cols = table.sum(axis=0)
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            nij = table[i, j]
            if nij:
                mi += (nij / n) * math.log(n * nij / (rows[i] * cols[j]))
    return mi


def _expected_mutual_information(rows: np.ndarray, cols: np.ndarray) -> float:
    """E[MI] when one labeling is permuted uniformly with margins fixed."""
    n = int(rows.sum())
    lg = math.lgamma
    emi = 0.0
    for a in rows:
        for b in cols:
            lo = max(1, a + b - n)
            hi = min(a, b)
            for nij in range(lo, hi + 1):
                log_p = (lg(a + 1) + lg(b + 1) + lg(n - a + 1) + lg(n - b + 1)
                         - lg(n + 1) - lg(nij + 1) - lg(a - nij + 1)
                         - lg(b - nij + 1) - lg(n - a - b + nij + 1))
                emi += (nij / n) * math.log(n * nij / (a * b)) * math.exp(log_p)
    return emi


def ami(labels_a, labels_b) -> float:
    """Adjusted mutual information under the permutation model, mean-normalized."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape or a.ndim != 1 or a.shape[0] < 1:
        raise DataError("labelings must be equal-length 1-D sequences")
    table = _contingency(a, b)
    rows = table.sum(axis=1)
    cols = table.sum(axis=0)
    mi = _mutual_information(table)
    emi = _expected_mutual_information(rows, cols)
    denom = 0.5 * (_entropy(rows) + _entropy(cols)) - emi
    if abs(denom) < 1e-15:
        return 0.0
    return (mi - emi) / denom


@dataclass(frozen=True)
class DevWord:
    """One dev word: gold per-token sense labels aligned with its cloud rows."""

    word: str
    labels: np.ndarray
    cloud: TokenCloud

    def __post_init__(self):
        if len(self.labels) != self.cloud.n:
            raise DataError(f"labels length does not match cloud rows for {self.word!r}")


def load_devset(path: str | Path) -> list[DevWord]:
    """Dev file: JSON object word -> {labels: [...], store_ref: dir}."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"malformed devset: {exc}") from exc
    if not isinstance(payload, dict) or not payload:
        raise DataError("devset must map words to entries")
    out = []
    stores: dict = {}
    for word in sorted(payload):
        entry = payload[word]
        ref = entry.get("store_ref")
        if ref is None or "labels" not in entry:
            raise DataError(f"devset entry for {word!r} needs labels and store_ref")
        store_path = (path.parent / ref).resolve()
        if store_path not in stores:
            stores[store_path] = load_store(store_path)
        cloud = stores[store_path].cloud(word)
        out.append(DevWord(word, np.asarray(entry["labels"], dtype=np.int64), cloud))
    return out


@dataclass(frozen=True)
class TuneResult:
    best: tuple[float, float]
    fixed: dict
    surface: tuple[tuple[float, float, float], ...]  # (t0, t1, summed AMI)

    def to_json_bytes(self) -> bytes:
        payload = {
            "best": {"t0_sc": self.best[0], "t1_sc": self.best[1]},
            "fixed": self.fixed,
            "surface": [
                {"t0_sc": t0, "t1_sc": t1, "score": score}
                for t0, t1, score in self.surface
            ],
        }
        return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def default_grid(lo: float, hi: float, step: float = 0.01) -> list[float]:
    """Exclusive-bound grid like the tuning ranges: lo < t < hi on the step lattice."""
    n_lo = int(round(lo / step))
    n_hi = int(round(hi / step))
    return [round(i * step, 10) for i in range(n_lo + 1, n_hi)]


GRID_T0 = default_grid(0.10, 0.35)
GRID_T1 = default_grid(0.10, 0.45)


def tune(devset: Sequence[DevWord], grid_t0: Sequence[float] | None = None,
         grid_t1: Sequence[float] | None = None,
         fixed: Mapping | None = None) -> TuneResult:
    """Grid-search both merge thresholds, maximizing summed per-word AMI.

    Ties break toward the smallest (t0, t1).  Words whose clustering fails at
    a grid point contribute 0 there.  Pruned tokens are labeled -1.
    """
    if not devset:
        raise DataError("empty devset")
    grid_t0 = list(grid_t0) if grid_t0 is not None else list(GRID_T0)
    grid_t1 = list(grid_t1) if grid_t1 is not None else list(GRID_T1)
    if not grid_t0 or not grid_t1:
        raise DataError("empty grid")
    fixed = dict(fixed or {})
    t0_low = int(fixed.get("t0_low", 5))
    t1_low = int(fixed.get("t1_low", 0))
    fixed = {"t0_low": t0_low, "t1_low": t1_low, "k": int(fixed.get("k", 14))}

    surface = []
    best = None
    best_score = -np.inf
    for t0 in grid_t0:
        for t1 in grid_t1:
            params = TwoPassParams(ClusterParams(t0, t0_low), ClusterParams(t1, t1_low))
            total = 0.0
            for dev in devset:
                try:
                    cs = two_pass(dev.cloud, params)
                except DataError:
                    continue  # degenerate point: this word contributes 0
                total += ami(dev.labels, cs.labels(dev.cloud.n))
            surface.append((t0, t1, total))
            if total > best_score:
                best_score = total
                best = (t0, t1)
    return TuneResult(best, fixed, tuple(surface))
