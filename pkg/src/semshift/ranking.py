"""Graded change scores: group senses across periods, compare their frequency
distributions with the Jensen-Shannon distance (base-2 logs, metric form).

Grouping is single-link: senses from either period whose neighbor-based
similarity exceeds the threshold land in one connected component.  Ranking
always clusters without noise pruning so every token is accounted for.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .clustering import ClusterParams, ClusterSet, TwoPassParams, two_pass
from .detection import DetectionConfig, neighbor_sets_for
from .similarity import NeighborSet, sense_similarity
from .store import DataError, EmbeddingStore

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SenseGroup:
    """A time-spanning sense: members are (period position, sense index) pairs."""

    id: int
    members: tuple[tuple[int, int], ...]


def group_senses(clusters_t0: ClusterSet, nbrs_t0: Sequence[NeighborSet],
                 clusters_t1: ClusterSet, nbrs_t1: Sequence[NeighborSet],
                 t_sc: float, clique: bool = False) -> list[SenseGroup]:
    """Partition all senses of both periods into groups of mutually similar ones.

    Single-link components over edges with similarity > t_sc by default; the
    clique flag instead requires every within-group pair to exceed t_sc
    (greedy, in sense order).
    """
    senses = [(0, i) for i in range(len(clusters_t0.clusters))] + \
             [(1, j) for j in range(len(clusters_t1.clusters))]
    nbrs = {(0, i): nbrs_t0[i] for i in range(len(nbrs_t0))}
    nbrs.update({(1, j): nbrs_t1[j] for j in range(len(nbrs_t1))})
    if len(nbrs) != len(senses):
        raise DataError("each sense needs exactly one neighbor set")

    sims = {}
    for a in range(len(senses)):
        for b in range(a + 1, len(senses)):
            sims[a, b] = sense_similarity(nbrs[senses[a]], nbrs[senses[b]])

    if clique:
        groups: list[list[int]] = []
        for a in range(len(senses)):
            for g in groups:
                if all(sims[min(a, b), max(a, b)] > t_sc for b in g):
                    g.append(a)
                    break
            else:
                groups.append([a])
        comp = {a: gi for gi, g in enumerate(groups) for a in g}
    else:
        parent = list(range(len(senses)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (a, b), s in sims.items():
            if s > t_sc:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        comp = {a: find(a) for a in range(len(senses))}

    buckets: dict[int, list[int]] = {}
    for a in range(len(senses)):
        buckets.setdefault(comp[a], []).append(a)
    ordered = sorted(buckets.values(), key=lambda g: senses[min(g)])
    return [SenseGroup(gi, tuple(senses[a] for a in sorted(g)))
            for gi, g in enumerate(ordered)]


def freq_dist(groups: Sequence[SenseGroup], clusters: ClusterSet,
              period: int) -> np.ndarray:
    """Per-group token mass within one period, normalized to sum to 1."""
    sizes = [c.size for c in clusters.clusters]
    covered = set()
    weights = np.zeros(len(groups))
    for g in groups:
        for p, idx in g.members:
            if p == period:
                if idx >= len(sizes):
                    raise DataError(f"sense index {idx} out of range")
                weights[g.id] += sizes[idx]
                covered.add(idx)
    if len(covered) != len(sizes):
        raise DataError("groups do not cover all senses of the period")
    total = weights.sum()
    if total == 0:
        raise DataError("no tokens in period")
    return weights / total


def jsd(p, q) -> float:
    """Jensen-Shannon distance (square root of the base-2 divergence), in [0, 1]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise DataError("distributions must be 1-D and of equal length")
    for dist in (p, q):
        if (dist < 0).any() or abs(dist.sum() - 1.0) > 1e-9:
            raise DataError("weights must be nonnegative and sum to 1")
    m = 0.5 * (p + q)

    def kl(a, b):
        mask = a > 0
        return float(np.sum(a[mask] * np.log2(a[mask] / b[mask])))

    div = 0.5 * kl(p, m) + 0.5 * kl(q, m)
    return float(np.sqrt(max(div, 0.0)))


def score_word(word: str, store_t0: EmbeddingStore, store_t1: EmbeddingStore,
               cfg: DetectionConfig) -> float:
    """JSD between the word's per-period sense-frequency distributions."""
    params = TwoPassParams(
        replace(cfg.cluster_params.pass0, t_low=0),
        replace(cfg.cluster_params.pass1, t_low=0))
    cs0 = two_pass(store_t0.cloud(word), params, store_t0.slice)
    cs1 = two_pass(store_t1.cloud(word), params, store_t1.slice)
    n0 = neighbor_sets_for(store_t0, word, cs0, cfg.k, cfg.min_neighbor_tokens)
    n1 = neighbor_sets_for(store_t1, word, cs1, cfg.k, cfg.min_neighbor_tokens)
    groups = group_senses(cs0, n0, cs1, n1, cfg.t_sc)
    return jsd(freq_dist(groups, cs0, 0), freq_dist(groups, cs1, 1))


def rank_words(words: Sequence[str], store_t0: EmbeddingStore,
               store_t1: EmbeddingStore, cfg: DetectionConfig,
               threads: int = 1) -> list[tuple[str, float]]:
    """Score every word and sort by descending change, word as tiebreak.

    Per-word failures are logged and skipped rather than aborting the run.
    """
    def one(word):
        try:
            return word, score_word(word, store_t0, store_t1, cfg)
        except DataError as exc:
            log.warning("skipping %r: %s", word, exc)
            return word, None

    if threads <= 1 or len(words) <= 1:
        results = [one(w) for w in words]
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, words))
    scored = [(w, s) for w, s in results if s is not None]
    return sorted(scored, key=lambda ws: (-ws[1], ws[0]))


def ranking_tsv(scores: Sequence[tuple[str, float]]) -> str:
    return "".join(f"{w}\t{s:.6f}\n" for w, s in scores)
