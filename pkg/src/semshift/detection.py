"""Threshold-based detection of gained and lost senses between two time slices.

A time-(t-1) sense is lost when its whole row of the similarity matrix falls
strictly below the threshold; a time-t sense is gained when its whole column
does.  Boundary equality counts as similar.  Ablation variants swap in
centroid-only metrics or a pooled time-independent clustering judged by the
token-frequency rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .clustering import ClusterParams, ClusterSet, TwoPassParams, two_pass
from .similarity import NeighborSet, SimilarityMatrix, knn, sense_similarity, similarity_matrix
from .store import DataError, EmbeddingStore, TokenCloud, cosine_distance

METRICS = ("neighbor_based", "centroid_cosine", "centroid_euclidean")
STRATEGIES = ("time_dependent", "time_independent")


@dataclass(frozen=True)
class ChangeReport:
    """Per-word outcome: sense indices lost at t-1, gained at t."""

    word: str
    lost: tuple[int, ...] = ()
    gained: tuple[int, ...] = ()

    @property
    def changed(self) -> bool:
        return bool(self.lost or self.gained)

    def to_dict(self) -> dict:
        return {"word": self.word, "changed": self.changed,
                "gained": list(self.gained), "lost": list(self.lost)}

    def tsv_row(self) -> str:
        gained = ",".join(str(i) for i in self.gained)
        lost = ",".join(str(i) for i in self.lost)
        return f"{self.word}\t{int(self.changed)}\t{gained}\t{lost}"


@dataclass(frozen=True)
class DetectionConfig:
    """Everything classify_word needs: thresholds, metric/strategy, cluster params."""

    t_sc: float
    cluster_params: TwoPassParams
    k: int = 14
    metric: str = "neighbor_based"
    strategy: str = "time_dependent"
    min_neighbor_tokens: int = 5

    def __post_init__(self):
        if self.metric not in METRICS:
            raise DataError(f"unknown metric {self.metric!r}")
        if self.strategy not in STRATEGIES:
            raise DataError(f"unknown strategy {self.strategy!r}")
        # every metric maps into s in [-1, 1]
        if not -1.0 <= self.t_sc <= 1.0:
            raise DataError(f"threshold {self.t_sc} outside metric range")


def detect(s: SimilarityMatrix | np.ndarray, t_sc: float, word: str = "") -> ChangeReport:
    """Row rule marks losses, column rule marks gains, both strictly below t_sc."""
    values = np.asarray(getattr(s, "values", s), dtype=np.float64)
    if values.ndim != 2 or values.size == 0:
        raise DataError("similarity matrix must be a non-empty 2-D array")
    below = values < t_sc
    lost = tuple(int(i) for i in np.flatnonzero(below.all(axis=1)))
    gained = tuple(int(j) for j in np.flatnonzero(below.all(axis=0)))
    return ChangeReport(word, lost=lost, gained=gained)


def frequency_gains(pooled: ClusterSet, slice_of_token: Mapping[int, int]) -> tuple[int, ...]:
    """Pooled clusters with fewer than 2 early tokens and more than 5 late ones."""
    hits = []
    for idx, cluster in enumerate(pooled.clusters):
        early = sum(1 for m in cluster.members if slice_of_token[m] == 0)
        late = cluster.size - early
        if early < 2 and late > 5:
            hits.append(idx)
    return tuple(hits)


def frequency_criterion(pooled: ClusterSet, slice_of_token: Mapping[int, int]) -> bool:
    """True when any pooled cluster satisfies the token-frequency gain rule."""
    return bool(frequency_gains(pooled, slice_of_token))


def neighbor_sets_for(store: EmbeddingStore, word: str, clusters: ClusterSet,
                      k: int, min_tokens: int) -> list[NeighborSet]:
    """One neighbor set per sense centroid, excluding the word itself."""
    return [
        knn(store, c.centroid, k, exclude={word}, min_tokens=min_tokens)
        for c in clusters.clusters
    ]


def _centroid_matrix(cs0: ClusterSet, cs1: ClusterSet, metric: str) -> SimilarityMatrix:
    p0 = [c.centroid for c in cs0.clusters]
    p1 = [c.centroid for c in cs1.clusters]
    values = np.empty((len(p0), len(p1)))
    for i, a in enumerate(p0):
        for j, b in enumerate(p1):
            if metric == "centroid_cosine":
                values[i, j] = 1.0 - cosine_distance(a, b)
            else:
                na, nb = np.linalg.norm(a), np.linalg.norm(b)
                if na == 0.0 or nb == 0.0:
                    raise DataError("degenerate vector: zero-norm centroid")
                values[i, j] = 1.0 - float(np.linalg.norm(a / na - b / nb))
    return SimilarityMatrix(values)


def classify_word(word: str, store_t0: EmbeddingStore, store_t1: EmbeddingStore,
                  cfg: DetectionConfig) -> ChangeReport:
    """Full per-word pipeline: cluster each slice, compare senses, detect change."""
    cloud0 = store_t0.cloud(word)
    cloud1 = store_t1.cloud(word)

    if cfg.strategy == "time_independent":
        pooled = TokenCloud(word, np.vstack([cloud0.vectors, cloud1.vectors]))
        cs = two_pass(pooled, cfg.cluster_params)
        slices = {i: (0 if i < cloud0.n else 1) for i in range(pooled.n)}
        return ChangeReport(word, gained=frequency_gains(cs, slices))

    cs0 = two_pass(cloud0, cfg.cluster_params, store_t0.slice)
    cs1 = two_pass(cloud1, cfg.cluster_params, store_t1.slice)
    if cfg.metric == "neighbor_based":
        u = neighbor_sets_for(store_t0, word, cs0, cfg.k, cfg.min_neighbor_tokens)
        v = neighbor_sets_for(store_t1, word, cs1, cfg.k, cfg.min_neighbor_tokens)
        s = similarity_matrix(u, v)
    else:
        s = _centroid_matrix(cs0, cs1, cfg.metric)
    return detect(s, cfg.t_sc, word=word)


def classify_words(words: Sequence[str], store_t0: EmbeddingStore,
                   store_t1: EmbeddingStore, cfg: DetectionConfig,
                   threads: int = 1) -> list[ChangeReport]:
    """classify_word over many words; output order follows the input order."""
    if threads <= 1 or len(words) <= 1:
        return [classify_word(w, store_t0, store_t1, cfg) for w in words]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(
            lambda w: classify_word(w, store_t0, store_t1, cfg), words))


def reports_to_tsv(reports: Sequence[ChangeReport]) -> str:
    return "".join(r.tsv_row() + "\n" for r in reports)


def reports_to_json(reports: Sequence[ChangeReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], ensure_ascii=False, indent=2) + "\n"
