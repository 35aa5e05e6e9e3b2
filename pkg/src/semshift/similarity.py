"""Neighbor sets around sense centroids and matching-based sense similarity.

The similarity between two sense clusters is one minus the mean cost of an
optimal one-to-one matching between the representative embeddings of their
k nearest neighboring words.  A cross-space offset vector, when given, shifts
the first side's embeddings before costing (no re-normalization).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import assignment
from .store import DataError, EmbeddingStore, cosine_distance


@dataclass(frozen=True)
class NeighborSet:
    """The k nearest neighboring words to a sense centroid, closest first."""

    anchor: np.ndarray
    neighbors: tuple[tuple[str, np.ndarray], ...]

    def __post_init__(self):
        if len(self.neighbors) < 1:
            raise DataError("neighbor set must contain at least one word")
        words = [w for w, _ in self.neighbors]
        if len(set(words)) != len(words):
            raise DataError("neighbor words must be distinct")

    @property
    def k(self) -> int:
        return len(self.neighbors)

    def embeddings(self) -> np.ndarray:
        return np.stack([e for _, e in self.neighbors]).astype(np.float64)

    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.neighbors)


def knn(store: EmbeddingStore, anchor: np.ndarray, k: int,
        exclude: frozenset[str] | set[str] = frozenset(),
        min_tokens: int = 5) -> NeighborSet:
    """Exact full-scan nearest neighbors by cosine distance of word representatives.

    Candidates are store words with at least min_tokens occurrences that are
    not excluded; ties break lexicographically by word.
    """
    if k < 1:
        raise DataError("k must be >= 1")
    anchor = np.asarray(anchor, dtype=np.float64)
    words, reps = store.representatives
    eligible = [
        (w, idx) for idx, w in enumerate(words)
        if w not in exclude and store.cloud(w).n >= min_tokens
    ]
    if len(eligible) < k:
        raise DataError(f"fewer than {k} eligible words "
                        f"({len(eligible)} candidates)")
    scored = sorted(
        ((cosine_distance(reps[idx], anchor), w, idx) for w, idx in eligible),
        key=lambda t: (t[0], t[1]))
    chosen = scored[:k]
    return NeighborSet(anchor, tuple((w, reps[idx].copy()) for _, w, idx in chosen))


def _cost_matrix(u: NeighborSet, v: NeighborSet,
                 offset: np.ndarray | None) -> np.ndarray:
    a = u.embeddings()
    if offset is not None:
        offset = np.asarray(offset, dtype=np.float64)
        if offset.shape != a[0].shape:
            raise DataError("offset length does not match embedding dimension")
        a = a + offset
    b = v.embeddings()
    cost = np.empty((u.k, v.k))
    for i in range(u.k):
        for j in range(v.k):
            cost[i, j] = cosine_distance(a[i], b[j])
    return cost


def sense_similarity(u: NeighborSet, v: NeighborSet,
                     offset: np.ndarray | None = None) -> float:
    """1 - (optimal matching cost) / k between two neighbor sets; range [-1, 1]."""
    if u.k != v.k:
        raise DataError(f"neighbor sets differ in size: {u.k} vs {v.k}")
    match = assignment.solve(_cost_matrix(u, v, offset))
    return 1.0 - match.total_cost / u.k


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise sense-to-sense similarities: rows index the first set's senses."""

    values: np.ndarray
    row_ids: tuple[int, ...] = ()
    col_ids: tuple[int, ...] = ()

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def to_dict(self) -> dict:
        n, m = self.values.shape
        return {
            "rows": list(self.row_ids) if self.row_ids else list(range(n)),
            "cols": list(self.col_ids) if self.col_ids else list(range(m)),
            "values": [[float(x) for x in row] for row in self.values],
        }


def similarity_matrix(senses_a: Sequence[NeighborSet],
                      senses_b: Sequence[NeighborSet],
                      offset: np.ndarray | None = None) -> SimilarityMatrix:
    """Entrywise sense_similarity between two lists of neighbor sets."""
    if not senses_a or not senses_b:
        raise DataError("similarity matrix needs non-empty sense lists")
    ks = {s.k for s in senses_a} | {s.k for s in senses_b}
    if len(ks) != 1:
        raise DataError("neighbor sets must share one k")
    values = np.empty((len(senses_a), len(senses_b)))
    for i, u in enumerate(senses_a):
        for j, v in enumerate(senses_b):
            values[i, j] = sense_similarity(u, v, offset)
    return SimilarityMatrix(values)
