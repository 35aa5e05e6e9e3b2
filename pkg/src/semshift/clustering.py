"""Sense induction by iterative cluster merging, run twice with noise pruning.

Every token starts as its own cluster; while the smallest pairwise cluster
distance stays below the merge threshold the minimal pair merges (ties go to
the lexicographically smallest id pair; the merged cluster keeps the smaller
id).  Clusters below the size floor are pruned afterwards.  The default
cluster distance is the mean pairwise cosine distance between member tokens,
computed exactly from cached per-cluster sums of unit rows; the ``midpoint``
update instead tracks literal averaged centroids and their cosine distance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .store import DataError, SliceId, TokenCloud


@dataclass(frozen=True)
class SenseCluster:
    """One induced sense: centroid plus sorted member token row indices."""

    centroid: np.ndarray
    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise DataError("sense cluster must have members")
        if any(b <= a for a, b in zip(self.members, self.members[1:])):
            raise DataError("cluster members must be strictly increasing")

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ClusterSet:
    """All sense clusters of one word in one slice, plus pruned token indices."""

    word: str
    clusters: tuple[SenseCluster, ...]
    slice: SliceId | None = None
    pruned: tuple[int, ...] = ()

    def member_union(self) -> list[int]:
        out: list[int] = []
        for c in self.clusters:
            out.extend(c.members)
        return sorted(out)

    def labels(self, n: int) -> np.ndarray:
        """Per-token cluster index over n tokens; pruned tokens get -1."""
        lab = np.full(n, -1, dtype=np.int64)
        for idx, c in enumerate(self.clusters):
            lab[list(c.members)] = idx
        return lab

    def to_dict(self) -> dict:
        return {
            "word": self.word,
            "language": self.slice.language if self.slice else None,
            "period": self.slice.period if self.slice else None,
            "clusters": [
                {"centroid": [float(x) for x in c.centroid],
                 "members": list(c.members)}
                for c in self.clusters
            ],
            "pruned": list(self.pruned),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


@dataclass(frozen=True)
class ClusterParams:
    """Merge threshold, minimum surviving cluster size and centroid update rule."""

    t_sc: float
    t_low: int = 0
    centroid_update: str = "member_mean"

    def __post_init__(self):
        if not 0.0 < self.t_sc < 2.0:
            raise DataError("t_sc must lie in (0, 2)")
        if self.t_low < 0:
            raise DataError("t_low must be nonnegative")
        if self.centroid_update not in ("member_mean", "midpoint"):
            raise DataError(f"unknown centroid update {self.centroid_update!r}")


@dataclass(frozen=True)
class TwoPassParams:
    pass0: ClusterParams
    pass1: ClusterParams


def _unit_rows(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    norms = np.linalg.norm(x, axis=1)
    if (norms == 0.0).any():
        raise DataError("degenerate vector: zero norm")
    return x / norms[:, None]


def cluster_link_distance(a: SenseCluster, b: SenseCluster, cloud: TokenCloud) -> float:
    """Mean pairwise cosine distance between the members of two clusters."""
    ua = _unit_rows(cloud.vectors[list(a.members)])
    ub = _unit_rows(cloud.vectors[list(b.members)])
    return float(np.mean(1.0 - ua @ ub.T))


def agglomerate(cloud: TokenCloud, params: ClusterParams,
                slice_id: SliceId | None = None) -> ClusterSet:
    """Merge singletons bottom-up while the minimum pair distance is below t_sc,
    then drop clusters smaller than t_low."""
    n = cloud.n
    x = cloud.vectors.astype(np.float64)
    unit = _unit_rows(x)
    members: list[list[int]] = [[i] for i in range(n)]
    counts = np.ones(n, dtype=np.float64)
    alive = np.ones(n, dtype=bool)

    midpoint = params.centroid_update == "midpoint"
    if midpoint:
        cents = x.copy()
        cunit = unit.copy()
        dist = 1.0 - cunit @ cunit.T
    else:
        sums = unit.copy()
        gram = sums @ sums.T
        dist = 1.0 - gram
    np.fill_diagonal(dist, np.inf)

    while alive.sum() > 1:
        flat = int(np.argmin(dist))
        i, j = divmod(flat, n)
        if not dist[i, j] < params.t_sc:
            break
        # row-major argmin lands on the lexicographically smallest (i, j), i < j
        members[i].extend(members[j])
        counts[i] += counts[j]
        alive[j] = False
        if midpoint:
            cents[i] = 0.5 * (cents[i] + cents[j])
            norm = np.linalg.norm(cents[i])
            if norm == 0.0:
                raise DataError("degenerate vector: merged centroid has zero norm")
            cunit[i] = cents[i] / norm
            row = 1.0 - cunit @ cunit[i]
        else:
            sums[i] += sums[j]
            gram[i, :] += gram[j, :]
            gram[:, i] = gram[i, :]
            row = 1.0 - gram[i, :] / (counts[i] * counts)
        row[~alive] = np.inf
        row[i] = np.inf
        dist[i, :] = row
        dist[:, i] = row
        dist[j, :] = np.inf
        dist[:, j] = np.inf

    clusters = []
    pruned: list[int] = []
    for cid in range(n):
        if not alive[cid]:
            continue
        mem = sorted(members[cid])
        if len(mem) < params.t_low:
            pruned.extend(mem)
            continue
        centroid = cents[cid] if midpoint else x[mem].mean(axis=0)
        clusters.append(SenseCluster(centroid, tuple(mem)))
    return ClusterSet(cloud.word, tuple(clusters), slice=slice_id,
                      pruned=tuple(sorted(pruned)))


def two_pass(cloud: TokenCloud, params: TwoPassParams,
             slice_id: SliceId | None = None) -> ClusterSet:
    """Over-segment and prune noise in pass 0, then re-cluster the survivors."""
    first = agglomerate(cloud, params.pass0, slice_id)
    keep = first.member_union()
    if not keep:
        raise DataError(f"all tokens pruned as noise for {cloud.word!r}")
    sub = TokenCloud(cloud.word, cloud.vectors[keep])
    second = agglomerate(sub, params.pass1, slice_id)
    remap = np.asarray(keep)
    clusters = tuple(
        SenseCluster(c.centroid, tuple(int(remap[m]) for m in c.members))
        for c in second.clusters
    )
    if not clusters:
        raise DataError(f"all tokens pruned as noise for {cloud.word!r}")
    pruned = sorted(set(first.pruned) | {int(remap[m]) for m in second.pruned})
    return ClusterSet(cloud.word, clusters, slice=slice_id, pruned=tuple(pruned))


def kmeans_baseline(cloud: TokenCloud, k: int, seed: int,
                    max_iter: int = 100, tol: float = 1e-6,
                    slice_id: SliceId | None = None) -> ClusterSet:
    """Lloyd iterations on cosine-normalized vectors; the ablation baseline."""
    n = cloud.n
    if not 1 <= k <= n:
        raise DataError(f"k must lie in [1, {n}], got {k}")
    unit = _unit_rows(cloud.vectors)
    rng = np.random.default_rng(seed)
    centers = unit[rng.choice(n, size=k, replace=False)].copy()
    assign = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        norms = np.linalg.norm(centers, axis=1)
        norms[norms == 0.0] = 1.0
        sims = unit @ (centers / norms[:, None]).T
        assign = np.argmax(sims, axis=1)
        moved = 0.0
        for c in range(k):
            mask = assign == c
            if not mask.any():
                continue  # empty cluster keeps its previous center
            new = unit[mask].mean(axis=0)
            moved = max(moved, float(np.linalg.norm(new - centers[c])))
            centers[c] = new
        if moved < tol:
            break
    x = cloud.vectors.astype(np.float64)
    clusters = []
    for c in range(k):
        mem = np.flatnonzero(assign == c)
        if mem.size == 0:
            continue
        clusters.append(SenseCluster(x[mem].mean(axis=0), tuple(int(m) for m in mem)))
    return ClusterSet(cloud.word, tuple(clusters), slice=slice_id)
