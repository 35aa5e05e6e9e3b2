"""Cross-lingual machinery: rectified alignment vector, consistency comparison
of per-language change reports, and the topology diagnostic.

The rectified vector is the difference between the two languages' mean token
embeddings; adding it to a first-language embedding co-locates the spaces at
the word level before cosine costing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import assignment
from .detection import ChangeReport
from .similarity import SimilarityMatrix
from .store import DataError, EmbeddingStore, SliceId, TokenCloud


@dataclass(frozen=True)
class RectifiedVector:
    b: np.ndarray
    source: tuple[SliceId, SliceId]


def rectification_vector(store_l1: EmbeddingStore,
                         store_l2: EmbeddingStore) -> RectifiedVector:
    """b = mean(l2) - mean(l1), token-count weighted over all words."""
    if store_l1.dim != store_l2.dim:
        raise DataError("stores differ in embedding dimension")
    b = store_l2.token_weighted_mean() - store_l1.token_weighted_mean()
    return RectifiedVector(b, (store_l1.slice, store_l2.slice))


def topology_score(e: np.ndarray, cloud: TokenCloud | np.ndarray) -> float:
    """Mean cosine similarity between a vector and every point of a cloud."""
    e = np.asarray(e, dtype=np.float64)
    ne = np.linalg.norm(e)
    if ne == 0.0:
        raise DataError("degenerate vector: zero norm")
    pts = cloud.vectors if isinstance(cloud, TokenCloud) else np.asarray(cloud)
    pts = pts.astype(np.float64)
    norms = np.linalg.norm(pts, axis=1)
    if (norms == 0.0).any():
        raise DataError("degenerate vector: zero norm in cloud")
    sims = (pts @ e) / (norms * ne)
    return float(sims.mean())


@dataclass(frozen=True)
class XlingComparison:
    """Gained/lost senses of a translation pair split into consistent vs divergent."""

    word_pair: tuple[str, str]
    t_cs: float
    consistent_gains: tuple[tuple[int, int, float], ...] = ()
    divergent_gains_l1: tuple[int, ...] = ()
    divergent_gains_l2: tuple[int, ...] = ()
    consistent_losses: tuple[tuple[int, int, float], ...] = ()
    divergent_losses_l1: tuple[int, ...] = ()
    divergent_losses_l2: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        def triples(items):
            return [{"l1": i, "l2": j, "similarity": float(s)} for i, j, s in items]
        return {
            "word_pair": list(self.word_pair),
            "t_cs": self.t_cs,
            "consistent_gains": triples(self.consistent_gains),
            "divergent_gains_l1": list(self.divergent_gains_l1),
            "divergent_gains_l2": list(self.divergent_gains_l2),
            "consistent_losses": triples(self.consistent_losses),
            "divergent_losses_l1": list(self.divergent_losses_l1),
            "divergent_losses_l2": list(self.divergent_losses_l2),
        }


def _pair_up(ids_a, ids_b, sims: np.ndarray, t_cs: float, use_assignment: bool):
    """One-to-one pairing of senses with similarity above t_cs.

    Greedy by descending similarity (deterministic, matches how the threshold
    rule reads); optimal assignment on the square sub-problem behind a flag.
    """
    if sims.shape != (len(ids_a), len(ids_b)):
        raise DataError(f"similarity matrix shape {sims.shape} does not match "
                        f"sense lists ({len(ids_a)}, {len(ids_b)})")
    matched = []
    used_a: set[int] = set()
    used_b: set[int] = set()
    if use_assignment and len(ids_a) and len(ids_b):
        side = max(len(ids_a), len(ids_b))
        cost = np.full((side, side), 2.0)
        cost[:len(ids_a), :len(ids_b)] = 1.0 - sims
        match = assignment.solve(cost)
        for a, b in enumerate(match.perm):
            if a < len(ids_a) and b < len(ids_b) and sims[a, b] > t_cs:
                matched.append((ids_a[a], ids_b[b], float(sims[a, b])))
                used_a.add(a)
                used_b.add(b)
        matched.sort(key=lambda t: (-t[2], t[0], t[1]))
    else:
        order = sorted(
            ((i, j) for i in range(len(ids_a)) for j in range(len(ids_b))),
            key=lambda ij: (-sims[ij[0], ij[1]], ij[0], ij[1]))
        for i, j in order:
            if i in used_a or j in used_b or not sims[i, j] > t_cs:
                continue
            matched.append((ids_a[i], ids_b[j], float(sims[i, j])))
            used_a.add(i)
            used_b.add(j)
    left_a = tuple(ids_a[i] for i in range(len(ids_a)) if i not in used_a)
    left_b = tuple(ids_b[j] for j in range(len(ids_b)) if j not in used_b)
    return tuple(matched), left_a, left_b


def compare_changes(report_l1: ChangeReport, report_l2: ChangeReport,
                    sims_gain: SimilarityMatrix | np.ndarray | None,
                    sims_loss: SimilarityMatrix | np.ndarray | None,
                    t_cs: float, use_assignment: bool = False) -> XlingComparison:
    """Bucket each language's gained/lost senses into consistent or divergent."""
    def values(s, rows, cols):
        if s is None:
            return np.zeros((rows, cols))
        return np.asarray(getattr(s, "values", s), dtype=np.float64)

    gains, g_left1, g_left2 = _pair_up(
        report_l1.gained, report_l2.gained,
        values(sims_gain, len(report_l1.gained), len(report_l2.gained)),
        t_cs, use_assignment)
    losses, l_left1, l_left2 = _pair_up(
        report_l1.lost, report_l2.lost,
        values(sims_loss, len(report_l1.lost), len(report_l2.lost)),
        t_cs, use_assignment)
    return XlingComparison(
        word_pair=(report_l1.word, report_l2.word),
        t_cs=t_cs,
        consistent_gains=gains,
        divergent_gains_l1=g_left1,
        divergent_gains_l2=g_left2,
        consistent_losses=losses,
        divergent_losses_l1=l_left1,
        divergent_losses_l2=l_left2,
    )
