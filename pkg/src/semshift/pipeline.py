"""End-to-end orchestration: stores in, reports/comparisons/graphs out."""

from __future__ import annotations

import numpy as np

from .clustering import ClusterSet, two_pass
from .configs import DEFAULT_T_CS
from .detection import ChangeReport, DetectionConfig, classify_word, neighbor_sets_for
from .graphs import SemanticGraph, build_spatiotemporal, build_temporal, build_tree
from .similarity import similarity_matrix
from .store import DataError, EmbeddingStore, representative_embedding
from .xlingual import XlingComparison, compare_changes, rectification_vector


def _clustered(store: EmbeddingStore, word: str, cfg: DetectionConfig):
    cs = two_pass(store.cloud(word), cfg.cluster_params, store.slice)
    nbrs = neighbor_sets_for(store, word, cs, cfg.k, cfg.min_neighbor_tokens)
    return cs, nbrs


def word_tree(store: EmbeddingStore, word: str, cfg: DetectionConfig) -> SemanticGraph:
    cs, nbrs = _clustered(store, word, cfg)
    return build_tree(word, representative_embedding(store, word), cs, nbrs, store.slice)


def word_temporal(store_t0: EmbeddingStore, store_t1: EmbeddingStore, word: str,
                  cfg: DetectionConfig) -> SemanticGraph:
    report = classify_word(word, store_t0, store_t1, cfg)
    t0 = word_tree(store_t0, word, cfg)
    t1 = word_tree(store_t1, word, cfg)
    return build_temporal(word, t0, t1, report)


def compare_word_pair(word_l1: str, word_l2: str,
                      l1_t0: EmbeddingStore, l1_t1: EmbeddingStore,
                      l2_t0: EmbeddingStore, l2_t1: EmbeddingStore,
                      cfg: DetectionConfig, t_cs: float = DEFAULT_T_CS,
                      use_assignment: bool = False) -> XlingComparison:
    """Detect per-language changes, then align gained/lost senses across languages.

    Gains compare at time t and losses at time t-1, each with the rectified
    offset computed from the matching period's store pair.
    """
    if cfg.strategy != "time_dependent" or cfg.metric != "neighbor_based":
        raise DataError("cross-lingual comparison requires the time-dependent "
                        "strategy and the neighbor-based metric")
    report_l1 = classify_word(word_l1, l1_t0, l1_t1, cfg)
    report_l2 = classify_word(word_l2, l2_t0, l2_t1, cfg)

    def sims(indices_l1, indices_l2, store_l1, store_l2, w1, w2):
        if not indices_l1 or not indices_l2:
            return None
        cs1, nbr1 = _clustered(store_l1, w1, cfg)
        cs2, nbr2 = _clustered(store_l2, w2, cfg)
        offset = rectification_vector(store_l1, store_l2).b
        u = [nbr1[i] for i in indices_l1]
        v = [nbr2[j] for j in indices_l2]
        return similarity_matrix(u, v, offset=offset)

    sims_gain = sims(report_l1.gained, report_l2.gained, l1_t1, l2_t1, word_l1, word_l2)
    sims_loss = sims(report_l1.lost, report_l2.lost, l1_t0, l2_t0, word_l1, word_l2)
    return compare_changes(report_l1, report_l2, sims_gain, sims_loss,
                           t_cs, use_assignment=use_assignment)


def pair_spatiotemporal(word_l1: str, word_l2: str,
                        l1_t0: EmbeddingStore, l1_t1: EmbeddingStore,
                        l2_t0: EmbeddingStore, l2_t1: EmbeddingStore,
                        cfg: DetectionConfig, t_cs: float = DEFAULT_T_CS
                        ) -> SemanticGraph:
    cmp = compare_word_pair(word_l1, word_l2, l1_t0, l1_t1, l2_t0, l2_t1, cfg, t_cs)
    g1 = word_temporal(l1_t0, l1_t1, word_l1, cfg)
    g2 = word_temporal(l2_t0, l2_t1, word_l2, cfg)
    return build_spatiotemporal((word_l1, word_l2), g1, g2, cmp)
