"""semshift: sense-cluster based detection, ranking and visualization of
lexical semantic change within and across languages."""

from .assignment import Matching, brute_force, solve
from .clustering import (ClusterParams, ClusterSet, SenseCluster, TwoPassParams,
                         agglomerate, cluster_link_distance, kmeans_baseline, two_pass)
from .configs import DEFAULT_T_CS, LANGUAGE_PRESETS, LanguagePreset, preset_for
from .detection import (ChangeReport, DetectionConfig, classify_word, classify_words,
                        detect, frequency_criterion, frequency_gains)
from .evaluation import (DevWord, TuneResult, accuracy, ami, load_devset, purity,
                         spearman, tune)
from .graphs import SemanticGraph, build_spatiotemporal, build_temporal, build_tree, emit, pca2
from .pipeline import compare_word_pair, pair_spatiotemporal, word_temporal, word_tree
from .ranking import SenseGroup, freq_dist, group_senses, jsd, rank_words, score_word
from .similarity import NeighborSet, SimilarityMatrix, knn, sense_similarity, similarity_matrix
from .store import (DataError, EmbeddingStore, SliceId, TokenCloud, centroid,
                    cosine_distance, load_store, representative_embedding, save_store)
from .synthetic import build_benchmark, build_ranking_fixture, component_labels, synth_cloud
from .xlingual import (RectifiedVector, XlingComparison, compare_changes,
                       rectification_vector, topology_score)

__version__ = "0.1.0"
