import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import semshift as ss
from semshift.store import DataError

from conftest import random_store


def shifted_store(store: ss.EmbeddingStore, v, language="de") -> ss.EmbeddingStore:
    clouds = {
        w: ss.TokenCloud(w, (store.cloud(w).vectors.astype(np.float64) + v)
                         .astype(np.float32))
        for w in store.words()
    }
    mean = None
    if store.language_mean is not None:
        mean = (store.language_mean.astype(np.float64) + v).astype(np.float32)
    return ss.EmbeddingStore(ss.SliceId(language, store.slice.period), clouds,
                             language_mean=mean)


class TestRectificationVector:
    def test_identical_stores_zero(self):
        store = random_store(np.random.default_rng(0), n_words=4)
        b = ss.rectification_vector(store, store).b
        assert np.array_equal(b, np.zeros_like(b))

    def test_translation_recovery(self):
        rng = np.random.default_rng(1)
        store = random_store(rng, n_words=6, dim=5)
        v = np.array([3.0, -1.0, 0.5, 2.0, -4.0])
        other = shifted_store(store, v)
        b = ss.rectification_vector(store, other).b
        assert np.allclose(b, v, atol=1e-6)

    def test_matches_naive_weighted_mean(self):
        rng = np.random.default_rng(2)
        s1 = random_store(rng, n_words=5, dim=4)
        s2 = random_store(rng, n_words=3, dim=4, language="de")

        def naive_mean(store):
            acc, n = np.zeros(store.dim), 0
            for w in store.words():
                for row in store.cloud(w).vectors:
                    acc += row.astype(np.float64)
                    n += 1
            return acc / n

        expected = naive_mean(s2) - naive_mean(s1)
        assert np.allclose(ss.rectification_vector(s1, s2).b, expected, atol=1e-9)

    def test_stored_mean_preferred(self):
        rng = np.random.default_rng(3)
        s1 = random_store(rng, n_words=3, dim=4, with_mean=True)
        s2 = random_store(rng, n_words=3, dim=4, with_mean=True, language="de")
        expected = (s2.language_mean.astype(np.float64)
                    - s1.language_mean.astype(np.float64))
        assert np.allclose(ss.rectification_vector(s1, s2).b, expected)

    def test_dim_mismatch(self):
        rng = np.random.default_rng(4)
        with pytest.raises(DataError, match="dimension"):
            ss.rectification_vector(random_store(rng, dim=4),
                                    random_store(rng, dim=5))


class TestTopologyScore:
    def test_cloud_equal_to_anchor(self):
        e = np.array([0.5, 1.5])
        cloud = ss.TokenCloud("w", np.tile(e, (4, 1)).astype(np.float32))
        assert ss.topology_score(e, cloud) == pytest.approx(1.0, abs=1e-6)

    def test_orthogonal_cloud(self):
        cloud = ss.TokenCloud("w", np.array([[0.0, 1.0], [0.0, 2.0]], dtype=np.float32))
        assert ss.topology_score(np.array([1.0, 0.0]), cloud) == pytest.approx(0.0, abs=1e-9)

    def test_matches_naive_loop(self):
        rng = np.random.default_rng(5)
        cloud = ss.TokenCloud("w", rng.standard_normal((20, 6)).astype(np.float32))
        e = rng.standard_normal(6)
        naive = np.mean([1.0 - ss.cosine_distance(e, row) for row in cloud.vectors])
        assert ss.topology_score(e, cloud) == pytest.approx(naive, abs=1e-9)

    def test_degenerate_anchor(self):
        cloud = ss.TokenCloud("w", np.ones((2, 3), dtype=np.float32))
        with pytest.raises(DataError, match="degenerate"):
            ss.topology_score(np.zeros(3), cloud)

    def test_rectified_shift_preserves_topology(self):
        # the paper-style diagnostic: after adding b the shifted cloud looks local again
        rng = np.random.default_rng(6)
        store = random_store(rng, n_words=6, max_tokens=6, dim=8)
        v = rng.standard_normal(8) * 5.0
        other = shifted_store(store, v)
        b = ss.rectification_vector(other, store).b  # maps other-space into store-space
        word = store.words()[0]
        e = ss.representative_embedding(store, word)
        cloud = store.cloud(word).vectors.astype(np.float64)
        shifted_cloud = other.cloud(word).vectors.astype(np.float64)
        m_same = ss.topology_score(e, cloud)
        m_cross = ss.topology_score(e, shifted_cloud)
        m_fixed = ss.topology_score(e, shifted_cloud + b)
        assert abs(m_same - m_fixed) < 0.05
        assert abs(m_same - m_cross) > abs(m_same - m_fixed)


class TestCompareChanges:
    def _report(self, word, gained=(), lost=()):
        return ss.ChangeReport(word, gained=tuple(gained), lost=tuple(lost))

    def test_empty_reports(self):
        cmp = ss.compare_changes(self._report("a"), self._report("b"),
                                 None, None, t_cs=0.4)
        assert cmp.consistent_gains == () and cmp.consistent_losses == ()
        assert cmp.divergent_gains_l1 == () and cmp.divergent_gains_l2 == ()

    def test_single_consistent_gain(self):
        cmp = ss.compare_changes(
            self._report("a", gained=[0]), self._report("b", gained=[0]),
            np.array([[0.9]]), None, t_cs=0.4)
        assert cmp.consistent_gains == ((0, 0, 0.9),)
        assert cmp.divergent_gains_l1 == () and cmp.divergent_gains_l2 == ()

    def test_greedy_trace_two_by_two(self):
        sims = np.array([[0.9, 0.5], [0.5, 0.1]])
        cmp = ss.compare_changes(
            self._report("a", gained=[0, 1]), self._report("b", gained=[0, 1]),
            sims, None, t_cs=0.4)
        assert cmp.consistent_gains == ((0, 0, 0.9),)
        assert cmp.divergent_gains_l1 == (1,)
        assert cmp.divergent_gains_l2 == (1,)

    def test_losses_bucketed_independently(self):
        cmp = ss.compare_changes(
            self._report("a", lost=[2]), self._report("b", lost=[1]),
            None, np.array([[0.7]]), t_cs=0.4)
        assert cmp.consistent_losses == ((2, 1, 0.7),)

    def test_optimal_assignment_flag(self):
        # greedy keeps only (0,0); the optimal pairing keeps both pairs
        sims = np.array([[0.6, 0.5], [0.5, 0.0]])
        greedy = ss.compare_changes(
            self._report("a", gained=[0, 1]), self._report("b", gained=[0, 1]),
            sims, None, t_cs=0.4)
        optimal = ss.compare_changes(
            self._report("a", gained=[0, 1]), self._report("b", gained=[0, 1]),
            sims, None, t_cs=0.4, use_assignment=True)
        assert len(greedy.consistent_gains) == 1
        assert len(optimal.consistent_gains) == 2

    def test_shape_mismatch(self):
        with pytest.raises(DataError, match="shape"):
            ss.compare_changes(
                self._report("a", gained=[0]), self._report("b", gained=[0, 1]),
                np.array([[0.9]]), None, t_cs=0.4)

    @given(seed=st.integers(0, 10_000), n1=st.integers(0, 4), n2=st.integers(0, 4))
    @settings(max_examples=60)
    def test_partition_property(self, seed, n1, n2):
        rng = np.random.default_rng(seed)
        sims = rng.uniform(-1, 1, size=(n1, n2)) if n1 and n2 else None
        cmp = ss.compare_changes(
            self._report("a", gained=range(n1)), self._report("b", gained=range(n2)),
            sims, None, t_cs=0.4)
        assert len(cmp.consistent_gains) + len(cmp.divergent_gains_l1) == n1
        assert len(cmp.consistent_gains) + len(cmp.divergent_gains_l2) == n2
        for _, _, s in cmp.consistent_gains:
            assert s > 0.4


def _pseudo_language_shift(dim):
    # orthogonal to every concept and drift axis, small enough that within-
    # language sense separation survives the cosine-space translation
    v = np.zeros(dim)
    v[dim - 4] = 0.6
    return v


class TestCrossLingualPipeline:
    def test_consistent_gain_across_pseudo_languages(self, benchmark_stores):
        # second language: the same space shifted by a constant vector
        s0, s1, _ = benchmark_stores
        v = _pseudo_language_shift(s0.dim)
        l2_t0 = shifted_store(s0, v)
        l2_t1 = shifted_store(s1, v)
        cfg = ss.preset_for("en").detection_config()
        cmp = ss.compare_word_pair("g0", "g0", s0, s1, l2_t0, l2_t1, cfg, t_cs=0.40)
        assert len(cmp.consistent_gains) == 1
        assert cmp.divergent_gains_l1 == () and cmp.divergent_gains_l2 == ()

    def test_divergent_gain_when_senses_differ(self, benchmark_stores):
        s0, s1, _ = benchmark_stores
        v = _pseudo_language_shift(s0.dim)
        l2_t0 = shifted_store(s0, v)
        l2_t1 = shifted_store(s1, v)
        cfg = ss.preset_for("en").detection_config()
        # g0 gains concept 3, g1 gains concept 4: inconsistent across languages
        cmp = ss.compare_word_pair("g0", "g1", s0, s1, l2_t0, l2_t1, cfg, t_cs=0.40)
        assert cmp.consistent_gains == ()
        assert len(cmp.divergent_gains_l1) == 1
        assert len(cmp.divergent_gains_l2) == 1
