import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import semshift as ss
from semshift.store import DataError

from conftest import random_store


def make_store(clouds: dict[str, np.ndarray]) -> ss.EmbeddingStore:
    return ss.EmbeddingStore(
        ss.SliceId("en", "t0"),
        {w: ss.TokenCloud(w, np.asarray(v, dtype=np.float32)) for w, v in clouds.items()})


def nbr_set(embeddings, words=None) -> ss.NeighborSet:
    embeddings = np.asarray(embeddings, dtype=np.float64)
    words = words or [f"n{i}" for i in range(len(embeddings))]
    return ss.NeighborSet(np.zeros(embeddings.shape[1]),
                          tuple((w, e) for w, e in zip(words, embeddings)))


class TestKnn:
    def test_picks_matching_representative(self):
        anchor = np.array([1.0, 0.0])
        store = make_store({"a": [[0.0, 1.0]], "b": [[1.0, 0.0]]})
        got = ss.knn(store, anchor, k=1, min_tokens=1)
        assert got.words() == ("b",)

    def test_exclude_everything(self):
        store = make_store({"a": [[0.0, 1.0]], "b": [[1.0, 0.0]]})
        with pytest.raises(DataError, match="eligible"):
            ss.knn(store, np.array([1.0, 0.0]), k=1, exclude={"a", "b"}, min_tokens=1)

    def test_min_tokens_filter(self):
        store = make_store({"rare": [[1.0, 0.0]],
                            "freq": [[0.0, 1.0]] * 5})
        got = ss.knn(store, np.array([1.0, 0.0]), k=1, min_tokens=2)
        assert got.words() == ("freq",)

    def test_matches_full_scan_oracle(self):
        rng = np.random.default_rng(0)
        store = random_store(rng, n_words=50, max_tokens=3, dim=6)
        anchor = rng.standard_normal(6)
        got = ss.knn(store, anchor, k=14, min_tokens=1)
        oracle = sorted(
            ((ss.cosine_distance(ss.representative_embedding(store, w), anchor), w)
             for w in store.words()),
            key=lambda t: (t[0], t[1]))[:14]
        assert got.words() == tuple(w for _, w in oracle)

    def test_lexicographic_tie_break(self):
        store = make_store({"bb": [[2.0, 0.0]], "aa": [[1.0, 0.0]],
                            "cc": [[0.0, 1.0]]})
        got = ss.knn(store, np.array([1.0, 0.0]), k=2, min_tokens=1)
        # aa and bb have identical direction: distance ties, word order decides
        assert got.words() == ("aa", "bb")

    def test_scale_invariance(self):
        rng = np.random.default_rng(1)
        store = random_store(rng, n_words=20, dim=5)
        scaled = ss.EmbeddingStore(
            store.slice,
            {w: ss.TokenCloud(w, store.cloud(w).vectors * np.float32(3.0))
             for w in store.words()})
        anchor = rng.standard_normal(5)
        a = ss.knn(store, anchor, k=5, min_tokens=1)
        b = ss.knn(scaled, anchor, k=5, min_tokens=1)
        assert a.words() == b.words()


class TestSenseSimilarity:
    def test_identical_sets(self):
        rng = np.random.default_rng(2)
        u = nbr_set(rng.standard_normal((5, 4)))
        assert ss.sense_similarity(u, u) == pytest.approx(1.0, abs=1e-9)

    def test_antipodal_sets(self):
        # every U embedding opposite to every V embedding: one shared axis
        u = nbr_set([[1.0, 0.0], [2.0, 0.0]])
        v = nbr_set([[-1.0, 0.0], [-3.0, 0.0]])
        assert ss.sense_similarity(u, v) == pytest.approx(-1.0, abs=1e-9)

    def test_equals_brute_force_assignment(self):
        rng = np.random.default_rng(3)
        u = nbr_set(rng.standard_normal((5, 6)))
        v = nbr_set(rng.standard_normal((5, 6)))
        cost = np.array([[ss.cosine_distance(a, b)
                          for b in v.embeddings()] for a in u.embeddings()])
        expected = 1.0 - ss.brute_force(cost).total_cost / 5
        assert ss.sense_similarity(u, v) == pytest.approx(expected, abs=1e-12)

    def test_size_mismatch(self):
        u = nbr_set(np.eye(3))
        v = nbr_set(np.eye(3)[:2])
        with pytest.raises(DataError, match="differ in size"):
            ss.sense_similarity(u, v)

    def test_offset_restores_shifted_space(self):
        rng = np.random.default_rng(4)
        emb = rng.standard_normal((4, 5))
        shift = np.array([10.0, -3.0, 2.0, 0.5, 1.0])
        u = nbr_set(emb)
        v = nbr_set(emb + shift)
        assert ss.sense_similarity(u, v) < 0.9  # misaligned without the offset
        assert ss.sense_similarity(u, v, offset=shift) == pytest.approx(1.0, abs=1e-9)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_range_and_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        u = nbr_set(rng.standard_normal((4, 5)))
        v = nbr_set(rng.standard_normal((4, 5)))
        s_uv = ss.sense_similarity(u, v)
        assert -1.0 <= s_uv <= 1.0
        assert s_uv == pytest.approx(ss.sense_similarity(v, u), abs=1e-9)


class TestSimilarityMatrix:
    def test_identical_one_by_one(self):
        u = nbr_set(np.eye(3))
        m = ss.similarity_matrix([u], [u])
        assert m.values.shape == (1, 1)
        assert m.values[0, 0] == pytest.approx(1.0, abs=1e-9)

    def test_pinned_entries(self):
        base = nbr_set([[1.0, 0.0], [2.0, 0.0], [0.5, 0.0]])
        anti = nbr_set([[-1.0, 0.0], [-2.0, 0.0], [-0.5, 0.0]])
        m = ss.similarity_matrix([base, anti], [base, anti])
        assert m.values[0, 0] == pytest.approx(1.0, abs=1e-9)
        assert m.values[1, 1] == pytest.approx(1.0, abs=1e-9)
        assert m.values[0, 1] == pytest.approx(-1.0, abs=1e-9)
        assert m.values[1, 0] == pytest.approx(-1.0, abs=1e-9)

    def test_entries_equal_independent_calls(self):
        rng = np.random.default_rng(5)
        a = [nbr_set(rng.standard_normal((4, 5))) for _ in range(3)]
        b = [nbr_set(rng.standard_normal((4, 5))) for _ in range(2)]
        m = ss.similarity_matrix(a, b)
        for i in range(3):
            for j in range(2):
                assert m.values[i, j] == pytest.approx(
                    ss.sense_similarity(a[i], b[j]), abs=1e-12)

    def test_transpose_property(self):
        rng = np.random.default_rng(6)
        a = [nbr_set(rng.standard_normal((3, 4))) for _ in range(2)]
        b = [nbr_set(rng.standard_normal((3, 4))) for _ in range(3)]
        ab = ss.similarity_matrix(a, b).values
        ba = ss.similarity_matrix(b, a).values
        assert np.allclose(ab.T, ba, atol=1e-9)

    def test_empty_input(self):
        with pytest.raises(DataError, match="non-empty"):
            ss.similarity_matrix([], [nbr_set(np.eye(2))])

    def test_json_round_trip(self):
        import json
        m = ss.similarity_matrix([nbr_set(np.eye(3))], [nbr_set(np.eye(3))])
        payload = json.loads(json.dumps(m.to_dict()))
        assert payload["rows"] == [0] and payload["cols"] == [0]
        assert payload["values"][0][0] == pytest.approx(1.0)
