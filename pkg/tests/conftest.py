import numpy as np
import pytest

import semshift as ss


@pytest.fixture(scope="session")
def benchmark_stores():
    """Shared synthetic two-slice benchmark: (store_t0, store_t1, gold)."""
    return ss.build_benchmark(seed=7)


def random_store(rng: np.random.Generator, n_words=3, max_tokens=4, dim=4,
                 language="en", period="t0", with_mean=False) -> ss.EmbeddingStore:
    clouds = {}
    for i in range(n_words):
        word = f"w{i:02d}"
        n = int(rng.integers(1, max_tokens + 1))
        vecs = rng.standard_normal((n, dim)).astype(np.float32)
        clouds[word] = ss.TokenCloud(word, vecs)
    mean = rng.standard_normal(dim).astype(np.float32) if with_mean else None
    return ss.EmbeddingStore(ss.SliceId(language, period), clouds, language_mean=mean)
