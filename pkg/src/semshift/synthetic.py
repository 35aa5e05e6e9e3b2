"""Synthetic token clouds and benchmark stores with planted sense structure.

Fixtures are fully deterministic for a fixed seed.  Rows of a synthetic cloud
are grouped contiguously per component, so ground-truth sense labels are
recoverable with :func:`component_labels`.
"""

from __future__ import annotations

import numpy as np

from .store import DataError, EmbeddingStore, SliceId, TokenCloud

Component = tuple[np.ndarray, int, float]  # (direction, count, angular spread)


def synth_cloud(components: list[Component], seed: int, word: str = "w") -> TokenCloud:
    """Sample a cloud of unit rows scattered around the given directions.

    Each row is ``normalize(direction_hat + spread * gaussian)``; spread 0
    reproduces the unit direction exactly.
    """
    if not components:
        raise DataError("synth_cloud needs at least one component")
    rng = np.random.default_rng(seed)
    rows = []
    for direction, count, spread in components:
        direction = np.asarray(direction, dtype=np.float64)
        norm = np.linalg.norm(direction)
        if norm == 0.0:
            raise DataError("zero direction")
        if count < 1:
            raise DataError("component count must be >= 1")
        base = direction / norm
        noise = rng.standard_normal((count, base.shape[0]))
        pts = base[None, :] + spread * noise
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        rows.append(pts)
    return TokenCloud(word, np.vstack(rows).astype(np.float32))


def component_labels(components: list[Component]) -> np.ndarray:
    """Ground-truth component index per row of the matching synth_cloud."""
    return np.repeat(np.arange(len(components)), [c[1] for c in components])


def _axis(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim)
    v[i] = 1.0
    return v


def _tilted(dim: int, concept_axis: int, drift_axis: int, angle_rad: float) -> np.ndarray:
    """Unit direction rotated away from a concept axis into a reserved drift axis."""
    v = np.zeros(dim)
    v[concept_axis] = np.cos(angle_rad)
    v[drift_axis] = np.sin(angle_rad)
    return v


# Layout of the planted benchmark space: concepts live on the first axes,
# the remaining axes are reserved for per-word drift so that a drifted sense
# stays closest to its own concept's vocabulary.
BENCH_DIM = 24
BENCH_CONCEPTS = 8
BENCH_WORDS_PER_CONCEPT = 18
BENCH_BG_TOKENS = 8
BENCH_BG_SPREAD = 0.02
BENCH_SENSE_TOKENS = 60
BENCH_NEW_SENSE_TOKENS = 12
BENCH_SENSE_SPREAD = 0.03


def _background_clouds(rng: np.random.Generator) -> dict[str, TokenCloud]:
    clouds = {}
    for ci in range(BENCH_CONCEPTS):
        axis = _axis(BENCH_DIM, ci)
        for wi in range(BENCH_WORDS_PER_CONCEPT):
            word = f"c{ci}w{wi:02d}"
            clouds[word] = synth_cloud(
                [(axis, BENCH_BG_TOKENS, BENCH_BG_SPREAD)],
                seed=int(rng.integers(2**31)), word=word)
    return clouds


def build_benchmark(seed: int) -> tuple[EmbeddingStore, EmbeddingStore, dict[str, int]]:
    """Two-slice benchmark with 10 unchanged and 10 changed target words.

    Unchanged words keep one sense; four of them carry a planted between-period
    centroid drift (two mild, two strong) that a centroid-only metric or a
    pooled time-independent clustering misreads as change.  Five changed words
    gain a low-frequency sense, five lose one.  Returns (store_t0, store_t1,
    gold) where gold maps word -> 1 for changed.
    """
    rng = np.random.default_rng(seed)
    background = _background_clouds(rng)
    clouds_t0 = dict(background)
    clouds_t1 = dict(background)
    gold: dict[str, int] = {}

    def tok_seed() -> int:
        return int(rng.integers(2**31))

    # Unchanged words; u0/u1 drift 45 degrees, u2/u3 drift 65 degrees at time t.
    drift_angles = {0: np.deg2rad(45), 1: np.deg2rad(45),
                    2: np.deg2rad(65), 3: np.deg2rad(65)}
    for i in range(10):
        word = f"u{i}"
        concept = i % BENCH_CONCEPTS
        base = _axis(BENCH_DIM, concept)
        clouds_t0[word] = synth_cloud(
            [(base, BENCH_SENSE_TOKENS, BENCH_SENSE_SPREAD)], tok_seed(), word)
        if i in drift_angles:
            late = _tilted(BENCH_DIM, concept, BENCH_CONCEPTS + i, drift_angles[i])
        else:
            late = base
        clouds_t1[word] = synth_cloud(
            [(late, BENCH_SENSE_TOKENS, BENCH_SENSE_SPREAD)], tok_seed(), word)
        gold[word] = 0

    # Gain words: one sense at t-1, same sense plus a low-frequency new sense at t.
    for i in range(5):
        word = f"g{i}"
        concept = i % BENCH_CONCEPTS
        other = (concept + 3) % BENCH_CONCEPTS
        base = _axis(BENCH_DIM, concept)
        new = _axis(BENCH_DIM, other)
        clouds_t0[word] = synth_cloud(
            [(base, BENCH_SENSE_TOKENS, BENCH_SENSE_SPREAD)], tok_seed(), word)
        clouds_t1[word] = synth_cloud(
            [(base, BENCH_SENSE_TOKENS - BENCH_NEW_SENSE_TOKENS, BENCH_SENSE_SPREAD),
             (new, BENCH_NEW_SENSE_TOKENS, BENCH_SENSE_SPREAD)], tok_seed(), word)
        gold[word] = 1

    # Loss words: the mirror image, a low-frequency sense present only at t-1.
    for i in range(5):
        word = f"l{i}"
        concept = (i + 4) % BENCH_CONCEPTS
        other = (concept + 3) % BENCH_CONCEPTS
        base = _axis(BENCH_DIM, concept)
        old = _axis(BENCH_DIM, other)
        clouds_t0[word] = synth_cloud(
            [(base, BENCH_SENSE_TOKENS - BENCH_NEW_SENSE_TOKENS, BENCH_SENSE_SPREAD),
             (old, BENCH_NEW_SENSE_TOKENS, BENCH_SENSE_SPREAD)], tok_seed(), word)
        clouds_t1[word] = synth_cloud(
            [(base, BENCH_SENSE_TOKENS, BENCH_SENSE_SPREAD)], tok_seed(), word)
        gold[word] = 1

    store_t0 = _finish_store(SliceId("en", "t0"), clouds_t0)
    store_t1 = _finish_store(SliceId("en", "t1"), clouds_t1)
    return store_t0, store_t1, gold


def _finish_store(slice_id: SliceId, clouds: dict[str, TokenCloud]) -> EmbeddingStore:
    total = np.zeros(next(iter(clouds.values())).dim, dtype=np.float64)
    count = 0
    for c in clouds.values():
        total += c.vectors.astype(np.float64).sum(axis=0)
        count += c.n
    mean = (total / count).astype(np.float32)
    return EmbeddingStore(slice_id, clouds, language_mean=mean)


def build_ranking_fixture(seed: int, fractions: list[float]
                          ) -> tuple[EmbeddingStore, EmbeddingStore, dict[str, float]]:
    """Words whose time-t cloud replaces a planted fraction of tokens with a new sense.

    Returns (store_t0, store_t1, planted) where planted maps word -> fraction.
    """
    rng = np.random.default_rng(seed)
    background = _background_clouds(rng)
    clouds_t0 = dict(background)
    clouds_t1 = dict(background)
    planted = {}
    for i, frac in enumerate(fractions):
        word = f"r{i}"
        concept = i % BENCH_CONCEPTS
        other = (concept + 4) % BENCH_CONCEPTS
        base = _axis(BENCH_DIM, concept)
        new = _axis(BENCH_DIM, other)
        n_new = int(round(BENCH_SENSE_TOKENS * frac))
        clouds_t0[word] = synth_cloud(
            [(base, BENCH_SENSE_TOKENS, BENCH_SENSE_SPREAD)],
            int(rng.integers(2**31)), word)
        comps = []
        if BENCH_SENSE_TOKENS - n_new > 0:
            comps.append((base, BENCH_SENSE_TOKENS - n_new, BENCH_SENSE_SPREAD))
        if n_new > 0:
            comps.append((new, n_new, BENCH_SENSE_SPREAD))
        clouds_t1[word] = synth_cloud(comps, int(rng.integers(2**31)), word)
        planted[word] = frac
    store_t0 = _finish_store(SliceId("en", "t0"), clouds_t0)
    store_t1 = _finish_store(SliceId("en", "t1"), clouds_t1)
    return store_t0, store_t1, planted
