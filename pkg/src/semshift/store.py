"""Immutable per-corpus-slice token embedding collections and their on-disk format.

A store directory holds ``manifest.json`` plus ``vectors.bin`` (raw IEEE-754
binary32, little-endian, row-major, no header).  Manifest offsets are float32
element indices into ``vectors.bin``.  Stores are immutable after load and safe
to read from multiple threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1

_MANIFEST = "manifest.json"
_VECTORS = "vectors.bin"


class DataError(ValueError):
    """A store, config or input file violates its expected format or contract."""


@dataclass(frozen=True)
class SliceId:
    """Identifies one corpus slice: a (language, period) pair like ("en", "t0")."""

    language: str
    period: str

    def __post_init__(self):
        if not self.language or not self.period:
            raise DataError("slice language and period must be non-empty")


class TokenCloud:
    """All contextualized embeddings of one word in one slice, one row per occurrence."""

    __slots__ = ("word", "vectors")

    def __init__(self, word: str, vectors: np.ndarray):
        vectors = np.asarray(vectors, dtype=np.float32)
        if vectors.ndim != 2 or vectors.shape[0] < 1 or vectors.shape[1] < 1:
            raise DataError(f"cloud for {word!r} must be a non-empty 2-D matrix")
        if not np.isfinite(vectors).all():
            raise DataError(f"non-finite values in cloud for {word!r}")
        vectors.setflags(write=False)
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "vectors", vectors)

    def __setattr__(self, name, value):
        raise AttributeError("TokenCloud is immutable")

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, TokenCloud)
            and self.word == other.word
            and self.vectors.shape == other.vectors.shape
            and np.array_equal(self.vectors, other.vectors)
        )

    def __repr__(self):
        return f"TokenCloud({self.word!r}, n={self.n}, dim={self.dim})"


class EmbeddingStore:
    """Word -> TokenCloud map for one slice, with an optional slice-level mean vector."""

    def __init__(self, slice_id: SliceId, clouds: dict[str, TokenCloud],
                 language_mean: np.ndarray | None = None):
        if not clouds:
            raise DataError("store must contain at least one word")
        dims = {c.dim for c in clouds.values()}
        if len(dims) != 1:
            raise DataError(f"dimension mismatch across clouds: {sorted(dims)}")
        self.slice = slice_id
        self.dim = dims.pop()
        self._clouds = {w: clouds[w] for w in sorted(clouds)}
        if language_mean is not None:
            language_mean = np.asarray(language_mean, dtype=np.float32)
            if language_mean.shape != (self.dim,):
                raise DataError("language_mean length does not match store dimension")
            if not np.isfinite(language_mean).all():
                raise DataError("non-finite values in language_mean")
            language_mean.setflags(write=False)
        self.language_mean = language_mean

    def words(self) -> list[str]:
        return list(self._clouds)

    def cloud(self, word: str) -> TokenCloud:
        try:
            return self._clouds[word]
        except KeyError:
            raise DataError(f"unknown word {word!r} in slice "
                            f"{self.slice.language}/{self.slice.period}") from None

    def __contains__(self, word: str) -> bool:
        return word in self._clouds

    def __len__(self) -> int:
        return len(self._clouds)

    def items(self):
        return self._clouds.items()

    @cached_property
    def representatives(self) -> tuple[list[str], np.ndarray]:
        """All word representative embeddings as (words, matrix) in word order."""
        words = self.words()
        mat = np.stack([centroid(self._clouds[w]) for w in words])
        mat.setflags(write=False)
        return words, mat

    def token_weighted_mean(self) -> np.ndarray:
        """Mean over every token embedding in the slice (float64).

        Uses the stored language_mean when present, otherwise computes it.
        """
        if self.language_mean is not None:
            return self.language_mean.astype(np.float64)
        total = np.zeros(self.dim, dtype=np.float64)
        count = 0
        for c in self._clouds.values():
            total += c.vectors.astype(np.float64).sum(axis=0)
            count += c.n
        return total / count

    def __eq__(self, other):
        if not isinstance(other, EmbeddingStore):
            return NotImplemented
        mean_eq = (
            (self.language_mean is None and other.language_mean is None)
            or (self.language_mean is not None and other.language_mean is not None
                and np.array_equal(self.language_mean, other.language_mean))
        )
        return self.slice == other.slice and mean_eq and self._clouds == other._clouds


def centroid(cloud: TokenCloud) -> np.ndarray:
    """Arithmetic mean of all token rows, accumulated in float64."""
    return cloud.vectors.astype(np.float64).mean(axis=0)


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cosine similarity, clipped to [0, 2].  Requires nonzero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise DataError("degenerate vector: zero norm")
    d = 1.0 - float(np.dot(u, v)) / (nu * nv)
    return min(max(d, 0.0), 2.0)


def representative_embedding(store: EmbeddingStore, word: str) -> np.ndarray:
    """The word's single representative vector: centroid of its token cloud."""
    return centroid(store.cloud(word))


def _require(condition: bool, message: str):
    if not condition:
        raise DataError(message)


def load_store(path: str | Path, normalize: bool = False) -> EmbeddingStore:
    """Load and validate a store directory.

    With normalize=True every token row is L2-normalized after reading (the
    default leaves raw encoder outputs untouched).
    """
    path = Path(path)
    manifest_path = path / _MANIFEST
    vectors_path = path / _VECTORS
    _require(manifest_path.is_file(), f"missing {_MANIFEST} in {path}")
    _require(vectors_path.is_file(), f"missing {_VECTORS} in {path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DataError(f"malformed manifest: {exc}") from exc
    _require(isinstance(manifest, dict), "malformed manifest: not an object")
    _require(manifest.get("format_version") == FORMAT_VERSION,
             f"unsupported format_version {manifest.get('format_version')!r}")
    for key in ("language", "period", "dim", "language_mean_offset", "words"):
        _require(key in manifest, f"malformed manifest: missing {key!r}")
    dim = manifest["dim"]
    _require(isinstance(dim, int) and dim >= 1, "malformed manifest: bad dim")
    entries = manifest["words"]
    _require(isinstance(entries, list) and entries, "store must contain at least one word")
    names = [e.get("word") for e in entries]
    _require(all(isinstance(w, str) and w for w in names),
             "malformed manifest: bad word entry")
    _require(names == sorted(names) and len(set(names)) == len(names),
             "malformed manifest: words must be unique and sorted")

    raw = vectors_path.read_bytes()
    _require(len(raw) % 4 == 0, "truncated vector file: size not a multiple of 4")
    flat = np.frombuffer(raw, dtype="<f4")
    total = flat.shape[0]

    clouds = {}
    for entry in entries:
        word = entry["word"]
        offset = entry.get("offset")
        count = entry.get("count")
        _require(isinstance(offset, int) and offset >= 0,
                 f"malformed manifest: bad offset for {word!r}")
        _require(isinstance(count, int) and count >= 1,
                 f"malformed manifest: bad count for {word!r}")
        end = offset + count * dim
        _require(end <= total, "truncated vector file: "
                 f"{word!r} needs elements up to {end}, file has {total}")
        mat = flat[offset:end].reshape(count, dim).copy()
        _require(bool(np.isfinite(mat).all()), f"non-finite values in cloud for {word!r}")
        norms = np.linalg.norm(mat.astype(np.float64), axis=1)
        _require(bool((norms > 0.0).all()), f"zero-norm token vector in cloud for {word!r}")
        if normalize:
            mat = (mat.astype(np.float64) / norms[:, None]).astype(np.float32)
        clouds[word] = TokenCloud(word, mat)

    mean = None
    mean_offset = manifest.get("language_mean_offset")
    if mean_offset is not None:
        _require(isinstance(mean_offset, int) and mean_offset >= 0,
                 "malformed manifest: bad language_mean_offset")
        _require(mean_offset + dim <= total,
                 "truncated vector file: language_mean out of bounds")
        mean = flat[mean_offset:mean_offset + dim].copy()

    slice_id = SliceId(str(manifest["language"]), str(manifest["period"]))
    return EmbeddingStore(slice_id, clouds, language_mean=mean)


def save_store(store: EmbeddingStore, path: str | Path) -> None:
    """Write a store directory; load_store(save_store(x)) reproduces x bit-exactly."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    blocks = []
    entries = []
    offset = 0
    for word in store.words():
        cloud = store.cloud(word)
        blocks.append(np.ascontiguousarray(cloud.vectors, dtype="<f4"))
        entries.append({"word": word, "offset": offset, "count": cloud.n})
        offset += cloud.n * store.dim
    mean_offset = None
    if store.language_mean is not None:
        blocks.append(np.ascontiguousarray(store.language_mean, dtype="<f4"))
        mean_offset = offset
    manifest = {
        "format_version": FORMAT_VERSION,
        "language": store.slice.language,
        "period": store.slice.period,
        "dim": store.dim,
        "language_mean_offset": mean_offset,
        "words": entries,
    }
    (path / _VECTORS).write_bytes(b"".join(b.tobytes() for b in blocks))
    (path / _MANIFEST).write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
