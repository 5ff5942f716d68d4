"""Context embedding providers.

Every provider returns unit-norm vectors of a fixed dimension and is
deterministic: the same input always yields the same vector.  The built-in
provider needs no model or network: it hashes token unigrams and character
trigrams to seeded random directions and sums them (a feature-hashing
random projection), so textual overlap translates into cosine similarity.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Optional, Protocol

import httpx
import numpy as np

log = logging.getLogger(__name__)

DEFAULT_DIMENSION = 256
TOKEN_WEIGHT = 3.0
TRIGRAM_WEIGHT = 1.0


class EmbeddingError(RuntimeError):
    pass


class EmbeddingProvider(Protocol):
    name: str
    dimension: int

    def embed_text(self, text: str) -> np.ndarray: ...


def _feature_hash(feature: str) -> int:
    digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def normalize(vector: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        raise EmbeddingError("cannot normalize a zero vector")
    return vector / norm


class HashedProjectionEmbedder:
    """Built-in deterministic embedder (token unigrams + char trigrams)."""

    name = "hashed"

    def __init__(self, dimension: int = DEFAULT_DIMENSION, seed: int = 0):
        if dimension < 2:
            raise ValueError("dimension must be >= 2")
        self.dimension = dimension
        self.seed = seed
        self._basis_cache: dict[str, np.ndarray] = {}

    def _basis(self, feature: str) -> np.ndarray:
        vec = self._basis_cache.get(feature)
        if vec is None:
            rng = np.random.default_rng((self.seed, _feature_hash(feature)))
            vec = rng.standard_normal(self.dimension)
            self._basis_cache[feature] = vec
        return vec

    def features(self, text: str) -> dict[str, float]:
        """Weighted feature counts; exposed so tests can brute-force cosines."""
        text = text.strip().lower()
        counts: dict[str, float] = {}
        for token in text.split():
            key = "w:" + token
            counts[key] = counts.get(key, 0.0) + TOKEN_WEIGHT
        padded = f" {text} "
        for i in range(len(padded) - 2):
            key = "c:" + padded[i:i + 3]
            counts[key] = counts.get(key, 0.0) + TRIGRAM_WEIGHT
        return counts

    def embed_text(self, text: str) -> np.ndarray:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        vector = np.zeros(self.dimension)
        for feature, weight in self.features(text).items():
            vector += weight * self._basis(feature)
        return normalize(vector)


class PrecomputedEmbedder:
    """Vectors imported from a file, keyed by triple id.

    Supports JSONL records {"triple_id": ..., "vector": [...]} or the binary
    format written by write_vectors_binary.  Vectors are normalized on load.
    Arbitrary query text cannot be embedded with this provider.
    """

    name = "file"

    def __init__(self, vectors: dict[str, np.ndarray]):
        if not vectors:
            raise EmbeddingError("no precomputed vectors provided")
        dims = {v.shape[0] for v in vectors.values()}
        if len(dims) != 1:
            raise EmbeddingError(f"inconsistent vector dimensions: {sorted(dims)}")
        self.dimension = dims.pop()
        self._vectors = {k: normalize(np.asarray(v, dtype=float))
                         for k, v in vectors.items()}

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "PrecomputedEmbedder":
        vectors: dict[str, np.ndarray] = {}
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                vectors[record["triple_id"]] = np.asarray(record["vector"], dtype=float)
        return cls(vectors)

    @classmethod
    def from_binary(cls, path: str | Path) -> "PrecomputedEmbedder":
        with Path(path).open("rb") as fh:
            header = json.loads(fh.readline().decode("utf-8"))
            dimension, count = header["dimension"], header["count"]
            vectors: dict[str, np.ndarray] = {}
            for _ in range(count):
                tid = fh.readline().decode("utf-8").strip()
                vectors[tid] = np.frombuffer(fh.read(dimension * 8), dtype="<f8").copy()
        return cls(vectors)

    def vector_for(self, triple_id: str) -> np.ndarray:
        try:
            return self._vectors[triple_id]
        except KeyError:
            raise EmbeddingError(f"no precomputed vector for triple {triple_id}") from None

    def missing_ids(self, triple_ids: list[str]) -> list[str]:
        return [tid for tid in triple_ids if tid not in self._vectors]

    def embed_text(self, text: str) -> np.ndarray:
        raise EmbeddingError(
            "the file provider only has vectors for known triples; "
            "text queries need the built-in or service provider"
        )


def write_vectors_binary(vectors: dict[str, np.ndarray], path: str | Path) -> None:
    items = sorted(vectors.items())
    dimension = items[0][1].shape[0]
    with Path(path).open("wb") as fh:
        fh.write((json.dumps({"dimension": dimension, "count": len(items)}) + "\n")
                 .encode("utf-8"))
        for tid, vec in items:
            fh.write((tid + "\n").encode("utf-8"))
            fh.write(np.asarray(vec, dtype="<f8").tobytes())


class HttpEmbeddingClient:
    """Client for an external embedding service.

    Protocol: POST {"text": ...} to /embed, response {"vector": [...]}.
    One retry on timeout, then a hard error; responses are normalized.
    """

    name = "service"

    def __init__(self, base_url: str, dimension: int, timeout: float = 10.0,
                 transport: Optional[httpx.BaseTransport] = None):
        self.dimension = dimension
        self._client = httpx.Client(base_url=base_url, timeout=timeout,
                                    transport=transport)

    def embed_text(self, text: str) -> np.ndarray:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        last_exc: Exception | None = None
        for attempt in range(2):
            try:
                response = self._client.post("/embed", json={"text": text})
                response.raise_for_status()
                vector = np.asarray(response.json()["vector"], dtype=float)
                if vector.shape[0] != self.dimension:
                    raise EmbeddingError(
                        f"service returned dimension {vector.shape[0]}, "
                        f"expected {self.dimension}"
                    )
                return normalize(vector)
            except httpx.TimeoutException as exc:
                last_exc = exc
                log.warning("embedding service timeout (attempt %d)", attempt + 1)
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                raise EmbeddingError(f"embedding service failed: {exc}") from exc
        raise EmbeddingError(f"embedding service timed out twice: {last_exc}")

    def close(self) -> None:
        self._client.close()
