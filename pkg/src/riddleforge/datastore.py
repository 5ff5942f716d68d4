"""The context datastore: unit vectors paired with their triple provenance.

Built once over a whole corpus and read-only afterwards, so concurrent
queries need no locking.  Every entry keeps (property, concept, triple id)
alongside its vector; neighbour lookups therefore return provenance
directly instead of re-parsing contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .embedding import EmbeddingError, PrecomputedEmbedder
from .kdtree import KDTree, linear_scan
from .triples import Triple

UNIT_NORM_TOLERANCE = 1e-6


class DatastoreError(ValueError):
    pass


@dataclass(frozen=True)
class DatastoreEntry:
    vector: np.ndarray
    property: str
    concept_id: str
    triple_id: str


@dataclass(frozen=True)
class Neighbor:
    distance: float
    entry: DatastoreEntry


@dataclass(frozen=True)
class NeighborResult:
    neighbors: tuple[Neighbor, ...]
    short_result: bool = False

    def concept_ids(self) -> list[str]:
        return [n.entry.concept_id for n in self.neighbors]


def get_concept(entry: DatastoreEntry) -> str:
    """Concept provenance of a datastore entry."""
    return entry.concept_id


class Datastore:
    def __init__(self, entries: list[DatastoreEntry], provider,
                 max_distance: Optional[float] = None):
        if not entries:
            raise DatastoreError("datastore needs at least one entry")
        dims = {e.vector.shape[0] for e in entries}
        if len(dims) != 1:
            raise DatastoreError(f"inconsistent embedding dimensions: {sorted(dims)}")
        for e in entries:
            norm = float(np.linalg.norm(e.vector))
            if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
                raise DatastoreError(
                    f"entry {e.triple_id} is not unit norm (|v| = {norm})")
        self.entries = entries
        self.provider = provider
        self.max_distance = max_distance
        self.dimension = dims.pop()
        self._matrix = np.stack([e.vector for e in entries])
        self._ids = [e.triple_id for e in entries]
        self._row_of = {tid: row for row, tid in enumerate(self._ids)}
        if len(self._row_of) != len(entries):
            raise DatastoreError("duplicate triple ids in datastore")
        self._tree = KDTree(self._matrix, self._ids)

    def __len__(self) -> int:
        return len(self.entries)

    def vector_of(self, triple_id: str) -> np.ndarray:
        return self._matrix[self._row_of[triple_id]]

    def _assemble(self, hits: list[tuple[float, int]], k: int) -> NeighborResult:
        if self.max_distance is not None:
            hits = [(d, row) for d, row in hits if d <= self.max_distance]
        neighbors = tuple(Neighbor(distance=d, entry=self.entries[row])
                          for d, row in hits)
        return NeighborResult(neighbors=neighbors, short_result=len(neighbors) < k)

    def query_vector(self, vector: np.ndarray, k: int = 5,
                     exclude: Iterable[str] = (), method: str = "kdtree"
                     ) -> NeighborResult:
        if k < 1:
            raise ValueError("k must be >= 1")
        rows = frozenset(self._row_of[tid] for tid in exclude if tid in self._row_of)
        if method == "kdtree":
            hits = self._tree.query(vector, k, rows)
        elif method == "linear":
            hits = linear_scan(self._matrix, self._ids, vector, k, rows)
        else:
            raise ValueError(f"unknown query method {method!r}")
        return self._assemble(hits, k)

    def query_context(self, context: str, k: int = 5, exclude: Iterable[str] = (),
                      method: str = "kdtree") -> NeighborResult:
        return self.query_vector(self.provider.embed_text(context), k, exclude, method)

    def query_for_triple(self, triple_id: str, k: int = 5,
                         include_self: bool = False, method: str = "kdtree"
                         ) -> NeighborResult:
        """Neighbours of a stored triple's own context.

        Uses the stored vector, so this works with every provider including
        file-imported vectors.  The triple's own entry is excluded unless
        include_self is set.
        """
        vector = self.vector_of(triple_id)
        exclude = () if include_self else (triple_id,)
        return self.query_vector(vector, k, exclude, method)


def build_datastore(triples: list[Triple], provider,
                    max_distance: Optional[float] = None) -> Datastore:
    """One entry per triple, embedding each anonymized context."""
    if not triples:
        raise DatastoreError("cannot build a datastore from zero triples")
    if isinstance(provider, PrecomputedEmbedder):
        missing = provider.missing_ids([t.id for t in triples])
        if missing:
            raise EmbeddingError(
                f"precomputed vectors missing for {len(missing)} triples: "
                + ", ".join(missing[:10]))
        vectors = [provider.vector_for(t.id) for t in triples]
    else:
        vectors = [provider.embed_text(t.context) for t in triples]
    entries = [
        DatastoreEntry(vector=vec, property=t.property,
                       concept_id=t.concept_id, triple_id=t.id)
        for t, vec in zip(triples, vectors)
    ]
    return Datastore(entries, provider, max_distance=max_distance)
