"""Exact k-nearest-neighbour search with id-based tie-breaking.

A KD-tree over row vectors.  Queries return the k rows minimizing Euclidean
distance, ordered by (distance, id); ids also break exact distance ties so
results are reproducible.  Rows can be excluded per query, which is how a
triple's own datastore entry is kept out of its neighbourhood.
"""

from __future__ import annotations

from bisect import insort

import numpy as np

_LEAF_SIZE = 16


class _Node:
    __slots__ = ("mins", "maxs", "dim", "threshold", "left", "right", "indices")

    def __init__(self, mins, maxs):
        self.mins = mins
        self.maxs = maxs
        self.dim = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.indices = None


class KDTree:
    def __init__(self, points: np.ndarray, ids: list[str], leaf_size: int = _LEAF_SIZE):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[0] == 0:
            raise ValueError("points must be a non-empty 2-D array")
        if len(ids) != points.shape[0]:
            raise ValueError("one id per point required")
        self.points = points
        self.ids = list(ids)
        self.leaf_size = max(1, leaf_size)
        self.size = points.shape[0]
        self._root = self._build(np.arange(self.size))

    def _build(self, indices: np.ndarray) -> _Node:
        rows = self.points[indices]
        node = _Node(rows.min(axis=0), rows.max(axis=0))
        spread = node.maxs - node.mins
        dim = int(np.argmax(spread))
        if len(indices) <= self.leaf_size or spread[dim] == 0.0:
            node.indices = indices
            return node
        values = rows[:, dim]
        threshold = float(np.median(values))
        mask = values <= threshold
        # A median equal to the maximum would leave the right side empty.
        if mask.all():
            mask = values < threshold
        node.dim = dim
        node.threshold = threshold
        node.left = self._build(indices[mask])
        node.right = self._build(indices[~mask])
        return node

    @staticmethod
    def _box_min_sq(node: _Node, query: np.ndarray) -> float:
        below = np.maximum(node.mins - query, 0.0)
        above = np.maximum(query - node.maxs, 0.0)
        return float(np.sum(below * below) + np.sum(above * above))

    def query(self, query: np.ndarray, k: int,
              exclude_rows: frozenset[int] = frozenset()
              ) -> list[tuple[float, int]]:
        """The k nearest rows as (distance, row) ordered by (distance, id)."""
        if k < 1:
            raise ValueError("k must be >= 1")
        query = np.asarray(query, dtype=float)
        best: list[tuple[float, str, int]] = []  # (dist_sq, id, row), sorted

        def scan_leaf(indices: np.ndarray) -> None:
            for row in indices:
                row = int(row)
                if row in exclude_rows:
                    continue
                diff = self.points[row] - query
                entry = (float(np.dot(diff, diff)), self.ids[row], row)
                if len(best) < k:
                    insort(best, entry)
                elif entry < best[-1]:
                    insort(best, entry)
                    best.pop()

        def visit(node: _Node) -> None:
            if len(best) == k and self._box_min_sq(node, query) > best[-1][0]:
                return
            if node.indices is not None:
                scan_leaf(node.indices)
                return
            if query[node.dim] <= node.threshold:
                near, far = node.left, node.right
            else:
                near, far = node.right, node.left
            visit(near)
            visit(far)

        visit(self._root)
        return [(float(np.sqrt(d)), row) for d, _, row in best]


def linear_scan(points: np.ndarray, ids: list[str], query: np.ndarray, k: int,
                exclude_rows: frozenset[int] = frozenset()
                ) -> list[tuple[float, int]]:
    """Brute-force reference with the same contract as KDTree.query."""
    query = np.asarray(query, dtype=float)
    candidates = []
    for row in range(points.shape[0]):
        if row in exclude_rows:
            continue
        diff = points[row] - query
        candidates.append((float(np.dot(diff, diff)), ids[row], row))
    candidates.sort()
    return [(float(np.sqrt(d)), row) for d, _, row in candidates[:k]]
