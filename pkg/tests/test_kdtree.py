import numpy as np
import pytest

from riddleforge.kdtree import KDTree, linear_scan


def brute_force(points, ids, query, k, exclude_rows=frozenset()):
    """Reference implementation kept independent of the package: full
    distance matrix + lexicographic (distance, id) sort."""
    deltas = points - np.asarray(query)
    dist = np.sqrt(np.einsum("ij,ij->i", deltas, deltas))
    order = sorted(
        (i for i in range(points.shape[0]) if i not in exclude_rows),
        key=lambda i: (dist[i], ids[i]),
    )
    return [(float(dist[i]), i) for i in order[:k]]


def unit_rows(n, d, rng):
    rows = rng.standard_normal((n, d))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def assert_same_hits(got, expected, tol=1e-9):
    assert [row for _, row in got] == [row for _, row in expected]
    for (da, _), (db, _) in zip(got, expected):
        assert da == pytest.approx(db, abs=tol)


class TestKDTreeOracle:
    def test_matches_brute_force_on_random_data(self):
        rng = np.random.default_rng(7)
        points = unit_rows(400, 24, rng)
        ids = [f"id{i:04d}" for i in range(400)]
        tree = KDTree(points, ids)
        for _ in range(60):
            query = unit_rows(1, 24, rng)[0]
            assert_same_hits(tree.query(query, 5),
                             brute_force(points, ids, query, 5))

    def test_exclusions_honored(self):
        rng = np.random.default_rng(11)
        points = unit_rows(100, 8, rng)
        ids = [f"e{i}" for i in range(100)]
        tree = KDTree(points, ids)
        exclude = frozenset({0, 5, 50, 99})
        for row in range(0, 100, 7):
            got = tree.query(points[row], 6, exclude)
            assert not exclude.intersection(r for _, r in got)
            assert_same_hits(got, brute_force(points, ids, points[row], 6, exclude))

    def test_duplicate_points_tie_break_by_id(self):
        base = unit_rows(4, 6, np.random.default_rng(3))
        points = np.vstack([base, base, base])  # every point three times
        ids = [f"z{i:02d}" for i in range(12)]
        tree = KDTree(points, ids)
        got = tree.query(base[1], 5)
        assert_same_hits(got, brute_force(points, ids, base[1], 5))
        assert [r for _, r in got][:3] == [1, 5, 9]  # z01 < z05 < z09, all d=0

    def test_linear_scan_agrees_with_tree(self):
        rng = np.random.default_rng(23)
        points = unit_rows(256, 16, rng)
        ids = [f"p{i}" for i in range(256)]
        tree = KDTree(points, ids)
        for _ in range(25):
            q = unit_rows(1, 16, rng)[0]
            assert_same_hits(tree.query(q, 7), linear_scan(points, ids, q, 7))

    def test_k_larger_than_size_returns_all(self):
        points = unit_rows(3, 4, np.random.default_rng(0))
        tree = KDTree(points, ["a", "b", "c"])
        assert len(tree.query(points[0], 10)) == 3

    def test_single_point_tree(self):
        tree = KDTree(np.array([[1.0, 0.0]]), ["only"])
        assert tree.query(np.array([0.0, 1.0]), 1) == \
            [(pytest.approx(np.sqrt(2.0)), 0)]

    def test_distances_non_decreasing(self):
        rng = np.random.default_rng(5)
        points = unit_rows(200, 12, rng)
        tree = KDTree(points, [f"n{i}" for i in range(200)])
        for _ in range(20):
            q = unit_rows(1, 12, rng)[0]
            distances = [d for d, _ in tree.query(q, 9)]
            assert distances == sorted(distances)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            KDTree(np.zeros((0, 3)), [])
        with pytest.raises(ValueError):
            KDTree(np.zeros((2, 3)), ["one"])
        tree = KDTree(np.zeros((2, 3)), ["a", "b"])
        with pytest.raises(ValueError):
            tree.query(np.zeros(3), 0)

    def test_identical_rows_only(self):
        # All points identical: spread is zero in every dimension.
        points = np.tile(np.array([[0.5, 0.5]]), (6, 1))
        tree = KDTree(points, [f"s{i}" for i in range(6)])
        got = tree.query(np.array([0.5, 0.5]), 3)
        assert [r for _, r in got] == [0, 1, 2]
        assert all(d == 0.0 for d, _ in got)
