import numpy as np
import pytest

from huffcat import (
    DuplicateKeyError,
    EmptyDistributionError,
    InvalidWeightError,
    MutableCategorical,
    OutOfRangeError,
    build_cdf,
    cdf_sample,
    leaf_intervals,
)
from huffcat.baseline import cdf_sample_indices, check_coverage, interval_boundaries

from conftest import DISTS, random_tree


class TestCdf:
    def test_single(self):
        t = build_cdf([("A", 1.0)])
        assert t.cumulative.tolist() == [1.0]

    def test_prefix_sums(self):
        t = build_cdf([("A", 1), ("B", 2), ("C", 3)])
        assert t.cumulative.tolist() == [1.0, 3.0, 6.0]
        assert t.total == 6.0 and len(t) == 3

    def test_duplicate(self):
        with pytest.raises(DuplicateKeyError):
            build_cdf([("A", 1), ("A", 2)])

    def test_invalid_weight(self):
        with pytest.raises(InvalidWeightError):
            build_cdf([("A", 1), ("B", 0)])

    @pytest.mark.parametrize("u, key", [(0.0, "A"), (0.999, "A"), (1.0, "B"), (2.5, "B"),
                                        (3.0, "C"), (5.999, "C")])
    def test_sample(self, u, key):
        t = build_cdf([("A", 1), ("B", 2), ("C", 3)])
        assert cdf_sample(t, u) == key
        assert t.keys[cdf_sample_indices(t, [u])[0]] == key

    @pytest.mark.parametrize("u", [-0.1, 6.0, 7.0])
    def test_out_of_range(self, u):
        t = build_cdf([("A", 1), ("B", 2), ("C", 3)])
        with pytest.raises(OutOfRangeError):
            cdf_sample(t, u)


class TestLeafIntervals:
    def test_single(self):
        d = MutableCategorical.from_items([("A", 0.7)])
        assert leaf_intervals(d) == [("A", 0.0, 0.7)]

    def test_first_child_owns_low_end(self):
        d = MutableCategorical.from_items([("A", 1.0), ("B", 2.0)])
        assert leaf_intervals(d) == [("A", 0.0, 1.0), ("B", 1.0, 3.0)]

    def test_nested(self):
        d = MutableCategorical.from_items([("A", 0.9), ("B", 0.05), ("C", 0.5)])
        got = leaf_intervals(d)
        assert [k for k, _, _ in got] == ["A", "B", "C"]
        np.testing.assert_allclose([lo for _, lo, _ in got], [0.0, 0.9, 0.95])
        np.testing.assert_allclose([hi for _, _, hi in got], [0.9, 0.95, 1.45])

    def test_empty(self):
        with pytest.raises(EmptyDistributionError):
            leaf_intervals(MutableCategorical())

    @pytest.mark.parametrize("dist", DISTS)
    def test_coverage_and_widths(self, rng, dist):
        for _ in range(20):
            tree = random_tree(rng, int(rng.integers(1, 600)), dist, churn=200)
            ivs = leaf_intervals(tree)
            assert check_coverage(ivs, tree.total_weight) == []
            assert sorted(k for k, _, _ in ivs) == sorted(tree)
            # widths match weights up to rounding at the scale of the total
            for key, lo, hi in ivs:
                assert abs((hi - lo) - tree.weight_of(key)) <= 1e-9 * tree.total_weight

    @pytest.mark.parametrize("rotations", [False, True])
    def test_tree_walk_matches_intervals(self, rng, rotations):
        for _ in range(10):
            tree = random_tree(rng, int(rng.integers(1, 300)), rotations=rotations, churn=300)
            ivs = leaf_intervals(tree)
            bounds = interval_boundaries(ivs)
            us = rng.random(20_000) * tree.total_weight
            near = np.min(np.abs(us[:, None] - bounds[None, :]), axis=1) <= np.spacing(tree.total_weight)
            us = us[~near]
            idx = np.searchsorted(bounds[:-1], us, side="right") - 1
            expected = [ivs[i][0] for i in idx]
            assert tree.sample_many(us) == expected
            table = build_cdf((k, hi - lo) for k, lo, hi in ivs)
            assert [table.keys[i] for i in cdf_sample_indices(table, us)] == expected
