import math

import numpy as np
import pytest
from hypothesis import given
from scipy.spatial.distance import directed_hausdorff

from conftest import coords, line_sets, plane_sets
from symprod import (
    DimensionMismatchError,
    EmptyInputError,
    MetricSampler,
    NonFiniteCoordinateError,
    canonicalize,
    from_values,
    hausdorff_distance,
    pointset_from_doc,
    product_distance,
    union,
)

import hypothesis.strategies as st


def hausdorff_oracle(a, b):
    """Independent path: scipy's directed Hausdorff in both directions."""
    return max(
        directed_hausdorff(a.array, b.array)[0],
        directed_hausdorff(b.array, a.array)[0],
    )


class TestCanonicalize:
    def test_duplicates_removed(self):
        assert canonicalize([[1], [1], [0]], 1).points == ((0.0,), (1.0,))

    def test_singleton_identity(self):
        assert canonicalize([[2, 3]], 2).points == ((2.0, 3.0),)

    def test_already_canonical(self):
        assert canonicalize([[0], [0.5], [1]], 1).points == ((0.0,), (0.5,), (1.0,))

    def test_empty_rejected(self):
        with pytest.raises(EmptyInputError):
            canonicalize([], 1)

    def test_nan_rejected(self):
        with pytest.raises(NonFiniteCoordinateError):
            canonicalize([[float("nan")]], 1)
        with pytest.raises(NonFiniteCoordinateError):
            canonicalize([[float("inf"), 0.0]], 2)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            canonicalize([[1, 2]], 1)

    def test_negative_zero_normalized(self):
        assert canonicalize([[-0.0]], 1).points == ((0.0,),)

    @given(st.lists(coords, min_size=1, max_size=6))
    def test_idempotent_and_order_blind(self, values):
        a = from_values(values)
        b = from_values(list(reversed(values)))
        assert a == b
        assert canonicalize(a.points, 1) == a

    def test_lexicographic_order_in_plane(self):
        a = canonicalize([[1, 5], [0, 9], [1, 2]], 2)
        assert a.points == ((0.0, 9.0), (1.0, 2.0), (1.0, 5.0))


class TestHausdorff:
    def test_identical_sets(self):
        a = from_values([0])
        assert hausdorff_distance(a, a) == 0.0

    def test_two_pairs(self):
        assert hausdorff_distance(from_values([0, 1]), from_values([0, 3])) == 2.0

    def test_singleton_vs_pair(self):
        assert hausdorff_distance(from_values([0]), from_values([1, 2])) == 2.0

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            hausdorff_distance(from_values([0]), canonicalize([[0, 0]], 2))

    @given(plane_sets(), plane_sets())
    def test_matches_scipy_oracle(self, a, b):
        assert hausdorff_distance(a, b) == pytest.approx(hausdorff_oracle(a, b), rel=1e-12)

    @given(line_sets(), line_sets())
    def test_symmetry(self, a, b):
        assert hausdorff_distance(a, b) == hausdorff_distance(b, a)

    @given(line_sets(), line_sets(), line_sets())
    def test_triangle_inequality(self, a, b, c):
        dab = hausdorff_distance(a, b)
        dbc = hausdorff_distance(b, c)
        dac = hausdorff_distance(a, c)
        assert dac <= dab + dbc + 1e-9 * (1.0 + dab + dbc)

    @given(line_sets(), line_sets())
    def test_zero_iff_identical(self, a, b):
        if hausdorff_distance(a, b) == 0.0:
            assert a.points == b.points
        else:
            assert a.points != b.points

    @given(plane_sets(), plane_sets(), st.tuples(coords, coords))
    def test_translation_invariance(self, a, b, v):
        d0 = hausdorff_distance(a, b)
        d1 = hausdorff_distance(a.translate(v), b.translate(v))
        assert abs(d0 - d1) <= 1e-12 * max(1.0, d0)

    @given(line_sets(), line_sets(), st.floats(-50, 50, allow_nan=False))
    def test_scaling(self, a, b, t):
        d0 = hausdorff_distance(a, b)
        d1 = hausdorff_distance(a.scale(t), b.scale(t))
        assert d1 == pytest.approx(abs(t) * d0, rel=1e-9, abs=1e-9)


class TestProductDistance:
    def test_zero(self):
        same = lambda x, y: abs(x - y)
        assert product_distance((1.0, 2.0), (1.0, 2.0), (same, same)) == 0.0

    def test_pythagorean(self):
        d = product_distance((0.0, 0.0), (3.0, 4.0), (lambda x, y: abs(x - y),) * 2)
        assert d == 5.0

    def test_degenerate_factor(self):
        d = product_distance((0.0, 0.0), (1.0, 0.0), (lambda x, y: abs(x - y),) * 2)
        assert d == 1.0

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            product_distance((1.0,), (1.0, 2.0), (lambda x, y: 0.0,))


class TestJsonDocs:
    def test_round_trip(self):
        a = canonicalize([[0.5, -1.0], [2.0, 3.0]], 2)
        assert pointset_from_doc(a.to_doc()) == a

    def test_schema_errors(self):
        from symprod import SchemaError

        for bad in [{}, {"dim": "x", "points": []}, {"dim": 1, "points": "zz"}, 42]:
            with pytest.raises(SchemaError):
                pointset_from_doc(bad)


class TestUnion:
    def test_union_merges(self):
        u = union(from_values([0, 1]), from_values([1, 2]))
        assert u.points == ((0.0,), (1.0,), (2.0,))


class TestSampler:
    def test_same_seed_same_stream(self):
        s1 = MetricSampler(seed=42, dim=2, capacity=4)
        s2 = MetricSampler(seed=42, dim=2, capacity=4)
        for (a1, b1), (a2, b2) in zip(s1.pairs(10), s2.pairs(10)):
            assert a1 == a2 and b1 == b2

    def test_respects_capacity_and_dim(self):
        s = MetricSampler(seed=1, dim=3, capacity=5)
        for a in s.sets(50):
            assert a.dim == 3 and 1 <= len(a) <= 5

    def test_pinned_sets_are_pinned(self):
        s = MetricSampler(seed=1, dim=1, capacity=4, pinned=True)
        for a, b in s.pairs(50):
            for x in (a, b):
                assert x.min_value() == 0.0 and x.max_value() == 1.0
                assert len(x) <= 4
