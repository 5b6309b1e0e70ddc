import numpy as np
import pytest
from hypothesis import given

from conftest import line_sets
from symprod import (
    BadRangeError,
    CapacityExceededError,
    MetricSampler,
    from_values,
    hausdorff_distance,
    min_gap,
    retract_once,
    retract_to,
)

import hypothesis.strategies as st


def moved_values(a, n):
    """The pre-canonicalization slide values; oracle for internal structure."""
    delta = min_gap(a, n).delta
    out = []
    for j, v in enumerate(a.values(), start=1):
        out.append(min(0.0, v + (n - j) * delta) if v <= 0 else max(0.0, v - j * delta))
    return out


class TestMinGap:
    def test_hand_example(self):
        prof = min_gap(from_values([0, 5, 6]), 3)
        assert prof.delta == 1.0
        assert prof.gap_index == 2  # gap between 5 and 6

    def test_small_set_convention(self):
        prof = min_gap(from_values([2]), 3)
        assert prof.delta == 0.0 and prof.gap_index is None

    def test_single_gap(self):
        assert min_gap(from_values([0, 1]), 2).delta == 1.0

    def test_capacity(self):
        with pytest.raises(CapacityExceededError):
            min_gap(from_values([0, 1, 2]), 2)

    def test_smallest_index_wins_on_tie(self):
        assert min_gap(from_values([0, 1, 2]), 3).gap_index == 1


class TestRetractOnce:
    def test_positive_example(self):
        assert retract_once(from_values([0, 5, 6]), 3).points == ((0.0,), (3.0,))

    def test_negative_example(self):
        assert retract_once(from_values([-6, -5, 0]), 3).points == ((-4.0,), (0.0,))

    def test_small_sets_fixed_exactly(self):
        a = from_values([2])
        assert retract_once(a, 3) is a

    def test_capacity_and_range(self):
        with pytest.raises(CapacityExceededError):
            retract_once(from_values([0, 1, 2, 3]), 3)
        with pytest.raises(BadRangeError):
            retract_once(from_values([0]), 1)

    @given(line_sets(5))
    def test_cardinality_drops_at_full_capacity(self, a):
        n = len(a)
        if n >= 2:
            assert len(retract_once(a, n)) <= n - 1

    @given(line_sets(5))
    def test_slide_values_sorted_and_hull_bounded(self, a):
        n = len(a)
        if n < 2:
            return
        vals = moved_values(a, n)
        slack = 1e-12 * max(1.0, max(abs(v) for v in a.values()))
        assert all(x <= y + slack for x, y in zip(vals, vals[1:]))
        lo, hi = min(0.0, a.min_value()), max(0.0, a.max_value())
        out = retract_once(a, n)
        assert all(lo <= v <= hi for v in out.values())

    @given(line_sets(5))
    def test_displacement_bound(self, a):
        n = len(a)
        if n < 2:
            return
        delta = min_gap(a, n).delta
        assert hausdorff_distance(a, retract_once(a, n)) <= n * delta + 1e-12


class TestRetractTo:
    def test_iterated_to_singleton(self):
        out = retract_to(from_values([0, 5, 6]), 3, 1)
        assert out.points == ((0.0,),)

    def test_fixes_small_inputs(self):
        a = from_values([3, 9])
        assert retract_to(a, 5, 2) is a

    def test_pair_to_singleton(self):
        assert retract_to(from_values([0, 1]), 2, 1).points == ((0.0,),)

    def test_bad_range(self):
        a = from_values([0, 1])
        for n, k in [(2, 2), (2, 0), (2, 3)]:
            with pytest.raises(BadRangeError):
                retract_to(a, n, k)

    def test_output_cardinality(self):
        sampler = MetricSampler(seed=3, dim=1, capacity=5)
        for a in sampler.sets(100):
            assert len(retract_to(a, 5, 2)) <= 2


class TestLipschitzBounds:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_gap_and_map_bounds_on_samples(self, n):
        sampler = MetricSampler(seed=10 + n, dim=1, capacity=n)
        for a, b in sampler.pairs(500):
            dh = hausdorff_distance(a, b)
            da, db = min_gap(a, n).delta, min_gap(b, n).delta
            assert abs(da - db) <= 2.0 * dh + 1e-12
            if dh > 1e-12:
                dr = hausdorff_distance(retract_once(a, n), retract_once(b, n))
                assert dr <= (6.0 * n + 1.0) * dh

    def test_gap_bound_across_cardinalities(self):
        # |A| = n against |B| < n forces delta(A) <= 2 d_H by pigeonhole
        a = from_values([0.0, 1.0, 2.0])
        b = from_values([0.0, 2.0])
        assert abs(min_gap(a, 3).delta - min_gap(b, 3).delta) <= 2 * hausdorff_distance(a, b)
