import math

import numpy as np
import pytest

from symprod import (
    ConePoint,
    DiameterViolationError,
    NegativeParameterError,
    check_cone_comparison,
    cone_distance,
    cone_distance_classic,
    euclidean_cone_lift,
)


def euclid(x, y):
    return float(np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))


def sample_space(rng, count=12, radius=0.9):
    """Points in a disk of diameter <= 2 with the origin at index 0."""
    r = radius * np.sqrt(rng.uniform(0, 1, count - 1))
    phi = rng.uniform(0, 2 * math.pi, count - 1)
    return np.vstack([[0.0, 0.0], np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)])


class TestConeDistance:
    def test_same_base_point(self):
        x = (0.3, 0.4)
        assert cone_distance(ConePoint(2, x), ConePoint(5, x), euclid) == 3.0

    def test_apex_identification(self):
        assert cone_distance(ConePoint(0, (0, 0)), ConePoint(0, (1, 0)), euclid) == 0.0

    def test_equal_parameters(self):
        d = cone_distance(ConePoint(1, (0.0, 0.0)), ConePoint(1, (1.5, 0.0)), euclid)
        assert d == 1.5

    def test_negative_parameter(self):
        with pytest.raises(NegativeParameterError):
            ConePoint(-0.1, (0, 0))

    def test_lower_bound_by_parameter_gap(self):
        rng = np.random.default_rng(0)
        pts = sample_space(rng)
        for _ in range(300):
            i, j = rng.integers(len(pts), size=2)
            t1, t2 = rng.uniform(0, 3, size=2)
            d = cone_distance(ConePoint(t1, tuple(pts[i])), ConePoint(t2, tuple(pts[j])), euclid)
            assert d >= abs(t1 - t2)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(1)
        pts = sample_space(rng)
        for _ in range(2000):
            idx = rng.integers(len(pts), size=3)
            ts = rng.uniform(0, 3, size=3)
            p = [ConePoint(float(t), tuple(pts[i])) for t, i in zip(ts, idx)]
            d13 = cone_distance(p[0], p[2], euclid)
            d12 = cone_distance(p[0], p[1], euclid)
            d23 = cone_distance(p[1], p[2], euclid)
            assert d13 <= d12 + d23 + 1e-12

    def test_equal_parameter_scaling_is_exact(self):
        rng = np.random.default_rng(2)
        pts = sample_space(rng)
        for _ in range(200):
            i, j = rng.integers(len(pts), size=2)
            t = float(rng.uniform(0, 4))
            d = cone_distance(ConePoint(t, tuple(pts[i])), ConePoint(t, tuple(pts[j])), euclid)
            assert d == pytest.approx(t * euclid(pts[i], pts[j]), abs=1e-12)


class TestClassicConeDistance:
    def test_identical_points(self):
        assert cone_distance_classic(ConePoint(1, (0, 0)), ConePoint(1, (0, 0)), euclid) == 0.0

    def test_same_base_collapses_to_parameter_gap(self):
        x = (0.2, 0.7)
        d = cone_distance_classic(ConePoint(0.5, x), ConePoint(2.5, x), euclid)
        assert d == pytest.approx(2.0, abs=1e-12)

    def test_law_of_cosines_value(self):
        # frozen from direct evaluation: sqrt(2 - 2 cos 2) = 1.68294196961...
        p, q = ConePoint(1, (0.0,)), ConePoint(1, (2.0,))
        d = cone_distance_classic(p, q, euclid)
        assert d == pytest.approx(math.sqrt(2.0 - 2.0 * math.cos(2.0)), rel=1e-15)
        assert d == pytest.approx(1.6829419696157930, rel=1e-12)

    def test_diameter_contract(self):
        with pytest.raises(DiameterViolationError):
            cone_distance_classic(ConePoint(1, (0.0,)), ConePoint(1, (2.1,)), euclid)


class TestEuclideanLift:
    def test_apex_maps_to_extra_basis_vector(self):
        v = euclidean_cone_lift(ConePoint(0, None), [0.3, 0.4])
        assert list(v) == [0.0, 0.0, 1.0]

    def test_t_one_recovers_base_slice(self):
        v = euclidean_cone_lift(ConePoint(1, None), [0.3, 0.4])
        assert list(v) == [0.3, 0.4, 0.0]

    def test_t_two(self):
        v = euclidean_cone_lift(ConePoint(2, None), [0.3, 0.4])
        assert list(v) == [0.6, 0.8, -1.0]

    def test_lift_metric_satisfies_comparison_hypotheses(self):
        rng = np.random.default_rng(3)
        pts = sample_space(rng)
        for _ in range(500):
            i, j = rng.integers(len(pts), size=2)
            t1, t2 = rng.uniform(0, 3, size=2)
            l1 = euclidean_cone_lift(ConePoint(t1, None), pts[i])
            l2 = euclidean_cone_lift(ConePoint(t2, None), pts[j])
            rho = float(np.linalg.norm(l1 - l2))
            # exact scaling on equal parameters
            if t1 == t2:
                assert rho == pytest.approx(t1 * euclid(pts[i], pts[j]), abs=1e-12)
            # parameter gap lower bound
            assert rho >= abs(t1 - t2) - 1e-12
            # same-base upper bound at the printed constant 10
            l2_same = euclidean_cone_lift(ConePoint(t2, None), pts[i])
            assert float(np.linalg.norm(l1 - l2_same)) <= 10.0 * abs(t1 - t2) + 1e-12


class TestComparisonReport:
    def test_one_point_space_gives_unit_ratios(self):
        rep = check_cone_comparison([[0.0, 0.0]], 500, seed=7)
        assert rep.max_ratio == pytest.approx(1.0, abs=1e-12)
        assert rep.min_ratio == pytest.approx(1.0, abs=1e-12)

    def test_bounds_hold_on_disk_sample(self):
        rng = np.random.default_rng(5)
        rep = check_cone_comparison(sample_space(rng, count=20), 4000, seed=9)
        assert rep.bound_10_ok and rep.max_ratio <= 10.0
        assert rep.bound_12_ok and rep.min_ratio >= 1.0 / 12.0

    def test_diameter_violation(self):
        with pytest.raises(DiameterViolationError):
            check_cone_comparison([[0.0, 0.0], [3.0, 0.0]], 10, seed=0)

    def test_report_keys(self):
        rep = check_cone_comparison([[0.0, 0.0], [0.5, 0.0]], 100, seed=1)
        assert set(rep.to_dict()) == {
            "max_ratio",
            "min_ratio",
            "pairs_tested",
            "bound_10_ok",
            "bound_12_ok",
            "seed",
        }

    def test_deterministic_for_seed(self):
        pts = [[0.0, 0.0], [0.4, 0.1], [-0.2, 0.6]]
        r1 = check_cone_comparison(pts, 300, seed=11)
        r2 = check_cone_comparison(pts, 300, seed=11)
        assert r1 == r2
