import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from detrelay.channels import (
    RatePoint,
    SnrDb,
    awgn_capacity,
    bc_weak_rate,
    det_bc_corners,
    det_bc_region_contains,
    det_level_count,
    det_mac_corners,
    det_mac_region_contains,
    gauss_bc_boundary,
    gauss_bc_region_contains,
    gauss_mac_boundary,
    gauss_mac_region_contains,
    within_one_bit_check,
)
from detrelay.errors import DomainError


def bc_grid_contains(s1, s2, p, step=1e-6):
    """Oracle: scan the power split on a fine grid."""
    alpha = np.linspace(0.0, 1.0, int(round(1 / step)) + 1)
    r1 = np.log2(1 + alpha * s1)
    r2 = np.log2(1 + (1 - alpha) * s2 / (alpha * s2 + 1))
    return bool(np.any((p.r1 <= r1 + 1e-12) & (p.r2 <= r2 + 1e-12)))


class TestLevels:
    @pytest.mark.parametrize("snr, n", [(1.0, 0), (16.0, 4), (0.5, 0), (17.0, 5), (2.0, 1), (3.0, 2)])
    def test_level_count_linear(self, snr, n):
        assert det_level_count(snr) == n

    def test_level_count_db(self):
        assert det_level_count(SnrDb(0.0)) == 0
        assert det_level_count(SnrDb(30.0)) == 10

    def test_awgn(self):
        assert awgn_capacity(1.0) == 1.0
        assert awgn_capacity(15.0) == 4.0
        assert awgn_capacity(0.0) == 0.0
        assert awgn_capacity(SnrDb(-300.0)) == pytest.approx(0.0, abs=1e-25)

    def test_snr_db(self):
        assert SnrDb(10.0).linear() == pytest.approx(10.0)
        assert SnrDb.from_linear(100.0).value == pytest.approx(20.0)
        with pytest.raises(DomainError):
            SnrDb(math.inf)

    def test_within_one_bit_dense(self):
        for db in np.arange(0.0, 60.0 + 1e-9, 0.01):
            s = SnrDb(float(db))
            assert abs(awgn_capacity(s) - det_level_count(s)) <= 1.0

    def test_rate_point_nonnegative(self):
        with pytest.raises(DomainError):
            RatePoint(-0.1, 0.0)


class TestDeterministicRegions:
    def test_mac(self):
        assert det_mac_region_contains(5, 2, RatePoint(3, 2))
        assert not det_mac_region_contains(5, 2, RatePoint(0, 3))
        assert det_mac_region_contains(0, 0, RatePoint(0, 0))

    def test_bc(self):
        assert det_bc_region_contains(5, 2, RatePoint(3, 2))
        assert not det_bc_region_contains(5, 2, RatePoint(5, 1))
        assert det_bc_region_contains(5, 2, RatePoint(5, 0))

    def test_label_order(self):
        with pytest.raises(DomainError, match="swap"):
            det_mac_region_contains(2, 5, RatePoint(0, 0))
        with pytest.raises(DomainError, match="swap"):
            det_bc_region_contains(2, 5, RatePoint(0, 0))

    def test_corners(self):
        assert det_mac_corners(5, 2) == [(0, 2), (3, 2), (5, 0)]
        assert det_bc_corners(5, 2) == [(0, 2), (3, 2), (5, 0)]
        assert det_mac_corners(3, 3) == [(0, 3), (3, 0)]


class TestGaussianRegions:
    def test_mac(self):
        assert gauss_mac_region_contains(1.0, 1.0, RatePoint(1, 0))
        assert not gauss_mac_region_contains(1.0, 1.0, RatePoint(1, 1))
        assert gauss_mac_region_contains(1.0, 1.0, RatePoint(0, 0))

    def test_bc_endpoints(self):
        s1, s2 = 40.0, 7.0
        assert gauss_bc_region_contains(s1, s2, RatePoint(math.log2(1 + s1), 0))
        assert gauss_bc_region_contains(s1, s2, RatePoint(0, math.log2(1 + s2)))
        assert not gauss_bc_region_contains(s1, s2, RatePoint(0, math.log2(1 + s2) + 1e-6))

    def test_bc_equal_snr(self):
        assert not gauss_bc_region_contains(3.0, 3.0, RatePoint(1.5, 1.5))
        assert not bc_grid_contains(3.0, 3.0, RatePoint(1.5, 1.5))
        assert gauss_bc_region_contains(3.0, 3.0, RatePoint(1.0, 1.0))

    def test_bc_label_order(self):
        with pytest.raises(DomainError):
            gauss_bc_region_contains(1.0, 2.0, RatePoint(0, 0))

    def test_bc_matches_grid_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            s2, s1 = sorted(10 ** rng.uniform(-1, 3, size=2))
            p = RatePoint(rng.uniform(0, math.log2(1 + s1)), rng.uniform(0, math.log2(1 + s2)))
            exact = gauss_bc_region_contains(s1, s2, p)
            # skip points within grid resolution of the boundary
            near = bc_grid_contains(s1, s2, RatePoint(p.r1 + 1e-4, p.r2 + 1e-4)) != bc_grid_contains(
                s1, s2, RatePoint(max(p.r1 - 1e-4, 0), max(p.r2 - 1e-4, 0))
            )
            if not near:
                assert exact == bc_grid_contains(s1, s2, p)

    def test_weak_rate_identity(self):
        for alpha in (0.0, 0.3, 1.0):
            s = 9.0
            direct = math.log2(1 + (1 - alpha) * s / (alpha * s + 1))
            assert bc_weak_rate(alpha, s) == pytest.approx(direct, abs=1e-12)

    def test_boundaries_lie_on_region_edge(self):
        for r1, r2 in gauss_mac_boundary(20.0, 5.0):
            assert gauss_mac_region_contains(20.0, 5.0, RatePoint(r1, r2))
            assert not gauss_mac_region_contains(20.0, 5.0, RatePoint(r1 + 1e-6, r2 + 1e-6))
        for r1, r2 in gauss_bc_boundary(20.0, 5.0):
            assert gauss_bc_region_contains(20.0, 5.0, RatePoint(r1, r2))
            assert not gauss_bc_region_contains(20.0, 5.0, RatePoint(r1 + 1e-6, r2 + 1e-6))


def _downward_cases():
    return st.tuples(
        st.floats(0.01, 1e4), st.floats(0.01, 1e4), st.floats(0, 12), st.floats(0, 12),
        st.floats(0, 1), st.floats(0, 1),
    )


class TestProperties:
    @given(_downward_cases())
    def test_gaussian_regions_downward_closed(self, case):
        a, b, r1, r2, f1, f2 = case
        s1, s2 = max(a, b), min(a, b)
        p, lower = RatePoint(r1, r2), RatePoint(r1 * f1, r2 * f2)
        if gauss_mac_region_contains(s1, s2, p):
            assert gauss_mac_region_contains(s1, s2, lower)
        if gauss_bc_region_contains(s1, s2, p):
            assert gauss_bc_region_contains(s1, s2, lower)

    @given(st.integers(0, 12), st.integers(0, 12), st.floats(0, 12), st.floats(0, 12), st.floats(0, 1), st.floats(0, 1))
    def test_det_regions_downward_closed(self, a, b, r1, r2, f1, f2):
        n1, n2 = max(a, b), min(a, b)
        p, lower = RatePoint(r1, r2), RatePoint(r1 * f1, r2 * f2)
        if det_mac_region_contains(n1, n2, p):
            assert det_mac_region_contains(n1, n2, lower)
        if det_bc_region_contains(n1, n2, p):
            assert det_bc_region_contains(n1, n2, lower)


class TestWithinOneBit:
    def test_mac_corner(self):
        n1, n2 = 5, 2
        s1, s2 = 2.0**n1, 2.0**n2
        corner = RatePoint(n1 - n2, n2)
        assert det_mac_region_contains(n1, n2, corner)
        assert within_one_bit_check(corner, lambda p: gauss_mac_region_contains(s1, s2, p))

    def test_trivial_points(self):
        assert within_one_bit_check(RatePoint(0, 0), lambda p: gauss_mac_region_contains(1.0, 1.0, p))
        assert within_one_bit_check(RatePoint(1, 0), lambda p: gauss_bc_region_contains(1.0, 1.0, p))

    def test_witness_is_clamped(self):
        seen = []
        within_one_bit_check(RatePoint(0.5, 3.0), lambda p: seen.append(p) or True)
        assert seen == [RatePoint(0.0, 2.0)]
