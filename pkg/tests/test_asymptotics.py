# tests/test_asymptotics.py

import math

import numpy as np
import pytest

from waterslide.core.errors import InfeasibleRegionError
from waterslide.core.models import ChannelPoint, GapSpec, QuadraticCoeffs
from waterslide.services import asymptotics
from waterslide.services.bounds import min_neighborhood
from waterslide.services.channels import bsc_point_from_crossover, capacity
from waterslide.services.numerics import binary_entropy

GAPS = np.logspace(-5, -3, 5)


# ─── gap arithmetic ─────────────────────────────────────────────────────────────


def test_gap_decomposition_examples():
    assert asymptotics.gap_decomposition(0.5, 0.4, 0.0) == pytest.approx((0.0, 0.1))
    rd, code = asymptotics.gap_decomposition(0.5, 0.4, 0.11)
    assert rd == pytest.approx(0.5 / (1.0 - binary_entropy(0.11)) - 0.5)
    assert code == pytest.approx(0.1)


def test_gap_decomposition_rejects_rate_above_effective_capacity():
    with pytest.raises(ValueError):
        asymptotics.gap_decomposition(0.5, 0.9, 1e-3)
    with pytest.raises(ValueError):
        asymptotics.gap_decomposition(0.5, 0.4, 0.5)


def test_balanced_pe_equalizes_both_gaps():
    cap, gap = 0.531, 1e-3
    pe = asymptotics.balanced_pe(cap, gap)
    rd, code = asymptotics.gap_decomposition(cap, cap - gap, pe)
    assert rd == pytest.approx(code, rel=1e-8)


def test_quadratic_sqrt_n_lower():
    assert asymptotics.quadratic_sqrt_n_lower(QuadraticCoeffs(1.0, 0.0, -4.0, "bsc")) == pytest.approx(4.0)
    assert asymptotics.quadratic_sqrt_n_lower(QuadraticCoeffs(1.0, 1.0, 1.0, "bsc")) == 0.0
    with pytest.raises(ValueError):
        asymptotics.quadratic_sqrt_n_lower(QuadraticCoeffs(0.0, 1.0, -1.0, "bsc"))


# ─── coefficients ───────────────────────────────────────────────────────────────


def test_bsc_coefficients_match_small_gap_expansion():
    q = asymptotics.bsc_gap_coeffs(GapSpec(gap=1e-5, r=0.5), 0.1)
    assert q.kind == "bsc"
    assert q.details["g_star"] == pytest.approx(0.1 + 1e-5**0.5)
    assert q.a > 0 and q.b > 0 and q.c < 0
    for key, exact in (("a", q.a), ("b", q.b), ("delta", q.details["delta"]), ("log_fraction", q.details["log_fraction"])):
        assert q.taylor[key] / exact == pytest.approx(1.0, abs=0.05), key


def test_awgn_coefficients_match_small_gap_expansion():
    q = asymptotics.awgn_gap_coeffs(GapSpec(gap=1e-5, r=0.5), 1.0)
    assert q.details["var_ratio"] == pytest.approx(1.0 + 4.0 * 1e-5**0.5)
    for key, exact in (("a", q.a), ("b", q.b), ("delta", q.details["delta"])):
        assert q.taylor[key] / exact == pytest.approx(1.0, abs=0.05), key


def test_gap_coefficients_infeasible_test_channel():
    with pytest.raises(InfeasibleRegionError):
        asymptotics.bsc_gap_coeffs(GapSpec(gap=0.3, r=0.05), 0.1)
    with pytest.raises(InfeasibleRegionError):
        asymptotics.bsc_gap_coeffs(GapSpec(gap=1e-3, r=0.99), 0.45)
    with pytest.raises(ValueError):
        asymptotics.bsc_gap_coeffs(GapSpec(gap=0.6), 0.1)


def test_balanced_target_used_in_coefficients():
    spec = GapSpec(gap=1e-3, balanced=True)
    q = asymptotics.bsc_gap_coeffs(spec, 0.1)
    cap = capacity(bsc_point_from_crossover(0.1))
    assert q.details["target_pe"] == pytest.approx(asymptotics.balanced_pe(cap, 1e-3))


def test_bsc_quadratic_bound_is_dominated_by_brute_force():
    p, gap = 0.1, 1e-3
    q = asymptotics.bsc_gap_coeffs(GapSpec(gap=gap, r=0.5), p)
    n_quad = asymptotics.quadratic_sqrt_n_lower(q)
    n_brute = min_neighborhood(q.details["rate"], bsc_point_from_crossover(p), q.details["target_pe"])
    assert n_quad > 1.0
    assert n_brute >= n_quad * (1 - 1e-3)


def test_awgn_quadratic_bound_is_dominated_by_brute_force():
    snr, gap = 1.0, 1e-3
    q = asymptotics.awgn_gap_coeffs(GapSpec(gap=gap, r=0.5), snr)
    n_quad = asymptotics.quadratic_sqrt_n_lower(q)
    n_brute = min_neighborhood(
        q.details["rate"], ChannelPoint("awgn", snr), q.details["target_pe"], variant="asymptotic"
    )
    assert n_brute >= n_quad * (1 - 1e-3)


# ─── curves and slopes ──────────────────────────────────────────────────────────


def test_fitted_slope_of_power_law():
    curve = [(g, g**-2.0) for g in (1e-4, 1e-3, 1e-2, 1e-1)]
    assert asymptotics.fitted_slope(curve) == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        asymptotics.fitted_slope(curve[:3])
    with pytest.raises(ValueError):
        asymptotics.fitted_slope(curve[:3] + [(0.5, math.nan)])


def test_n_vs_gap_curve_marks_gaps_beyond_capacity():
    curve = asymptotics.n_vs_gap_curve([1e-3, 0.9], kind="bsc")
    assert math.isfinite(curve[0].n)
    assert math.isnan(curve[1].n)


@pytest.fixture(scope="module")
def bsc_slopes():
    return {
        beta: asymptotics.fitted_slope(asymptotics.n_vs_gap_curve(GAPS, kind="bsc", beta=beta))
        for beta in (1.0, 0.5)
    }


def test_bsc_gap_slope_near_inverse_square(bsc_slopes):
    assert -2.5 <= bsc_slopes[1.0] <= -1.2


def test_bsc_gap_slope_flattens_with_looser_target(bsc_slopes):
    assert bsc_slopes[1.0] < bsc_slopes[0.5] < 0.0


def test_awgn_gap_slope():
    curve = asymptotics.n_vs_gap_curve(GAPS, kind="awgn")
    assert all(math.isfinite(pt.n) for pt in curve)
    assert asymptotics.fitted_slope(curve) < -0.8


def test_balanced_curve_grows_as_gap_closes():
    curve = asymptotics.n_vs_gap_curve([1e-2, 1e-3, 1e-4], kind="bsc", balanced=True)
    ns = [pt.n for pt in curve]
    assert ns[0] < ns[1] < ns[2]
