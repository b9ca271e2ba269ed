# tests/test_bounds.py

import math

import numpy as np
import pytest
from scipy import special, stats

from waterslide.core.errors import InfeasibleRegionError
from waterslide.core.models import ChannelPoint
from waterslide.services import bounds
from waterslide.services.channels import bsc_point_from_crossover, min_snr_for_rate
from waterslide.services.numerics import LOG2E, binary_entropy_inv, kl_bernoulli, kl_gaussian_var

THIRD = 1.0 / 3.0


# ─── T, mu, phi ─────────────────────────────────────────────────────────────────


@pytest.mark.parametrize("n", [1.0, 5.0, 100.0, 1e6])
def test_t_of_n_matches_lambert_definition(n):
    x = -math.exp(-1.0) * 0.25 ** (1.0 / n)
    expected = -special.lambertw(x, -1).real - 1.0
    assert bounds.t_of_n(n) == pytest.approx(expected, rel=1e-6)
    assert bounds.t_of_n(n, "theorem") == pytest.approx(expected + 1.0, rel=1e-6)


def test_t_of_n_rejects_bad_input():
    with pytest.raises(ValueError):
        bounds.t_of_n(0.0)
    with pytest.raises(ValueError):
        bounds.t_of_n(5.0, "draft")  # type: ignore[arg-type]


def test_mu_of_n_dips_below_one_then_returns():
    mus = [bounds.mu_of_n(n) for n in (1.0, 10.0, 100.0)]
    assert mus[0] > mus[1] > 1.0 > mus[2]
    assert bounds.mu_of_n(1e10) == pytest.approx(1.0, abs=1e-3)


def test_phi_matches_lambert_definition():
    n, y = 10.0, 0.01
    x = -math.exp(-1.0) * (y / 2.0) ** (2.0 / n)
    expected = -n * (special.lambertw(x, -1).real + 1.0)
    assert bounds.phi(n, y) == pytest.approx(expected, rel=1e-9)
    assert bounds.phi(n, 2.0) == 0.0
    with pytest.raises(ValueError):
        bounds.phi(n, 0.0)


# ─── lower bounds ───────────────────────────────────────────────────────────────


def test_pe_floor_over_channel():
    assert bounds.pe_floor_over_channel(0.5, 0.25) == pytest.approx(0.110, abs=1e-3)
    with pytest.raises(ValueError):
        bounds.pe_floor_over_channel(0.5, 0.5)


def test_bsc_bound_at_zero_neighborhood():
    res = bounds.bsc_pe_lower(THIRD, 0.05, 0.0)
    assert res.log2_pe_bound == pytest.approx(-2.0)
    assert res.opt_test_channel.g == pytest.approx(0.5)


def test_bsc_pe_lower_at_domain_and_capacity_boundary():
    with pytest.raises(ValueError):
        bounds.bsc_pe_lower_at(0.01, THIRD, 0.05, 10.0)
    # at g = g_min the test channel has capacity equal to the rate
    g_min = 0.17395
    assert bounds.bsc_pe_lower_at(0.1, THIRD, 0.05, 10.0) == -math.inf
    assert bounds.bsc_pe_lower_at(0.3, THIRD, 0.05, 10.0) < bounds.bsc_pe_lower_at(0.3, THIRD, 0.05, 1.0)
    assert math.isfinite(bounds.bsc_pe_lower_at(g_min + 0.01, THIRD, 0.05, 10.0))


def test_bsc_sup_dominates_fixed_test_channels():
    n = 200.0
    res = bounds.bsc_pe_lower(THIRD, 0.05, n)
    for g in np.linspace(0.18, 0.5, 30):
        assert res.log2_pe_bound >= bounds.bsc_pe_lower_at(float(g), THIRD, 0.05, n) - 1e-6
    assert 0.0 < res.delta <= 1.0


@pytest.mark.parametrize("refine", [False, True])
def test_bsc_sup_agrees_with_pointwise_bound_at_its_maximizer(refine):
    res = bounds.bsc_pe_lower(THIRD, 0.05, 100.0, refine=refine)
    at_g = bounds.bsc_pe_lower_at(res.opt_test_channel.g, THIRD, 0.05, 100.0)
    assert res.log2_pe_bound == pytest.approx(at_g, rel=1e-9)


def test_bsc_bound_is_nonincreasing_in_n():
    ns = np.logspace(0, 9, 50)
    vals = [bounds.bsc_pe_lower(THIRD, 0.05, float(n)).log2_pe_bound for n in ns]
    assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))


def test_bsc_bound_decays_double_exponentially():
    ns = np.logspace(6, 9, 7)
    logs = [math.log2(-bounds.bsc_pe_lower(THIRD, 0.05, float(n)).log2_pe_bound) for n in ns]
    slope = np.polyfit(np.log2(ns), logs, 1)[0]
    assert slope == pytest.approx(1.0, abs=0.05)


def test_awgn_numeric_bound_decays_double_exponentially():
    ns = np.logspace(6, 9, 7)
    logs = [math.log2(-bounds.awgn_pe_lower_numeric(THIRD, 1.0, float(n)).log2_pe_bound) for n in ns]
    slope = np.polyfit(np.log2(ns), logs, 1)[0]
    assert slope == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize(
    "bound, ns",
    [
        (bounds.awgn_pe_lower_asymptotic, np.logspace(0, 9, 60)),
        (bounds.awgn_pe_lower_numeric, np.logspace(0, 7, 60)),
    ],
)
def test_awgn_bound_is_nonincreasing_in_n(bound, ns):
    vals = [bound(THIRD, 1.0, float(n)).log2_pe_bound for n in ns]
    assert all(b <= a + 1e-9 * max(1.0, abs(a)) for a, b in zip(vals, vals[1:]))


def test_bsc_exponent_converges_to_divergence_at_capacity_crossover():
    p = 0.05
    g_min = float(binary_entropy_inv(1.0 - THIRD))
    limit = float(kl_bernoulli(g_min, p))
    ns = [1e4, 1e6, 1e8, 1e10]
    results = [bounds.bsc_pe_lower(THIRD, p, n) for n in ns]
    errors = [abs(-res.log2_pe_bound / n - limit) for res, n in zip(results, ns)]
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert -results[-1].log2_pe_bound / ns[-1] == pytest.approx(limit, rel=1e-2)
    # the maximizing test crossover closes in on the capacity crossover from above
    gaps = [res.opt_test_channel.g - g_min for res in results]
    assert all(gap >= -1e-12 for gap in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_awgn_exponent_converges_to_divergence_at_capacity_variance():
    snr = 1.0
    v_min = snr / (2.0 ** (2.0 * THIRD) - 1.0)
    limit = float(kl_gaussian_var(v_min, 1.0)) * LOG2E
    ns = [1e4, 1e6, 1e8, 1e10, 1e12]
    results = [bounds.awgn_pe_lower_asymptotic(THIRD, snr, n) for n in ns]
    errors = [abs(-res.log2_pe_bound / n - limit) for res, n in zip(results, ns)]
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert -results[-1].log2_pe_bound / ns[-1] == pytest.approx(limit, rel=2e-2)
    ratios = [res.opt_test_channel.var_ratio for res in results]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(v_min, rel=1e-2)


@pytest.mark.parametrize("n", [1e3, 1e4, 1e5])
def test_awgn_numeric_form_is_sharper_than_asymptotic(n):
    num = bounds.awgn_pe_lower_numeric(THIRD, 1.0, n, refine=False)
    asym = bounds.awgn_pe_lower_asymptotic(THIRD, 1.0, n, refine=False)
    assert num.log2_pe_bound >= asym.log2_pe_bound
    assert num.opt_test_channel.var_ratio > 1.0


def test_pe_lower_bound_variant_selection():
    awgn = ChannelPoint("awgn", 1.0)
    small = bounds.pe_lower_bound(THIRD, awgn, 50.0, variant="auto")
    assert small.log2_pe_bound == pytest.approx(
        bounds.awgn_pe_lower_numeric(THIRD, 1.0, 50.0).log2_pe_bound
    )
    big = bounds.pe_lower_bound(THIRD, awgn, 1e7, variant="auto")
    assert big.log2_pe_bound == pytest.approx(
        bounds.awgn_pe_lower_asymptotic(THIRD, 1.0, 1e7).log2_pe_bound
    )
    combined = bounds.pe_lower_bound(THIRD, awgn, 50.0, variant="combined")
    assert combined.log2_pe_bound >= small.log2_pe_bound


def test_pe_lower_bound_combined_bsc_takes_trivial_floor():
    ch = bsc_point_from_crossover(0.3)
    plain = bounds.pe_lower_bound(0.05, ch, 2.0)
    combined = bounds.pe_lower_bound(0.05, ch, 2.0, variant="combined")
    assert combined.log2_pe_bound >= max(plain.log2_pe_bound, bounds.trivial_pe_lower(0.3, 2.0))


def test_trivial_bounds():
    assert bounds.trivial_pe_lower(0.25, 3.0) == pytest.approx(-6.0)
    assert bounds.trivial_neighborhood(0.25, 2.0**-6) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        bounds.trivial_neighborhood(0.5, 1e-3)


# ─── mapping functions ──────────────────────────────────────────────────────────


def _second_differences(values):
    arr = np.asarray(values, dtype=float)
    return arr[2:] - 2.0 * arr[1:-1] + arr[:-2]


def test_mapping_functions_reduce_to_identity_scale():
    assert bounds.bsc_mapping_f(0.2, 0.2, 0.1, 0.0) == pytest.approx(0.1)
    assert bounds.awgn_mapping_f(0.3, 1.0, 50.0) == pytest.approx(0.15)


def test_mapping_f_l_requires_ratio_above_mu():
    with pytest.raises(ValueError):
        bounds.awgn_mapping_f_l(0.1, 1.1, 1.0)
    assert bounds.awgn_mapping_f_l(0.1, 1.5, 1.0) < 0.05


def test_mapping_functions_are_convex():
    rng = np.random.default_rng(7)
    deltas = np.linspace(1e-3, 1.0, 1000)
    for _ in range(20):
        n = float(rng.uniform(1.0, 100.0))
        v = float(rng.uniform(1.3, 2.0))
        p = float(rng.uniform(0.01, 0.3))
        g = float(rng.uniform(p + 0.01, 0.49))
        for fn in (
            lambda d: bounds.awgn_mapping_f(d, v, n),
            lambda d: bounds.awgn_mapping_f_l(d, v, n),
            lambda d: bounds.bsc_mapping_f(d, g, p, n),
        ):
            vals = [fn(float(d)) for d in deltas]
            scale = max(vals)
            assert np.all(_second_differences(vals) >= -1e-9 * scale)


# ─── concentration bounds ───────────────────────────────────────────────────────


@pytest.mark.parametrize("g", [0.05, 0.15, 0.3, 0.45])
def test_chernoff_bsc_tail_dominates_binomial(g):
    for n in (1, 2, 5, 10, 20, 50, 100):
        for eps in (0.25, 0.5, 1.0, 2.0, 3.0):
            threshold = math.ceil(n * g + eps * math.sqrt(n))
            tail = stats.binom.sf(threshold - 1, n, g)
            assert tail <= bounds.chernoff_bsc_tail(g, eps) * (1 + 1e-9)


def test_chernoff_awgn_tail_dominates_chi_square():
    for n in range(1, 65):
        for e in (0.1, 0.5, 1.0, 3.0, 8.0):
            tail = stats.chi2.sf(n * (1.0 + e), n)
            res = bounds.chernoff_awgn_tail(n, e)
            assert tail <= res.chi2_bound * (1 + 1e-9)
            if res.affine_valid:
                assert tail <= res.affine_bound
    assert not bounds.chernoff_awgn_tail(4, 1.0).affine_valid
    assert bounds.chernoff_awgn_tail(4, 1.5).affine_valid


# ─── inversion ──────────────────────────────────────────────────────────────────


def test_min_neighborhood_matches_integer_search():
    ch = bsc_point_from_crossover(0.05)
    target = 1e-10
    n_star = bounds.min_neighborhood(THIRD, ch, target)
    log2_target = math.log2(target)

    lo, hi = 1, int(math.ceil(n_star)) + 5
    assert bounds.bsc_pe_lower(THIRD, 0.05, hi).log2_pe_bound <= log2_target
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bounds.bsc_pe_lower(THIRD, 0.05, mid).log2_pe_bound <= log2_target:
            hi = mid
        else:
            lo = mid
    assert abs(hi - n_star) <= 1.0


def test_min_neighborhood_reaches_target_exactly():
    ch = bsc_point_from_crossover(0.05)
    n_star = bounds.min_neighborhood(THIRD, ch, 1e-20)
    at = bounds.bsc_pe_lower(THIRD, 0.05, n_star).log2_pe_bound
    assert at == pytest.approx(math.log2(1e-20), abs=1e-3)


def test_min_neighborhood_below_threshold_is_unbounded():
    ch = bsc_point_from_crossover(0.2)
    assert bounds.min_neighborhood(THIRD, ch, 1e-6) == math.inf


def test_min_neighborhood_monotone_in_target_and_snr():
    thr = min_snr_for_rate(THIRD, "bsc")
    targets = [1e-3, 1e-10, 1e-30]
    ns = [bounds.min_neighborhood(THIRD, ChannelPoint("bsc", 2 * thr), t) for t in targets]
    assert ns[0] <= ns[1] <= ns[2]
    assert bounds.min_neighborhood(THIRD, ChannelPoint("bsc", 4 * thr), 1e-10) <= ns[1]
    assert all(n >= 1.0 for n in ns)


def test_min_neighborhood_is_deterministic():
    ch = ChannelPoint("bsc", 1.5)
    assert bounds.min_neighborhood(THIRD, ch, 1e-12) == bounds.min_neighborhood(THIRD, ch, 1e-12)


def test_min_neighborhood_awgn_variants_agree_in_order():
    thr = min_snr_for_rate(THIRD, "awgn")
    ch = ChannelPoint("awgn", 2 * thr)
    asym = bounds.min_neighborhood(THIRD, ch, 1e-6, variant="asymptotic")
    num = bounds.min_neighborhood(THIRD, ch, 1e-6, variant="numeric")
    combined = bounds.min_neighborhood(THIRD, ch, 1e-6, variant="combined")
    assert 1.0 <= asym <= num * (1 + 1e-6)
    assert combined == pytest.approx(max(asym, num), rel=1e-9)


def test_min_neighborhood_rejects_bad_target():
    with pytest.raises(ValueError):
        bounds.min_neighborhood(THIRD, ChannelPoint("bsc", 1.0), 0.5)


# ─── upper bound and iterations ─────────────────────────────────────────────────


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["bsc", "awgn"])
@pytest.mark.parametrize("rate", [0.1, 0.25, THIRD, 0.5, 0.7])
def test_upper_bound_dominates_lower_bound(kind, rate):
    for factor in (1.2, 1.5, 2.0, 3.0, 5.0):
        ch = ChannelPoint(kind, factor * min_snr_for_rate(rate, kind))
        for pe in (1e-3, 1e-6, 1e-12, 1e-30, 1e-60):
            upper = bounds.upper_bound_neighborhood(rate, ch, pe)
            lower = bounds.min_neighborhood(rate, ch, pe)
            assert upper >= lower, (factor, pe)


def test_upper_and_lower_bounds_stay_within_small_factor():
    ch = ChannelPoint("bsc", 1.5 * min_snr_for_rate(THIRD, "bsc"))
    ratio = bounds.upper_bound_neighborhood(THIRD, ch, 1e-30) / bounds.min_neighborhood(THIRD, ch, 1e-30)
    assert 1.0 <= ratio <= 4.0


def test_upper_bound_dominates_lower_bound_awgn():
    ch = ChannelPoint("awgn", 2 * min_snr_for_rate(THIRD, "awgn"))
    assert bounds.upper_bound_neighborhood(THIRD, ch, 1e-6) >= bounds.min_neighborhood(THIRD, ch, 1e-6)


def test_upper_bound_needs_rate_below_capacity():
    ch = bsc_point_from_crossover(0.2)
    with pytest.raises(InfeasibleRegionError):
        bounds.upper_bound_neighborhood(THIRD, ch, 1e-6)


def test_iteration_bounds():
    it = bounds.iteration_bounds(4.0**5, 4.0)
    assert it.l_lower == pytest.approx(5.0)
    assert it.l_upper == pytest.approx(12.0)
    with pytest.raises(ValueError):
        bounds.iteration_bounds(0.5, 4.0)
