# tests/test_models.py

import dataclasses
import math

import pytest

from waterslide.core.models import (
    BoundResult,
    ChannelPoint,
    ClassicalScheme,
    GapSpec,
    IterationBounds,
    QuadraticCoeffs,
    RunConfig,
    SchemeOptimum,
    TechnologyWeights,
    TestChannel,
    Tolerances,
    WaterslidePoint,
)


def test_models_are_frozen():
    pt = ChannelPoint("awgn", 1.0)
    with pytest.raises(dataclasses.FrozenInstanceError):
        pt.snr = 2.0  # type: ignore[misc]


def test_tolerances_validation():
    assert Tolerances().max_iter == 200
    with pytest.raises(ValueError):
        Tolerances(abs_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(max_iter=0)


def test_channel_point_validation():
    with pytest.raises(ValueError):
        ChannelPoint("fiber", 1.0)  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        ChannelPoint("awgn", -1.0)
    with pytest.raises(ValueError):
        ChannelPoint("awgn", math.inf)
    with pytest.raises(ValueError):
        ChannelPoint("awgn", 1.0, crossover_override=0.1)
    with pytest.raises(ValueError):
        ChannelPoint("bsc", 1.0, crossover_override=0.6)
    assert ChannelPoint("bsc", 1.0).physical


def test_test_channel_needs_exactly_one_parameter():
    assert TestChannel(g=0.2).kind == "bsc"
    assert TestChannel(var_ratio=1.5).parameter == 1.5
    with pytest.raises(ValueError):
        TestChannel()
    with pytest.raises(ValueError):
        TestChannel(g=0.2, var_ratio=1.5)
    with pytest.raises(ValueError):
        TestChannel(var_ratio=0.5)


def test_technology_weights_from_raw():
    """86 dB path loss with 1 pJ nodes at 4e-21 J noise gives gamma near 0.31."""
    w = TechnologyWeights.from_raw(e_node=1e-12, sigma_p2=4e-21, xi_t=86.0, xi_t_in_db=True)
    assert w.alpha == 4.0
    assert w.gamma == pytest.approx(1e-12 / (4e-21 * 10**8.6 * 2.0))
    assert w.xi_t == pytest.approx(10**8.6)


def test_technology_weights_reject_inconsistent_raw_fields():
    with pytest.raises(ValueError):
        TechnologyWeights(gamma=1.0, xi_t=1.0, xi_d=1.0, e_node=1.0, sigma_p2=1.0)
    with pytest.raises(ValueError):
        TechnologyWeights(gamma=1.0, xi_t=1.0)
    with pytest.raises(ValueError):
        TechnologyWeights(gamma=0.0)
    with pytest.raises(ValueError):
        TechnologyWeights(gamma=1.0, alpha=1.5)


def test_bound_result_rejects_positive_log():
    with pytest.raises(ValueError):
        BoundResult(n=1.0, log2_pe_bound=0.5, opt_test_channel=None, delta=0.1)
    res = BoundResult(n=1.0, log2_pe_bound=-math.inf, opt_test_channel=None, delta=0.0)
    assert res.log2_pe_bound == -math.inf


def test_iteration_bounds_ordering():
    with pytest.raises(ValueError):
        IterationBounds(l_lower=3.0, l_upper=2.0, alpha=4.0)


def test_waterslide_point_sentinel_and_db():
    pt = WaterslidePoint(1e-6, 10.0, 100.0, 3.3, 1.0, 100.0)
    assert pt.snr_db == pytest.approx(10.0)
    assert pt.total_db == pytest.approx(20.0)
    bad = WaterslidePoint.infeasible(1e-6)
    assert not bad.feasible
    assert math.isnan(bad.total_norm)


def test_classical_scheme_validation():
    assert ClassicalScheme("viterbi", 0.5).is_convolutional
    assert not ClassicalScheme("block_ml", 0.5).is_convolutional
    with pytest.raises(ValueError):
        ClassicalScheme("turbo", 0.5)  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        ClassicalScheme("viterbi", 1.0)
    with pytest.raises(ValueError):
        ClassicalScheme("viterbi", 0.5, exponent="expurgated")  # type: ignore[arg-type]


def test_scheme_optimum_rounds_size_up():
    opt = SchemeOptimum(ClassicalScheme("block_ml", 0.5), 1e-6, 2.0, 12.2, 1.0, 3.0)
    assert opt.size_rounded == 13
    exact = SchemeOptimum(ClassicalScheme("block_ml", 0.5), 1e-6, 2.0, 12.0, 1.0, 3.0)
    assert exact.size_rounded == 12


def test_quadratic_coeffs_defaults():
    q = QuadraticCoeffs(a=1.0, b=0.0, c=-1.0, kind="bsc")
    assert q.details == {} and q.taylor == {}


def test_gap_spec_default_exponent():
    assert GapSpec(gap=1e-3).r_effective == pytest.approx(0.81)
    assert GapSpec(gap=1e-3, beta=0.5).r_effective == pytest.approx(0.405)
    assert GapSpec(gap=1e-3, beta=0.5, balanced=True).r_effective == pytest.approx(0.81)
    assert GapSpec(gap=1e-3, r=0.5).r_effective == 0.5
    with pytest.raises(ValueError):
        GapSpec(gap=0.0)
    with pytest.raises(ValueError):
        GapSpec(gap=1e-3, r=1.0)


def test_run_config_validation():
    cfg = RunConfig("waterslide")
    assert cfg.points == 30 and cfg.workers == 1
    with pytest.raises(ValueError):
        RunConfig("waterslide", pe_min=1e-2, pe_max=1e-3)
    with pytest.raises(ValueError):
        RunConfig("waterslide", points=1)
    with pytest.raises(ValueError):
        RunConfig("waterslide", variant="exact")  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        RunConfig("boundscan", n_min=0.5)
    with pytest.raises(ValueError):
        RunConfig("classical", scheme="turbo")  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        RunConfig("classical", exponent="expurgated")  # type: ignore[arg-type]
