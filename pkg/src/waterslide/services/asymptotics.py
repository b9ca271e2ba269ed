"""
waterslide.asymptotics
======================

Gap-to-capacity analysis: the split of the total gap into a rate-distortion
part and a code part, quadratic-in-``sqrt(n)`` lower bounds built from an
explicit test channel placed ``gap**r`` away from the physical channel, and
brute-force neighborhood-size versus gap curves with log-log slope fits.

BSC quadratics are in bits, AWGN quadratics in nats. Each ``QuadraticCoeffs``
carries the exact intermediate quantities in ``details`` and their small-gap
approximations in ``taylor``.
"""

import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import InfeasibleRegionError
from ..core.models import BoundVariant, ChannelKind, ChannelPoint, GapSpec, QuadraticCoeffs
from .bounds import min_neighborhood
from .channels import bsc_point_from_crossover, capacity
from .numerics import (
    LN2,
    binary_entropy,
    binary_entropy_inv,
    chernoff_k,
    kl_bernoulli,
    kl_gaussian_var,
    positive_quadratic_root,
)

logger = logging.getLogger(__name__)

DEFAULT_BSC_CROSSOVER = 0.1
DEFAULT_AWGN_CAPACITY = 0.531
DEFAULT_AWGN_SNR = math.expm1(2.0 * DEFAULT_AWGN_CAPACITY * LN2)


class GapPoint(NamedTuple):
    """One point of an n-versus-gap curve; ``n`` is NaN when infeasible."""

    gap: float
    n: float


# ─── GAP ARITHMETIC ─────────────────────────────────────────────────────────────


def gap_decomposition(capacity_bits: float, rate: float, pe: float) -> Tuple[float, float]:
    """
    Split ``C/(1 - h_b(pe)) - R`` into its two parts.

    Returns
    -------
    tuple
        ``(rd_gap, code_gap) = (C/(1-h_b(pe)) - C, C - R)``.

    Raises
    ------
    ValueError
        If ``pe`` is outside [0, 1/2) or ``rate`` exceeds ``C/(1-h_b(pe))``.
    """
    if not 0.0 <= pe < 0.5:
        raise ValueError("pe must lie in [0, 0.5)")
    if not capacity_bits > 0:
        raise ValueError("capacity must be > 0")
    effective = capacity_bits / (1.0 - float(binary_entropy(pe)))
    if rate > effective * (1.0 + 1e-15):
        raise ValueError(f"rate {rate:g} exceeds C/(1-h_b(pe)) = {effective:g}")
    return effective - capacity_bits, capacity_bits - rate


def balanced_pe(capacity_bits: float, gap: float) -> float:
    """Error probability at which the rate-distortion gap equals ``gap``: ``h_b(pe) = gap/(C+gap)``."""
    if not capacity_bits > 0 or not gap > 0:
        raise ValueError("capacity and gap must be > 0")
    return float(binary_entropy_inv(gap / (capacity_bits + gap)))


def _target_pe(spec: GapSpec, capacity_bits: float) -> float:
    if spec.balanced:
        return balanced_pe(capacity_bits, spec.gap)
    return spec.gap**spec.beta


def quadratic_sqrt_n_lower(coeffs: QuadraticCoeffs) -> float:
    """
    Neighborhood bound from ``a*n + b*sqrt(n) + c >= 0``.

    The larger root in ``sqrt(n)``, squared; 0 when the roots are complex.
    """
    if not coeffs.a > 0:
        raise ValueError("a must be > 0")
    root = float(positive_quadratic_root(coeffs.a, coeffs.b, coeffs.c))
    return root * root


# ─── COEFFICIENTS ───────────────────────────────────────────────────────────────


def bsc_gap_coeffs(spec: GapSpec, p: float) -> QuadraticCoeffs:
    """
    Exact quadratic coefficients for the BSC at test crossover ``g* = p + gap^r``.

    ``a = D(g*||p)``, ``b = eps * log2(g*(1-p)/(p(1-g*)))`` and
    ``c = log2(Pe) - log2(h_b^{-1}(delta(g*))) + 1``, all in bits.

    Raises
    ------
    InfeasibleRegionError
        If ``g*`` leaves (p, 1/2) or ``C(g*) >= R``.
    """
    if not 0.0 < p < 0.5:
        raise ValueError("p must lie in (0, 0.5)")
    cap = capacity(bsc_point_from_crossover(p))
    rate = cap - spec.gap
    if not rate > 0:
        raise ValueError(f"gap {spec.gap:g} is not below capacity {cap:g}")
    r = spec.r_effective
    offset = spec.gap**r
    g_star = p + offset
    if not g_star < 0.5:
        raise InfeasibleRegionError(f"test crossover {g_star:g} is not below 1/2")
    delta = 1.0 - (1.0 - float(binary_entropy(g_star))) / rate
    if not delta > 0:
        raise InfeasibleRegionError(f"C(g*) >= R at gap={spec.gap:g}, r={r:g}")

    pe = _target_pe(spec, cap)
    y = float(binary_entropy_inv(delta))
    eps = math.sqrt(math.log2(2.0 / y) / chernoff_k(g_star))
    log_fraction = math.log2(g_star * (1.0 - p) / (p * (1.0 - g_star)))
    a = float(kl_bernoulli(g_star, p))
    b = eps * log_fraction
    c = math.log2(pe) - math.log2(y) + 1.0

    variance = p * (1.0 - p)
    delta_approx = math.log2((1.0 - p) / p) * offset / cap
    lf_approx = offset / (variance * LN2)
    y_approx = float(binary_entropy_inv(min(delta_approx, 1.0)))
    taylor = {
        "a": offset * offset / (2.0 * variance * LN2),
        "log_fraction": lf_approx,
        "delta": delta_approx,
        "b": math.sqrt(math.log2(2.0 / y_approx) / chernoff_k(p)) * lf_approx,
    }
    details = {
        "g_star": g_star,
        "rate": rate,
        "r": r,
        "target_pe": pe,
        "delta": delta,
        "y": y,
        "eps": eps,
        "log_fraction": log_fraction,
    }
    return QuadraticCoeffs(a=a, b=b, c=c, kind="bsc", details=details, taylor=taylor)


def awgn_gap_coeffs(spec: GapSpec, snr: float) -> QuadraticCoeffs:
    """
    Exact quadratic coefficients for the AWGN channel, in nats.

    The test noise ratio is ``v = 1 + gap^r * 2 (snr + 1) / snr``; then
    ``a = D(v)``, ``b = (3/2 + 2 ln 2 - 2 ln y)(v - 1)`` and
    ``c = ln(Pe) - ln(y) + ln 2`` with ``y = h_b^{-1}(delta(G*))``.

    Raises
    ------
    InfeasibleRegionError
        If ``C(G*) >= R``.
    """
    if not snr > 0:
        raise ValueError("snr must be > 0")
    cap = 0.5 * math.log2(1.0 + snr)
    rate = cap - spec.gap
    if not rate > 0:
        raise ValueError(f"gap {spec.gap:g} is not below capacity {cap:g}")
    r = spec.r_effective
    offset = spec.gap**r
    excess = offset * 2.0 * (snr + 1.0) / snr
    v = 1.0 + excess
    test_cap = 0.5 * math.log2(1.0 + snr / v)
    delta = 1.0 - test_cap / rate
    if not delta > 0:
        raise InfeasibleRegionError(f"C(G*) >= R at gap={spec.gap:g}, r={r:g}")

    pe = _target_pe(spec, cap)
    y = float(binary_entropy_inv(min(delta, 1.0)))
    a = float(kl_gaussian_var(v, 1.0))
    b = (1.5 + 2.0 * LN2 - 2.0 * math.log(y)) * excess
    c = math.log(pe) - math.log(y) + LN2

    delta_approx = offset / (cap * LN2)
    y_approx = float(binary_entropy_inv(min(delta_approx, 1.0)))
    taylor = {
        "a": ((snr + 1.0) / snr) ** 2 * offset * offset,
        "delta": delta_approx,
        "b": (1.5 + 2.0 * LN2 - 2.0 * math.log(y_approx)) * excess,
    }
    details = {
        "var_ratio": v,
        "rate": rate,
        "r": r,
        "target_pe": pe,
        "delta": delta,
        "y": y,
        "test_capacity": test_cap,
    }
    return QuadraticCoeffs(a=a, b=b, c=c, kind="awgn", details=details, taylor=taylor)


# ─── CURVES ─────────────────────────────────────────────────────────────────────


def base_channel(kind: ChannelKind, p: Optional[float] = None, snr: Optional[float] = None) -> ChannelPoint:
    """Fixed channel of a gap scan: BSC at crossover ``p`` or AWGN at ``snr``."""
    if kind == "bsc":
        return bsc_point_from_crossover(DEFAULT_BSC_CROSSOVER if p is None else p)
    return ChannelPoint("awgn", DEFAULT_AWGN_SNR if snr is None else snr)


def n_vs_gap_curve(
    gap_grid: Sequence[float],
    kind: ChannelKind = "bsc",
    beta: float = 1.0,
    balanced: bool = False,
    p: Optional[float] = None,
    snr: Optional[float] = None,
    variant: BoundVariant = "auto",
) -> List[GapPoint]:
    """
    Brute-force neighborhood size versus gap at a fixed channel.

    Each point inverts the full test-channel bound at ``rate = C - gap`` and
    ``Pe = gap**beta`` (or the balanced Pe). Points whose rate or Pe leave
    the valid range, or whose bound is unbounded, are NaN sentinels.
    """
    channel = base_channel(kind, p, snr)
    cap = capacity(channel)
    curve: List[GapPoint] = []
    for gap in gap_grid:
        gap = float(gap)
        rate = cap - gap
        if not 0.0 < gap < cap:
            logger.warning("Skipping gap=%g outside (0, C=%g)", gap, cap)
            curve.append(GapPoint(gap, math.nan))
            continue
        pe = balanced_pe(cap, gap) if balanced else gap**beta
        if not 0.0 < pe < 0.5:
            logger.warning("Target pe=%g out of range at gap=%g", pe, gap)
            curve.append(GapPoint(gap, math.nan))
            continue
        try:
            n = min_neighborhood(rate, channel, pe, variant=variant)
        except InfeasibleRegionError as e:
            logger.warning("Infeasible gap point %g: %s", gap, e)
            n = math.nan
        curve.append(GapPoint(gap, n if math.isfinite(n) else math.nan))
    return curve


def fitted_slope(curve: Sequence[Tuple[float, float]]) -> float:
    """
    Least-squares slope of ``log2 n`` against ``log2 gap``.

    Raises
    ------
    ValueError
        With fewer than 4 points, non-positive values, or a single gap.
    """
    pts = np.asarray([(float(g), float(n)) for g, n in curve], dtype=float)
    if pts.shape[0] < 4:
        raise ValueError("need at least 4 points")
    if not np.all(np.isfinite(pts)) or np.any(pts <= 0):
        raise ValueError("gaps and sizes must be finite and > 0")
    x = np.log2(pts[:, 0])
    if np.ptp(x) == 0:
        raise ValueError("gaps must not all be equal")
    slope, _ = np.polyfit(x, np.log2(pts[:, 1]), 1)
    return float(slope)
