"""
waterslide.optimizer
====================

Joint minimization of transmit plus decoding power under the neighborhood
lower bounds, waterslide curve generation, the asymptotic optimal transmit
SNR and the uncoded-versus-coded threshold.

Decoding power is normalized to the receiver noise, so a point costs::

    total = snr + gamma * log2(n)

with ``n`` the smallest neighborhood the bounds allow at that SNR. The outer
search scans 64 log-spaced SNRs over ``[threshold (1 + 1e-9), threshold * 1e3]``
and refines the best cell with a bounded Brent search on ``log snr``.
"""

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, List, Sequence

import numpy as np
from scipy import optimize

from ..core.errors import InfeasibleRateWarning, InfeasibleRegionError
from ..core.models import (
    BoundVariant,
    ChannelKind,
    ChannelPoint,
    TechnologyWeights,
    WaterslidePoint,
)
from .bounds import iteration_bounds, min_neighborhood, upper_bound_neighborhood
from .channels import (
    crossover_from_snr,
    min_snr_for_rate,
    shannon_waterfall_snr,
)
from .classical import repetition_pe
from .numerics import binary_entropy_inv, kl_bernoulli, kl_gaussian_var, refine_grid_minimum

logger = logging.getLogger(__name__)

SEARCH_GRID_POINTS = 64
SNR_MAX_FACTOR = 1e3
INFEASIBLE_PENALTY = 1e300
FD_STEP = 1e-6
FIXED_POINT_DAMPING = 0.5


# ─── TOTAL POWER ────────────────────────────────────────────────────────────────


def _minimize_total(
    neighborhood: Callable[[float], float],
    gamma: float,
    threshold: float,
    label: str,
) -> float:
    """Return the SNR minimizing ``snr + gamma * log2(neighborhood(snr))``."""
    log_lo = math.log(threshold * (1.0 + 1e-9))
    log_hi = math.log(threshold * SNR_MAX_FACTOR)
    grid = np.linspace(log_lo, log_hi, SEARCH_GRID_POINTS)

    def objective(u: float) -> float:
        snr = math.exp(u)
        try:
            n = neighborhood(snr)
        except InfeasibleRegionError:
            return INFEASIBLE_PENALTY
        if not math.isfinite(n):
            return INFEASIBLE_PENALTY
        return snr + gamma * math.log2(n)

    values = np.array([objective(u) for u in grid])
    if not np.any(values < INFEASIBLE_PENALTY):
        logger.error("Target unreachable for %s up to snr=%g", label, math.exp(log_hi))
        raise InfeasibleRegionError(f"{label}: target unreachable up to snr={math.exp(log_hi):g}")
    u_best, _ = refine_grid_minimum(objective, grid, values, xatol=1e-10)
    return math.exp(u_best)


def _make_point(
    target_pe: float,
    snr: float,
    n: float,
    iterations: float,
    decode_power: float,
    integer_iterations: bool,
    weights: TechnologyWeights,
) -> WaterslidePoint:
    if integer_iterations:
        iterations = float(math.ceil(iterations - 1e-12))
        decode_power = weights.gamma * math.log2(weights.alpha) * iterations
    return WaterslidePoint(
        target_pe=target_pe,
        snr_transmit=snr,
        n=n,
        iterations=iterations,
        decode_power_norm=decode_power,
        total_norm=snr + decode_power,
    )


def total_power_lower(
    rate: float,
    weights: TechnologyWeights,
    target_pe: float,
    kind: ChannelKind,
    variant: BoundVariant = "auto",
    integer_iterations: bool = False,
) -> WaterslidePoint:
    """
    Lower bound on total power at a target error probability.

    Parameters
    ----------
    rate : float
        Code rate.
    weights : TechnologyWeights
        ``gamma`` and ``alpha``.
    target_pe : float
        Target bit-error probability in (0, 1/2).
    kind : {"bsc", "awgn"}
        Channel family.
    variant : BoundVariant, default "auto"
        Lower-bound selection passed to ``min_neighborhood``.
    integer_iterations : bool, default False
        Round the iteration count up and recompute the decoding power.

    Returns
    -------
    WaterslidePoint
        Minimizing operating point.

    Raises
    ------
    InfeasibleRegionError
        If the target is unreachable over the whole SNR range.
    """
    if not 0.0 < target_pe < 0.5:
        raise ValueError("target_pe must lie in (0, 0.5)")
    threshold = min_snr_for_rate(rate, kind)

    def neighborhood(snr: float, refine: bool = False) -> float:
        return min_neighborhood(rate, ChannelPoint(kind, snr), target_pe, variant=variant, refine=refine)

    snr = _minimize_total(neighborhood, weights.gamma, threshold, f"{kind} waterslide at pe={target_pe:g}")
    n = neighborhood(snr, refine=True)
    if not math.isfinite(n):
        raise InfeasibleRegionError(f"neighborhood unbounded at the optimum (pe={target_pe:g})")
    iterations = iteration_bounds(n, weights.alpha).l_lower
    decode = weights.gamma * math.log2(n)
    logger.debug("pe=%g: snr=%g n=%g total=%g", target_pe, snr, n, snr + decode)
    return _make_point(target_pe, snr, n, iterations, decode, integer_iterations, weights)


def total_power_upper(
    rate: float,
    weights: TechnologyWeights,
    target_pe: float,
    kind: ChannelKind,
    integer_iterations: bool = False,
) -> WaterslidePoint:
    """
    Achievable counterpart of ``total_power_lower``.

    Uses the random-coding neighborhood ``log2(1/Pe) / E_r`` and the upper
    iteration count ``2 log_alpha(n) + 2``; decoding power is
    ``gamma * log2(alpha) * iterations``.
    """
    if not 0.0 < target_pe < 0.5:
        raise ValueError("target_pe must lie in (0, 0.5)")
    threshold = min_snr_for_rate(rate, kind)

    def neighborhood(snr: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", InfeasibleRateWarning)
            n = max(1.0, upper_bound_neighborhood(rate, ChannelPoint(kind, snr), target_pe))
        # equivalent n whose log2 is log2(alpha) * l_upper
        bounds = iteration_bounds(n, weights.alpha)
        return 2.0 ** (math.log2(weights.alpha) * bounds.l_upper)

    snr = _minimize_total(neighborhood, weights.gamma, threshold, f"{kind} upper curve at pe={target_pe:g}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InfeasibleRateWarning)
        n = max(1.0, upper_bound_neighborhood(rate, ChannelPoint(kind, snr), target_pe))
    iterations = iteration_bounds(n, weights.alpha).l_upper
    decode = weights.gamma * math.log2(weights.alpha) * iterations
    return _make_point(target_pe, snr, n, iterations, decode, integer_iterations, weights)


# ─── CURVES ─────────────────────────────────────────────────────────────────────


def _check_pe_grid(pe_grid: Sequence[float]) -> List[float]:
    grid = [float(pe) for pe in pe_grid]
    if not grid:
        raise ValueError("pe_grid is empty")
    if any(not 0.0 < pe < 0.5 for pe in grid):
        raise ValueError("pe_grid values must lie in (0, 0.5)")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise ValueError("pe_grid must be strictly decreasing")
    return grid


def _curve_point(
    target_pe: float,
    solver: Callable[..., WaterslidePoint],
    **kwargs,
) -> WaterslidePoint:
    try:
        return solver(target_pe=target_pe, **kwargs)
    except InfeasibleRegionError as e:
        logger.warning("Infeasible point at pe=%g: %s", target_pe, e)
        return WaterslidePoint.infeasible(target_pe)


def _run_curve(grid: List[float], func: Callable[[float], WaterslidePoint], workers: int) -> List[WaterslidePoint]:
    if workers <= 1 or len(grid) == 1:
        return [func(pe) for pe in grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, grid))


def waterslide_curve(
    rate: float,
    weights: TechnologyWeights,
    pe_grid: Sequence[float],
    kind: ChannelKind,
    variant: BoundVariant = "auto",
    integer_iterations: bool = False,
    workers: int = 1,
) -> List[WaterslidePoint]:
    """
    Lower-bound waterslide curve: ``total_power_lower`` along ``pe_grid``.

    Infeasible points come back as ``WaterslidePoint.infeasible`` rows. With
    ``workers > 1`` points are computed in a process pool; output order
    always follows ``pe_grid``.
    """
    grid = _check_pe_grid(pe_grid)
    func = partial(
        _curve_point,
        solver=total_power_lower,
        rate=rate,
        weights=weights,
        kind=kind,
        variant=variant,
        integer_iterations=integer_iterations,
    )
    logger.info("Computing %d waterslide points (%s, rate=%g, gamma=%g)", len(grid), kind, rate, weights.gamma)
    return _run_curve(grid, func, workers)


def waterslide_upper_curve(
    rate: float,
    weights: TechnologyWeights,
    pe_grid: Sequence[float],
    kind: ChannelKind,
    integer_iterations: bool = False,
    workers: int = 1,
) -> List[WaterslidePoint]:
    """Achievable waterslide curve: ``total_power_upper`` along ``pe_grid``."""
    grid = _check_pe_grid(pe_grid)
    func = partial(
        _curve_point,
        solver=total_power_upper,
        rate=rate,
        weights=weights,
        kind=kind,
        integer_iterations=integer_iterations,
    )
    return _run_curve(grid, func, workers)


# ─── ASYMPTOTIC OPTIMUM ─────────────────────────────────────────────────────────


def _divergence_unchecked(rate: float, snr: float, kind: ChannelKind) -> float:
    """Divergence at capacity, 0 at or below the threshold."""
    if kind == "awgn":
        var_ratio = snr / math.expm1(2.0 * rate * math.log(2.0))
        return float(kl_gaussian_var(var_ratio, 1.0)) if var_ratio > 1.0 else 0.0
    g_star = float(binary_entropy_inv(1.0 - rate))
    p = crossover_from_snr(snr)
    if p >= g_star:
        return 0.0
    return float(kl_bernoulli(g_star, p))


def divergence_at_capacity(rate: float, snr: float, kind: ChannelKind) -> float:
    """
    Divergence between the capacity-achieving test channel and the channel.

    BSC: ``D(h_b^{-1}(1-R) || Q(sqrt(snr)))`` in bits. AWGN:
    ``D(N(0, snr/(2^(2R)-1)) || N(0, 1))`` in nats. Zero at the threshold.

    Raises
    ------
    ValueError
        If ``snr`` is below the Shannon threshold for ``rate``.
    """
    threshold = min_snr_for_rate(rate, kind)
    if snr < threshold * (1.0 - 1e-9):
        raise ValueError(f"snr={snr:g} is below the threshold {threshold:g}")
    return _divergence_unchecked(rate, snr, kind)


def _divergence_ratio(zeta: float, rate: float, kind: ChannelKind) -> float:
    """``f / f'`` with a central difference of step ``zeta * 1e-6``."""
    h = zeta * FD_STEP
    f = _divergence_unchecked(rate, zeta, kind)
    slope = (_divergence_unchecked(rate, zeta + h, kind) - _divergence_unchecked(rate, zeta - h, kind)) / (2.0 * h)
    if slope <= 0:
        return 0.0 if f == 0 else math.inf
    return f / slope


def asymptotic_transmit_snr(rate: float, gamma: float, kind: ChannelKind) -> float:
    """
    Asymptotically optimal transmit SNR ``zeta(R, gamma)``.

    Root of ``f(R, zeta) / f'(R, zeta) = gamma`` where ``f`` is
    ``divergence_at_capacity``; the ratio is unit-free, so the BSC (bits)
    and AWGN (nats) forms share the solver. The bracket grows geometrically
    from just above the threshold.

    Raises
    ------
    RuntimeError
        If no bracket is found.
    """
    if not gamma > 0:
        raise ValueError("gamma must be > 0")
    threshold = min_snr_for_rate(rate, kind)
    lo = threshold * (1.0 + 1e-12)
    r_lo = _divergence_ratio(lo, rate, kind) - gamma
    if r_lo >= 0:
        logger.error("Ratio already %g above gamma=%g at the threshold", r_lo, gamma)
        raise RuntimeError(f"no bracket for gamma={gamma:g}: f/f' >= gamma at snr={lo:g}")
    hi = 2.0 * threshold
    while _divergence_ratio(hi, rate, kind) - gamma <= 0:
        lo, hi = hi, 2.0 * hi
        if hi > threshold * 1e12:
            logger.error("Bracket search for zeta exceeded snr=%g (rate=%g, gamma=%g)", hi, rate, gamma)
            raise RuntimeError(f"no bracket for gamma={gamma:g} below snr={hi:g}")
    try:
        zeta = optimize.brentq(
            lambda z: _divergence_ratio(z, rate, kind) - gamma, lo, hi, xtol=1e-300, rtol=1e-14, maxiter=500
        )
    except (ValueError, RuntimeError) as e:
        logger.error("brentq failed for zeta on [%g, %g]: %s", lo, hi, e)
        raise RuntimeError(f"asymptotic SNR solve failed on [{lo:g}, {hi:g}]") from e
    return float(zeta)


# ─── UNCODED THRESHOLD ──────────────────────────────────────────────────────────


def uncoded_coding_threshold(
    rate: float,
    gamma: float,
    alpha: float,
    kind: ChannelKind = "bsc",
    adjust_waterfall: bool = True,
    max_iter: int = 500,
) -> float:
    """
    Error probability below which coding can beat uncoded transmission.

    Fixed point of ``pe = repetition_pe(W(pe) + gamma * log2(alpha), 1/R)``
    where ``W`` is the rate-distortion adjusted waterfall SNR (or the plain
    Shannon SNR with ``adjust_waterfall=False``): a coded system needs at
    least one iteration, whose decoding power is spent on the repetition
    code instead. Damped fixed-point iteration, Brent fallback.

    Returns
    -------
    float
        The threshold in (0, 1/2), or NaN when no fixed point exists.
    """
    reps = int(round(1.0 / rate))
    if reps % 2 == 0 or not math.isclose(reps * rate, 1.0, rel_tol=1e-9):
        raise ValueError("1/rate must be an odd integer")
    if not gamma > 0:
        raise ValueError("gamma must be > 0")
    if not alpha >= 2:
        raise ValueError("alpha must be >= 2")
    extra = gamma * math.log2(alpha)

    def image(pe: float) -> float:
        base = shannon_waterfall_snr(rate, pe, kind) if adjust_waterfall else min_snr_for_rate(rate, kind)
        return repetition_pe(base + extra, reps)

    pe = 0.25
    for _ in range(max_iter):
        nxt = (1.0 - FIXED_POINT_DAMPING) * pe + FIXED_POINT_DAMPING * image(pe)
        if abs(nxt - pe) <= 1e-15 + 1e-12 * pe:
            pe = nxt
            break
        pe = nxt
    else:
        pe = math.nan
    if 0.0 < pe < 0.5 and abs(image(pe) - pe) <= 1e-10 * pe:
        return pe

    logger.debug("Fixed-point iteration did not settle; falling back to brentq")
    lo, hi = 1e-300, 0.5 - 1e-12
    f_lo, f_hi = image(lo) - lo, image(hi) - hi
    if f_lo * f_hi > 0:
        warnings.warn(f"no uncoded/coded threshold for gamma={gamma:g}, alpha={alpha:g}", UserWarning)
        return math.nan
    return float(optimize.brentq(lambda x: image(x) - x, lo, hi, xtol=1e-300, rtol=1e-13))
