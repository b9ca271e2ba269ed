"""
waterslide.classical
====================

Waterslide models for classical coding schemes over BPSK with hard decisions:
uncoded repetition, dense block codes with ML decoding, convolutional codes
with Viterbi decoding, an idealized one-guess sequential decoder and an
idealized syndrome decoder.

Each scheme pairs an error model (an error exponent times a size parameter,
block length ``m`` or constraint length ``L_c``) with an operations-per-output
decoding model, and ``optimize_scheme`` minimizes transmit plus decoding
power jointly over SNR and size. All exponents are in bits.
"""

import logging
import math
import warnings
from typing import List, Sequence

import numpy as np
from scipy import optimize, stats

from ..core.errors import InfeasibleRateWarning, InfeasibleRegionError
from ..core.models import ClassicalScheme, SchemeOptimum
from .channels import crossover_from_snr, min_snr_for_rate
from .numerics import (
    binary_entropy,
    error_exponent_random,
    error_exponent_sphere,
    gallager_e0_bsc,
    refine_grid_minimum,
)

logger = logging.getLogger(__name__)

SEARCH_GRID_POINTS = 64
SNR_MAX_FACTOR = 1e3
# 2**(size*rate) overflows beyond this
MAX_LOG2_OPS = 1000.0
BALANCE_STEP = 1e-6


# ─── ERROR MODELS ───────────────────────────────────────────────────────────────


def repetition_pe(snr: float, reps: int) -> float:
    """
    Majority-vote error probability of an odd repetition code.

    ``sum_{j > reps/2} C(reps, j) p^j (1-p)^(reps-j)`` with ``p = Q(sqrt(snr))``.

    Raises
    ------
    ValueError
        If ``reps`` is not a positive odd integer or ``snr < 0``.
    """
    if int(reps) != reps or reps < 1 or reps % 2 == 0:
        raise ValueError("reps must be a positive odd integer")
    p = crossover_from_snr(snr)
    return float(stats.binom.sf(reps // 2, int(reps), p))


def _repetition_log2_pe(snr: float, reps: int) -> float:
    p = crossover_from_snr(snr)
    return float(stats.binom.logsf(reps // 2, int(reps), p)) / math.log(2.0)


def _conv_residual(rho: float, rate: float, p: float) -> float:
    return float(gallager_e0_bsc(rho, p)) - rate * rho


def conv_error_exponent(rate: float, p: float) -> float:
    """
    Error exponent of convolutional codes in bits.

    Given parametrically by ``E_conv = E0(rho)`` with ``R = E0(rho)/rho``;
    the root ``rho* > 0`` of ``E0(rho) - R*rho`` is bracketed and solved with
    Brent's method.

    Returns
    -------
    float
        ``E0(rho*, p)``, or 0 with an ``InfeasibleRateWarning`` when
        ``rate >= C(p)``.
    """
    if not rate > 0:
        raise ValueError("rate must be > 0")
    if not 0.0 < p <= 0.5:
        raise ValueError("p must lie in (0, 0.5]")
    cap = 1.0 - float(binary_entropy(p))
    if rate >= cap:
        warnings.warn(
            f"rate {rate:g} is at or above capacity {cap:g}; exponent is 0",
            InfeasibleRateWarning,
        )
        return 0.0

    f_one = _conv_residual(1.0, rate, p)
    if f_one == 0.0:
        return float(gallager_e0_bsc(1.0, p))
    if f_one < 0:
        lo, hi = 1.0, 1.0
        while _conv_residual(lo, rate, p) <= 0:
            lo *= 0.5
            if lo < 1e-300:
                raise InfeasibleRegionError(f"no convolutional exponent root for rate={rate}, p={p}")
    else:
        lo, hi = 1.0, 2.0
        while _conv_residual(hi, rate, p) >= 0:
            lo, hi = hi, 2.0 * hi
            if hi > 1e12:
                raise InfeasibleRegionError(f"no convolutional exponent root for rate={rate}, p={p}")
    rho = optimize.brentq(_conv_residual, lo, hi, args=(rate, p), xtol=1e-15, rtol=1e-14)
    return float(gallager_e0_bsc(rho, p))


def scheme_exponent(scheme: ClassicalScheme, snr: float) -> float:
    """Exponent driving ``scheme_pe`` (bits): block, convolutional, or 0 for repetition."""
    p = crossover_from_snr(snr)
    if scheme.kind == "repetition":
        return 0.0
    if scheme.is_convolutional:
        return conv_error_exponent(scheme.rate, p)
    if scheme.exponent == "sphere":
        return error_exponent_sphere(scheme.rate, p)
    return error_exponent_random(scheme.rate, p)


def _check_capacity(scheme: ClassicalScheme, snr: float) -> None:
    cap = 1.0 - float(binary_entropy(crossover_from_snr(snr)))
    if scheme.rate >= cap:
        raise InfeasibleRegionError(f"rate {scheme.rate:g} is not below capacity {cap:g} at snr={snr:g}")


def scheme_pe(scheme: ClassicalScheme, size: float, snr: float) -> float:
    """
    log2 of the bit-error probability of a scheme at a given size and SNR.

    Block schemes: ``-m * E``; convolutional schemes: ``-(L_c / R) * E_conv``;
    repetition: exact majority vote with ``size`` repetitions.

    Raises
    ------
    InfeasibleRegionError
        If the rate is not below the channel capacity.
    """
    if size < 0:
        raise ValueError("size must be >= 0")
    if scheme.kind == "repetition":
        reps = int(round(size))
        return _repetition_log2_pe(snr, reps)
    if size == 0:
        return 0.0
    _check_capacity(scheme, snr)
    exponent = scheme_exponent(scheme, snr)
    if scheme.is_convolutional:
        return -(size / scheme.rate) * exponent
    return -size * exponent


# ─── DECODING POWER ─────────────────────────────────────────────────────────────


def _size_cost_coefficient(scheme: ClassicalScheme) -> float:
    """Operations per output per unit size for the schemes linear in size."""
    if scheme.kind == "magic_sequential":
        return scheme.rate
    if scheme.kind == "magic_syndrome":
        return (1.0 - scheme.rate) * scheme.rate
    raise ValueError(f"{scheme.kind} decoding cost is not linear in size")


def scheme_decode_power(scheme: ClassicalScheme, size: float) -> float:
    """
    Normalized decoding power ``energy_per_op * operations per channel output``.

    ======================  ==========================
    block_ml                ``2^(m R) * m R``
    viterbi                 ``2^(L_c R) * L_c R``
    magic_sequential        ``L_c R``
    magic_syndrome          ``(1 - R) m R``
    repetition              0
    ======================  ==========================
    """
    if size < 0:
        raise ValueError("size must be >= 0")
    if scheme.kind == "repetition":
        return 0.0
    log2_work = size * scheme.rate
    if scheme.kind in ("block_ml", "viterbi"):
        if log2_work > MAX_LOG2_OPS:
            return math.inf
        ops = 2.0**log2_work * log2_work
    else:
        ops = _size_cost_coefficient(scheme) * size
    return scheme.energy_per_op * ops


# ─── OPTIMIZATION ───────────────────────────────────────────────────────────────


def _size_for_target(scheme: ClassicalScheme, snr: float, log2_inv_pe: float) -> float:
    exponent = scheme_exponent(scheme, snr)
    if exponent <= 0:
        return math.inf
    per_size = exponent / scheme.rate if scheme.is_convolutional else exponent
    return max(1.0, log2_inv_pe / per_size)


def _total_at(scheme: ClassicalScheme, snr: float, log2_inv_pe: float) -> float:
    size = _size_for_target(scheme, snr, log2_inv_pe)
    if not math.isfinite(size):
        return math.inf
    return snr + scheme_decode_power(scheme, size)


def _optimize_repetition(scheme: ClassicalScheme, target_pe: float) -> SchemeOptimum:
    reps = int(round(1.0 / scheme.rate))
    if reps % 2 == 0:
        raise ValueError("repetition needs 1/rate to be an odd integer")
    log2_target = math.log2(target_pe)
    if _repetition_log2_pe(0.0, reps) <= log2_target:
        return SchemeOptimum(scheme, target_pe, 0.0, float(reps), 0.0, 0.0)
    hi = 1.0
    while _repetition_log2_pe(hi, reps) > log2_target:
        hi *= 2.0
        if hi > 1e6:
            raise InfeasibleRegionError(f"repetition cannot reach pe={target_pe:g}")
    snr = optimize.brentq(
        lambda s: _repetition_log2_pe(s, reps) - log2_target, 0.0, hi, xtol=1e-14, rtol=1e-13
    )
    return SchemeOptimum(scheme, target_pe, float(snr), float(reps), 0.0, float(snr))


def optimize_scheme(scheme: ClassicalScheme, target_pe: float) -> SchemeOptimum:
    """
    Jointly minimize ``snr + decode power`` subject to ``Pe <= target_pe``.

    For each SNR the size is pinned by the error constraint; the resulting
    one-dimensional total is scanned on a 64-point log grid over
    ``[threshold (1 + 1e-9), threshold * 1e3]`` and refined by bounded
    Brent search on ``log snr``. Repetition has no decoding cost and simply
    solves for the SNR meeting the target.

    Parameters
    ----------
    scheme : ClassicalScheme
        Scheme, rate and energy per operation.
    target_pe : float
        Target bit-error probability in (0, 1/2).

    Returns
    -------
    SchemeOptimum
        Optimal SNR, continuous size, decode power and total.

    Raises
    ------
    InfeasibleRegionError
        If no SNR in the search range reaches the target with finite power.
    """
    if not 0.0 < target_pe < 0.5:
        raise ValueError("target_pe must lie in (0, 0.5)")
    if scheme.kind == "repetition":
        return _optimize_repetition(scheme, target_pe)

    log2_inv_pe = -math.log2(target_pe)
    threshold = min_snr_for_rate(scheme.rate, "bsc")
    log_lo = math.log(threshold * (1.0 + 1e-9))
    log_hi = math.log(threshold * SNR_MAX_FACTOR)
    grid = np.linspace(log_lo, log_hi, SEARCH_GRID_POINTS)

    def objective(u: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", InfeasibleRateWarning)
            return _total_at(scheme, math.exp(u), log2_inv_pe)

    values = np.array([objective(u) for u in grid])
    if not np.any(np.isfinite(values)):
        logger.error("No finite total power for %s at pe=%g", scheme.kind, target_pe)
        raise InfeasibleRegionError(f"{scheme.kind} cannot reach pe={target_pe:g} in the search range")
    u_best, total = refine_grid_minimum(objective, grid, values, xatol=1e-10)
    snr = math.exp(u_best)
    size = _size_for_target(scheme, snr, log2_inv_pe)
    decode = scheme_decode_power(scheme, size)
    logger.debug("%s optimum at pe=%g: snr=%g size=%g total=%g", scheme.kind, target_pe, snr, size, total)
    return SchemeOptimum(scheme, target_pe, snr, size, decode, snr + decode)


def scheme_balance_residual(scheme: ClassicalScheme, snr: float, size: float) -> float:
    """
    Relative residual of the power balance ``E = c * size * dE/dsnr``.

    ``c`` is the decoding energy per unit size (``energy_per_op * R`` for the
    sequential decoder, ``energy_per_op * (1-R) R`` for the syndrome
    decoder). The derivative is a central difference with step ``snr * 1e-6``.
    Zero at an interior optimum of ``optimize_scheme``.
    """
    coef = scheme.energy_per_op * _size_cost_coefficient(scheme)
    h = snr * BALANCE_STEP
    exponent = scheme_exponent(scheme, snr)
    slope = (scheme_exponent(scheme, snr + h) - scheme_exponent(scheme, snr - h)) / (2.0 * h)
    return (exponent - coef * size * slope) / exponent


def classical_curve(scheme: ClassicalScheme, pe_grid: Sequence[float]) -> List[SchemeOptimum]:
    """``optimize_scheme`` along a grid of target error probabilities."""
    return [optimize_scheme(scheme, float(pe)) for pe in pe_grid]
