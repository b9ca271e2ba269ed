"""
waterslide.bounds
=================

Sphere-packing style lower bounds on the average bit-error probability of a
decoder whose decisions depend on ``n`` channel outputs, their inversion to a
minimum neighborhood size, the trivial bound, and the random-coding upper
bound on the neighborhood size.

Every bound is a supremum over a hypothetical degraded test channel G of a
term of the form::

    log Pe >= A(G) - n * D(G||P) - sqrt(n) * B(G)

For the BSC (and the asymptotic AWGN variant) ``A``, ``D`` and ``B`` do not
depend on ``n``, so the bound inverts exactly: the smallest ``n`` is the
largest per-test-channel root of the quadratic in ``sqrt(n)``. The numeric
AWGN variant has an ``n``-dependent ``B`` and is inverted by bisection on
``log n``.

Test channels are swept on a fixed 512-point grid of log-spaced offsets above
the capacity boundary, then refined with a bounded Brent search around the
grid argmax. Results are deterministic for identical inputs.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Tuple

import numpy as np
from scipy import special

from ..core.errors import InfeasibleRegionError
from ..core.models import (
    BoundResult,
    BoundVariant,
    ChannelPoint,
    IterationBounds,
    TestChannel,
    TForm,
)
from .channels import capacity, channel_crossover
from .numerics import (
    LN2,
    LOG2E,
    binary_entropy,
    binary_entropy_inv,
    chernoff_k,
    error_exponent_random,
    error_exponent_random_awgn,
    excess_from_log_ratio,
    kl_bernoulli,
    kl_gaussian_var,
    positive_quadratic_root,
    refine_grid_minimum,
)

logger = logging.getLogger(__name__)

SUP_GRID_POINTS = 512
# terms with delta below this are dropped from the sup
DELTA_FLOOR = 1e-15
OFFSET_DECADES = 15.0
N_MAX = 1e15
NUMERIC_VARIANT_N_MAX = 1e6
# AWGN sweep reaches down to C(G) = rate * this fraction
AWGN_CAPACITY_FLOOR = 0.01
BISECTION_STEPS = 80


class GaussianTailBounds(NamedTuple):
    """Chi-square tail bounds; ``affine_valid`` flags the second one."""

    chi2_bound: float
    affine_bound: float
    affine_valid: bool


# ─── HELPERS ────────────────────────────────────────────────────────────────────


def _log_offsets(span: float) -> np.ndarray:
    return math.log(span) + np.linspace(-OFFSET_DECADES * math.log(10.0), 0.0, SUP_GRID_POINTS)


def _frozen(*arrays: np.ndarray) -> None:
    for arr in arrays:
        arr.setflags(write=False)


def _check_rate(rate: float) -> None:
    if not rate > 0:
        raise ValueError("rate must be > 0 (empty feasible set)")


def _check_n(n: float) -> None:
    if not n >= 0 or math.isnan(n):
        raise ValueError("n must be >= 0")


@lru_cache(maxsize=256)
def _bsc_g_min(rate: float) -> float:
    """Crossover whose BSC capacity equals ``rate``, polished to machine precision."""
    target = 1.0 - rate
    g = float(binary_entropy_inv(target))
    for _ in range(3):
        if not 0.0 < g < 0.5:
            break
        slope = math.log2((1.0 - g) / g)
        step = (float(binary_entropy(g)) - target) / slope
        if not math.isfinite(step):
            break
        g = min(max(g - step, 0.0), 0.5)
    return g


def _bsc_delta(g: np.ndarray, g_min: float, rate: float) -> np.ndarray:
    """
    ``1 - C(g)/rate`` evaluated as ``(h_b(g) - h_b(g_min)) / rate``.

    The entropy difference is expanded around ``g_min`` so the offset's
    leading digits are not cancelled.
    """
    g = np.asarray(g, dtype=float)
    x = g - g_min
    with np.errstate(divide="ignore", invalid="ignore"):
        curvature = special.xlog1py(g_min, x / g_min) + special.xlog1py(
            1.0 - g_min, -x / (1.0 - g_min)
        )
        dh = x * np.log((1.0 - g) / g) - curvature
    return np.minimum(dh * LOG2E / rate, 1.0)


def _bsc_log_ratio(g: np.ndarray, p: float) -> np.ndarray:
    """``log2(g(1-p) / (p(1-g)))``, exact near ``g = p``."""
    d = np.asarray(g, dtype=float) - p
    return (np.log1p(d / p) - np.log1p(-d / (1.0 - p))) * LOG2E


def _awgn_v_min(rate: float, snr: float) -> float:
    return snr / math.expm1(2.0 * rate * LN2)


def _awgn_delta(v: np.ndarray, v_min: float, rate: float, snr: float) -> np.ndarray:
    """``1 - C(G)/rate`` for noise ratio ``v``, exact near the capacity boundary."""
    v = np.asarray(v, dtype=float)
    ratio = snr * (v - v_min) / (v_min * (v + snr))
    return np.minimum(np.log1p(ratio) / (2.0 * LN2 * rate), 1.0)


def _phi_from_log_ratio(n: float, log_two_over_y: np.ndarray) -> np.ndarray:
    if n <= 0:
        return np.zeros_like(log_two_over_y)
    return n * np.asarray(excess_from_log_ratio(2.0 * log_two_over_y / n))


# ─── TEST-CHANNEL PROFILES ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class _BscProfile:
    """n- and p-independent part of the BSC term family on the sweep grid."""

    g_lo: float
    g_min: float
    log_offsets: np.ndarray
    g: np.ndarray
    delta: np.ndarray
    log2_floor: np.ndarray
    eps: np.ndarray


@lru_cache(maxsize=64)
def _bsc_profile(rate: float, g_lo: float) -> _BscProfile:
    g_min = _bsc_g_min(rate)
    span = 0.5 - g_lo
    if span <= 0:
        log_offsets = np.array([0.0])
        g = np.array([0.5])
    else:
        log_offsets = _log_offsets(span)
        g = np.minimum(g_lo + np.exp(log_offsets), 0.5)
        g[-1] = 0.5
    delta = _bsc_delta(g, g_min, rate)
    feasible = delta >= DELTA_FLOOR
    y = np.asarray(binary_entropy_inv(np.where(feasible, delta, 1.0)))
    log2_floor = np.where(feasible, np.log2(y) - 1.0, -np.inf)
    k = np.array([chernoff_k(float(gi)) for gi in g])
    eps = np.where(feasible, np.sqrt((1.0 - np.log2(y)) / k), np.inf)
    _frozen(log_offsets, g, delta, log2_floor, eps)
    logger.debug("Built BSC test-channel profile for rate=%g (g_lo=%g)", rate, g_lo)
    return _BscProfile(g_lo, g_min, log_offsets, g, delta, log2_floor, eps)


def _bsc_family(rate: float, p: float) -> Tuple[_BscProfile, np.ndarray, np.ndarray]:
    """Profile plus the p-dependent divergence and sqrt(n) coefficients (bits)."""
    g_min = _bsc_g_min(rate)
    profile = _bsc_profile(rate, max(g_min, p))
    div = np.asarray(kl_bernoulli(profile.g, p))
    with np.errstate(invalid="ignore"):
        root = np.where(np.isfinite(profile.eps), profile.eps * _bsc_log_ratio(profile.g, p), np.inf)
    return profile, div, root


def _bsc_terms_at(g: float, rate: float, p: float) -> Tuple[float, float, float, float]:
    """Scalar ``(delta, A, D, B)`` of the BSC term at crossover ``g`` (bits)."""
    g_min = _bsc_g_min(rate)
    delta = float(_bsc_delta(np.array([g]), g_min, rate)[0])
    if not delta >= DELTA_FLOOR:
        return delta, -math.inf, 0.0, math.inf
    y = float(binary_entropy_inv(delta))
    eps = math.sqrt((1.0 - math.log2(y)) / chernoff_k(g))
    div = float(kl_bernoulli(g, p))
    root = eps * float(_bsc_log_ratio(np.array([g]), p)[0])
    return delta, math.log2(y) - 1.0, div, root


@dataclass(frozen=True)
class _AwgnProfile:
    v_lo: float
    v_min: float
    log_offsets: np.ndarray
    v: np.ndarray
    delta: np.ndarray
    log_floor: np.ndarray
    log_two_over_y: np.ndarray
    div: np.ndarray


def _awgn_v_range(rate: float, snr: float, v_floor: float) -> Tuple[float, float, float]:
    v_min = _awgn_v_min(rate, snr)
    v_lo = max(1.0, v_min, v_floor)
    v_max = snr / math.expm1(2.0 * rate * AWGN_CAPACITY_FLOOR * LN2)
    return v_min, v_lo, max(v_max, 2.0 * v_lo)


@lru_cache(maxsize=512)
def _awgn_profile(rate: float, snr: float, v_floor: float) -> _AwgnProfile:
    v_min, v_lo, v_max = _awgn_v_range(rate, snr, v_floor)
    log_offsets = _log_offsets(v_max - v_lo)
    v = v_lo + np.exp(log_offsets)
    delta = _awgn_delta(v, v_min, rate, snr)
    feasible = delta >= DELTA_FLOOR
    y = np.asarray(binary_entropy_inv(np.where(feasible, delta, 1.0)))
    log_floor = np.where(feasible, np.log(y / 2.0), -np.inf)
    log_two_over_y = np.where(feasible, np.log(2.0 / y), np.inf)
    div = np.asarray(kl_gaussian_var(v, 1.0))
    _frozen(log_offsets, v, delta, log_floor, log_two_over_y, div)
    return _AwgnProfile(v_lo, v_min, log_offsets, v, delta, log_floor, log_two_over_y, div)


def _awgn_terms_at(v: float, rate: float, snr: float) -> Tuple[float, float, float, float]:
    """Scalar ``(delta, ln(y/2), D, ln(2/y))`` at noise ratio ``v`` (nats)."""
    v_min = _awgn_v_min(rate, snr)
    delta = float(_awgn_delta(np.array([v]), v_min, rate, snr)[0])
    if not delta >= DELTA_FLOOR:
        return delta, -math.inf, 0.0, math.inf
    y = float(binary_entropy_inv(delta))
    return delta, math.log(y / 2.0), float(kl_gaussian_var(v, 1.0)), math.log(2.0 / y)


def _asymptotic_root_coef(v: np.ndarray, log_two_over_y: np.ndarray) -> np.ndarray:
    return (1.5 + 2.0 * log_two_over_y) * (v - 1.0)


def _sup_over_grid(
    log_offsets: np.ndarray,
    values: np.ndarray,
    scalar: Callable[[float], float],
    refine: bool,
) -> Tuple[float, float]:
    """Maximize a term family: grid argmax, optionally refined. Returns (log_offset, value)."""
    if not refine:
        masked = np.where(np.isfinite(values), values, -np.inf)
        idx = int(np.argmax(masked))
        return float(log_offsets[idx]), float(masked[idx])
    x, neg = refine_grid_minimum(lambda u: -scalar(u), log_offsets, -values)
    return x, -neg


# ─── MU, T, PHI ─────────────────────────────────────────────────────────────────


def t_of_n(n: float, t_form: TForm = "appendix") -> float:
    """
    ``T(n) = -W_L(-e^{-1} (1/4)^{1/n}) - 1``.

    ``t_form="theorem"`` drops the trailing ``-1`` for compatibility with the
    other printed form of the definition.
    """
    if not n > 0:
        raise ValueError("n must be > 0")
    base = float(excess_from_log_ratio(2.0 * LN2 / n))
    if t_form == "appendix":
        return base
    if t_form == "theorem":
        return base + 1.0
    raise ValueError("t_form must be 'appendix' or 'theorem'")


def mu_of_n(n: float, t_form: TForm = "appendix") -> float:
    """Variance-ratio threshold above which the numeric AWGN mapping applies."""
    t = t_of_n(n, t_form)
    if t <= 0:
        return 1.0
    return 0.5 * (1.0 + 1.0 / (t + 1.0) + (4.0 * t + 2.0) / (n * t * (1.0 + t)))


def phi(n: float, y: float) -> float:
    """
    ``phi(n, y) = -n (W_L(-e^{-1} (y/2)^{2/n}) + 1)`` for ``y`` in (0, 2].

    Evaluated as ``n * e`` with ``e - ln(1+e) = (2/n) ln(2/y)``.
    """
    if not 0.0 < y <= 2.0:
        raise ValueError("y must lie in (0, 2]")
    _check_n(n)
    return float(_phi_from_log_ratio(n, np.array(math.log(2.0 / y))))


# ─── LOWER BOUNDS ───────────────────────────────────────────────────────────────


def pe_floor_over_channel(rate: float, test_capacity: float) -> float:
    """
    Bit-error floor over a test channel: ``h_b^{-1}(1 - C_G / R)``.

    Raises
    ------
    ValueError
        If ``test_capacity >= rate`` or negative.
    """
    _check_rate(rate)
    if not 0.0 <= test_capacity < rate:
        raise ValueError("test_capacity must lie in [0, rate)")
    return float(binary_entropy_inv(1.0 - test_capacity / rate))


def bsc_pe_lower_at(g: float, rate: float, p: float, n: float) -> float:
    """
    log2 of the BSC bound at a fixed test channel ``g``.

    ``log2(h_b^{-1}(delta)/2) - n D(g||p) - eps sqrt(n) log2(g(1-p)/(p(1-g)))``
    with ``delta = 1 - C(g)/R`` and ``eps = sqrt(log2(2/h_b^{-1}(delta)) / K(g))``.

    Returns
    -------
    float
        The log2 bound, or ``-inf`` when ``delta <= 0``.
    """
    _check_rate(rate)
    _check_n(n)
    if not 0.0 < p <= 0.5:
        raise ValueError("p must lie in (0, 0.5]")
    if not p <= g <= 0.5:
        raise ValueError("g must lie in [p, 0.5]")
    if rate >= 1.0:
        raise ValueError("BSC rate must be < 1")
    delta, a0, div, root = _bsc_terms_at(g, rate, p)
    if not math.isfinite(a0):
        return -math.inf
    if n == 0:
        return a0
    return a0 - n * div - math.sqrt(n) * root


def bsc_pe_lower(rate: float, p: float, n: float, refine: bool = True) -> BoundResult:
    """
    BSC lower bound: sup over test crossovers ``g`` in (g_min, 1/2].

    Parameters
    ----------
    rate : float
        Code rate in (0, 1).
    p : float
        Channel crossover probability in (0, 0.5].
    n : float
        Neighborhood size (real, >= 0).
    refine : bool, default True
        Refine the grid argmax with a bounded scalar search.

    Returns
    -------
    BoundResult
        log2 bound, maximizing test channel and its ``delta``.
    """
    _check_rate(rate)
    _check_n(n)
    if rate >= 1.0:
        raise ValueError("BSC rate must be < 1")
    if not 0.0 < p <= 0.5:
        raise ValueError("p must lie in (0, 0.5]")
    profile, div, root = _bsc_family(rate, p)
    with np.errstate(invalid="ignore"):
        values = profile.log2_floor - n * div - math.sqrt(n) * np.where(n > 0, root, 0.0)
    values = np.where(np.isfinite(profile.log2_floor), values, -np.inf)

    def scalar(u: float) -> float:
        g = min(profile.g_lo + math.exp(u), 0.5)
        return bsc_pe_lower_at(g, rate, p, n)

    if len(profile.g) == 1:
        u, best = float(profile.log_offsets[0]), float(values[0])
        g = 0.5
    else:
        u, best = _sup_over_grid(profile.log_offsets, values, scalar, refine)
        g = min(profile.g_lo + math.exp(u), 0.5)
    if not math.isfinite(best):
        raise InfeasibleRegionError(f"no feasible BSC test channel for rate={rate}")
    delta = float(_bsc_delta(np.array([g]), profile.g_min, rate)[0])
    return BoundResult(n=n, log2_pe_bound=min(best, 0.0), opt_test_channel=TestChannel(g=g), delta=delta)


def _awgn_values(
    profile: _AwgnProfile, n: float, variant: str
) -> np.ndarray:
    """Term family (nats) on the profile grid."""
    if variant == "asymptotic":
        coupling = math.sqrt(n) * _asymptotic_root_coef(profile.v, profile.log_two_over_y)
    else:
        coupling = 0.5 * _phi_from_log_ratio(n, profile.log_two_over_y) * (profile.v - 1.0)
    with np.errstate(invalid="ignore"):
        values = profile.log_floor - n * profile.div - coupling
    return np.where(np.isfinite(profile.log_floor), values, -np.inf)


def _awgn_term(v: float, rate: float, snr: float, n: float, variant: str) -> float:
    _, log_floor, div, log_two_over_y = _awgn_terms_at(v, rate, snr)
    if not math.isfinite(log_floor):
        return -math.inf
    if variant == "asymptotic":
        coupling = math.sqrt(n) * (1.5 + 2.0 * log_two_over_y) * (v - 1.0)
    else:
        coupling = 0.5 * float(_phi_from_log_ratio(n, np.array(log_two_over_y))) * (v - 1.0)
    return log_floor - n * div - coupling


def _awgn_pe_lower(
    rate: float, snr: float, n: float, variant: str, t_form: TForm, refine: bool
) -> BoundResult:
    _check_rate(rate)
    _check_n(n)
    if not snr > 0:
        raise ValueError("snr must be > 0")
    v_floor = mu_of_n(n, t_form) if (variant == "numeric" and n > 0) else 1.0
    profile = _awgn_profile(rate, snr, v_floor)
    values = _awgn_values(profile, n, variant)

    def scalar(u: float) -> float:
        return _awgn_term(profile.v_lo + math.exp(u), rate, snr, n, variant)

    u, best = _sup_over_grid(profile.log_offsets, values, scalar, refine)
    if not math.isfinite(best):
        raise InfeasibleRegionError(
            f"no AWGN test channel satisfies C(G) < {rate} and var_ratio > {v_floor:g}"
        )
    v = profile.v_lo + math.exp(u)
    delta = float(_awgn_delta(np.array([v]), profile.v_min, rate, snr)[0])
    return BoundResult(
        n=n,
        log2_pe_bound=min(best * LOG2E, 0.0),
        opt_test_channel=TestChannel(var_ratio=v),
        delta=delta,
    )


def awgn_pe_lower_asymptotic(rate: float, snr: float, n: float, refine: bool = True) -> BoundResult:
    """
    AWGN lower bound, large-``n`` form.

    ``(h_b^{-1}(delta)/2) exp(-n D - sqrt(n)(3/2 + 2 ln(2/h_b^{-1}(delta)))(v - 1))``
    maximized over noise ratios ``v`` with ``C(G) < rate``. Computed in nats,
    reported in log2.
    """
    return _awgn_pe_lower(rate, snr, n, "asymptotic", "appendix", refine)


def awgn_pe_lower_numeric(
    rate: float,
    snr: float,
    n: float,
    t_form: TForm = "appendix",
    refine: bool = True,
) -> BoundResult:
    """
    AWGN lower bound for moderate ``n``.

    ``(h_b^{-1}(delta)/2) exp(-n D - phi(n, h_b^{-1}(delta)) (v - 1) / 2)``
    maximized over ``v > mu(n)`` with ``C(G) < rate``.

    Raises
    ------
    InfeasibleRegionError
        If no noise ratio satisfies both constraints.
    """
    return _awgn_pe_lower(rate, snr, n, "numeric", t_form, refine)


def trivial_pe_lower(p: float, n: float) -> float:
    """log2 of the all-errors bound ``Pe >= p^n``."""
    if not 0.0 < p <= 0.5:
        raise ValueError("p must lie in (0, 0.5]")
    _check_n(n)
    return n * math.log2(p)


def pe_lower_bound(
    rate: float,
    channel: ChannelPoint,
    n: float,
    variant: BoundVariant = "auto",
    refine: bool = True,
) -> BoundResult:
    """
    Select and evaluate a lower bound for a physical channel.

    BSC: ``auto``/``numeric``/``asymptotic`` give the test-channel bound,
    ``combined`` its max with the trivial bound. AWGN: ``auto`` uses the
    numeric form up to ``n = 1e6`` and the asymptotic form beyond,
    ``combined`` takes the max of both.
    """
    if channel.kind == "bsc":
        p = channel_crossover(channel)
        result = bsc_pe_lower(rate, p, n, refine=refine)
        if variant == "combined":
            floor = trivial_pe_lower(p, n)
            if floor > result.log2_pe_bound:
                return BoundResult(n, floor, result.opt_test_channel, result.delta)
        return result
    if variant == "asymptotic" or (variant == "auto" and n > NUMERIC_VARIANT_N_MAX):
        return awgn_pe_lower_asymptotic(rate, channel.snr, n, refine=refine)
    numeric = awgn_pe_lower_numeric(rate, channel.snr, n, refine=refine)
    if variant == "combined":
        asym = awgn_pe_lower_asymptotic(rate, channel.snr, n, refine=refine)
        if asym.log2_pe_bound > numeric.log2_pe_bound:
            return asym
    return numeric


# ─── MAPPING FUNCTIONS AND TAIL BOUNDS ──────────────────────────────────────────


def bsc_mapping_f(x: float, g: float, p: float, n: float) -> float:
    """
    Error-probability mapping from test channel G to channel P (BSC).

    ``f(x) = (x/2) 2^{-n D(g||p)} (p(1-g)/(g(1-p)))^{eps(x) sqrt(n)}`` with
    ``eps(x) = sqrt(log2(2/x) / K(g))``.
    """
    if not 0.0 < x <= 1.0:
        raise ValueError("x must lie in (0, 1]")
    if not 0.0 < p < g < 0.5:
        raise ValueError("need 0 < p < g < 0.5")
    _check_n(n)
    eps = math.sqrt(math.log2(2.0 / x) / chernoff_k(g))
    log_ratio = float(_bsc_log_ratio(np.array([g]), p)[0])
    log2_f = math.log2(x / 2.0) - n * float(kl_bernoulli(g, p)) - eps * math.sqrt(n) * log_ratio
    return 2.0**log2_f


def awgn_mapping_f(delta: float, var_ratio: float, n: float) -> float:
    """
    Error-probability mapping from test channel G to channel P (AWGN).

    ``f(delta) = (delta/2) exp(-n D - sqrt(n)(3/2 + 2 ln(2/delta))(v - 1))``
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if not var_ratio >= 1.0:
        raise ValueError("var_ratio must be >= 1")
    _check_n(n)
    div = float(kl_gaussian_var(var_ratio, 1.0))
    coupling = math.sqrt(n) * (1.5 + 2.0 * math.log(2.0 / delta)) * (var_ratio - 1.0)
    return 0.5 * delta * math.exp(-n * div - coupling)


def awgn_mapping_f_l(
    delta: float, var_ratio: float, n: float, t_form: TForm = "appendix"
) -> float:
    """
    Sharper AWGN mapping, valid for ``var_ratio > mu(n)``.

    ``f_L(delta) = (delta/2) exp(-n D - phi(n, delta)(v - 1)/2)``

    Raises
    ------
    ValueError
        If ``var_ratio <= mu(n)``.
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if not n > 0:
        raise ValueError("n must be > 0")
    mu = mu_of_n(n, t_form)
    if not var_ratio > mu or var_ratio < 1.0:
        raise ValueError(f"var_ratio must exceed mu(n)={mu:g} and 1")
    div = float(kl_gaussian_var(var_ratio, 1.0))
    coupling = 0.5 * phi(n, delta) * (var_ratio - 1.0)
    return 0.5 * delta * math.exp(-n * div - coupling)


def chernoff_bsc_tail(g: float, eps: float) -> float:
    """Bound ``2^{-K(g) eps^2}`` on the normalized Bernoulli(g) sum exceeding ``eps``."""
    if not 0.0 < g < 1.0:
        raise ValueError("g must lie in (0, 1)")
    if not eps > 0:
        raise ValueError("eps must be > 0")
    return 2.0 ** (-chernoff_k(g) * eps * eps)


def chernoff_awgn_tail(n: float, eps_norm: float) -> GaussianTailBounds:
    """
    Bounds on ``Pr(chi2_n / n > 1 + eps_norm)``.

    Returns ``((1+e) e^{-e})^{n/2}`` and ``e^{-sqrt(n) e / 4}``; the second is
    flagged invalid below ``e = 3/sqrt(n)``.
    """
    if not n >= 1:
        raise ValueError("n must be >= 1")
    if not eps_norm > 0:
        raise ValueError("eps_norm must be > 0")
    chi2 = math.exp(0.5 * n * (math.log1p(eps_norm) - eps_norm))
    affine = math.exp(-math.sqrt(n) * eps_norm / 4.0)
    valid = eps_norm >= 3.0 / math.sqrt(n) * (1.0 - 1e-12)
    if not valid:
        logger.debug("Affine Gaussian tail used below its threshold (n=%g, e=%g)", n, eps_norm)
    return GaussianTailBounds(chi2, affine, valid)


# ─── INVERSION ──────────────────────────────────────────────────────────────────


def _bsc_min_n(rate: float, p: float, log2_target: float, refine: bool) -> float:
    profile, div, root = _bsc_family(rate, p)
    finite = np.isfinite(profile.log2_floor)
    c = np.where(finite, log2_target - profile.log2_floor, 1.0)
    sqrt_n = np.where(finite, np.asarray(positive_quadratic_root(div, np.where(finite, root, 0.0), c)), 0.0)
    n_terms = sqrt_n * sqrt_n
    if len(n_terms) == 1 or not refine or not np.all(np.isfinite(n_terms)):
        return float(np.max(n_terms))

    def scalar(u: float) -> float:
        g = min(profile.g_lo + math.exp(u), 0.5)
        _, a0, d, b = _bsc_terms_at(g, rate, p)
        if not math.isfinite(a0):
            return 0.0
        s = float(positive_quadratic_root(d, b, log2_target - a0))
        return s * s

    _, n_best = _sup_over_grid(profile.log_offsets, n_terms, scalar, True)
    return n_best


def _awgn_asymptotic_min_n(rate: float, snr: float, log2_target: float, refine: bool) -> float:
    profile = _awgn_profile(rate, snr, 1.0)
    target = log2_target * LN2
    finite = np.isfinite(profile.log_floor)
    coef = np.where(finite, _asymptotic_root_coef(profile.v, profile.log_two_over_y), 0.0)
    c = np.where(finite, target - profile.log_floor, 1.0)
    sqrt_n = np.where(finite, np.asarray(positive_quadratic_root(profile.div, coef, c)), 0.0)
    n_terms = sqrt_n * sqrt_n
    if not refine or not np.all(np.isfinite(n_terms)):
        return float(np.max(n_terms))

    def scalar(u: float) -> float:
        v = profile.v_lo + math.exp(u)
        _, log_floor, div, log_two_over_y = _awgn_terms_at(v, rate, snr)
        if not math.isfinite(log_floor):
            return 0.0
        b = (1.5 + 2.0 * log_two_over_y) * (v - 1.0)
        s = float(positive_quadratic_root(div, b, target - log_floor))
        return s * s

    _, n_best = _sup_over_grid(profile.log_offsets, n_terms, scalar, True)
    return n_best


def _awgn_numeric_log2_bound(rate: float, snr: float, n: float, t_form: TForm) -> float:
    try:
        return _awgn_pe_lower(rate, snr, n, "numeric", t_form, refine=False).log2_pe_bound
    except InfeasibleRegionError:
        return -math.inf


def _awgn_numeric_min_n(
    rate: float, snr: float, log2_target: float, n_hi: float, t_form: TForm
) -> float:
    """Bisection on log n over [1, n_hi]; ``inf`` if the bound never reaches the target."""
    if _awgn_numeric_log2_bound(rate, snr, 1.0, t_form) <= log2_target:
        return 1.0
    if _awgn_numeric_log2_bound(rate, snr, n_hi, t_form) > log2_target:
        return math.inf
    lo, hi = 0.0, math.log(n_hi)
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if _awgn_numeric_log2_bound(rate, snr, math.exp(mid), t_form) <= log2_target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-10 * max(1.0, hi):
            break
    return math.exp(hi)


def trivial_neighborhood(p: float, target_pe: float) -> float:
    """Smallest ``n`` with ``p^n <= target_pe``."""
    if not 0.0 < p < 0.5:
        raise ValueError("p must lie in (0, 0.5)")
    if not 0.0 < target_pe < 1.0:
        raise ValueError("target_pe must lie in (0, 1)")
    return math.log2(target_pe) / math.log2(p)


def min_neighborhood(
    rate: float,
    channel: ChannelPoint,
    target_pe: float,
    variant: BoundVariant = "auto",
    refine: bool = True,
    n_max: float = N_MAX,
    t_form: TForm = "appendix",
) -> float:
    """
    Smallest neighborhood size whose lower bound on Pe reaches ``target_pe``.

    Parameters
    ----------
    rate : float
        Code rate.
    channel : ChannelPoint
        Physical channel.
    target_pe : float
        Target bit-error probability in (0, 1/2).
    variant : {"auto", "asymptotic", "numeric", "combined"}
        Bound selection, see ``pe_lower_bound``.
    refine : bool, default True
        Refine the maximizing test channel beyond the sweep grid.
    n_max : float, default 1e15
        Results above this are reported as ``inf``.
    t_form : {"appendix", "theorem"}
        Definition of ``T(n)`` for the numeric AWGN variant.

    Returns
    -------
    float
        ``n >= 1`` (real), or ``inf`` when the bound never drops below the
        target (for instance at or below the Shannon SNR).
    """
    _check_rate(rate)
    if not 0.0 < target_pe < 0.5:
        raise ValueError("target_pe must lie in (0, 0.5)")
    log2_target = math.log2(target_pe)

    if channel.kind == "bsc":
        p = channel_crossover(channel)
        n = _bsc_min_n(rate, p, log2_target, refine)
        if variant == "combined" and p < 0.5:
            n = max(n, trivial_neighborhood(p, target_pe))
    elif variant == "asymptotic":
        n = _awgn_asymptotic_min_n(rate, channel.snr, log2_target, refine)
    elif variant == "numeric":
        n = _awgn_numeric_min_n(rate, channel.snr, log2_target, n_max, t_form)
    elif variant == "combined":
        n = max(
            _awgn_numeric_min_n(rate, channel.snr, log2_target, n_max, t_form),
            _awgn_asymptotic_min_n(rate, channel.snr, log2_target, refine),
        )
    else:
        n = _awgn_numeric_min_n(rate, channel.snr, log2_target, NUMERIC_VARIANT_N_MAX, t_form)
        if not math.isfinite(n):
            n = max(NUMERIC_VARIANT_N_MAX, _awgn_asymptotic_min_n(rate, channel.snr, log2_target, refine))

    n = max(1.0, n)
    if n > n_max:
        return math.inf
    return n


# ─── UPPER BOUND AND ITERATIONS ─────────────────────────────────────────────────


def upper_bound_neighborhood(rate: float, channel: ChannelPoint, target_pe: float) -> float:
    """
    Neighborhood size sufficient for ``target_pe``: ``log2(1/Pe) / E_r(R)``.

    Raises
    ------
    InfeasibleRegionError
        If ``rate >= capacity(channel)``.
    """
    _check_rate(rate)
    if not 0.0 < target_pe <= 1.0:
        raise ValueError("target_pe must lie in (0, 1]")
    if rate >= capacity(channel):
        raise InfeasibleRegionError(f"rate {rate:g} is not below capacity {capacity(channel):g}")
    if channel.kind == "bsc":
        exponent = error_exponent_random(rate, channel_crossover(channel))
    else:
        exponent = error_exponent_random_awgn(rate, channel.snr)
    if exponent <= 0:
        raise InfeasibleRegionError("random-coding exponent vanished")
    return -math.log2(target_pe) / exponent


def iteration_bounds(n: float, alpha: float) -> IterationBounds:
    """Iterations implied by neighborhood size ``n`` at connectivity ``alpha``."""
    if not n >= 1:
        raise ValueError("n must be >= 1")
    if not alpha >= 2:
        raise ValueError("alpha must be >= 2")
    lower = math.log2(n) / math.log2(alpha)
    return IterationBounds(l_lower=lower, l_upper=2.0 * lower + 2.0, alpha=alpha)
