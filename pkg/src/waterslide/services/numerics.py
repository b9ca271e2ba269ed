"""
waterslide.numerics
===================

Scalar mathematical primitives shared by the other services: binary entropy
and its inverse, Gaussian tails, divergences, the lower real branch of the
Lambert W function, the Bernoulli Chernoff constant and Gallager exponents.

Functions accept scalars or array-likes; scalars in give Python floats out.
Probability-of-error arithmetic elsewhere in the package is done in the log2
domain, so log-domain variants are exposed where magnitudes get extreme.
"""

import logging
import math
import warnings
from functools import lru_cache
from typing import Callable, NamedTuple, Tuple, Union

import numpy as np
from scipy import optimize
from scipy import special

from ..core.errors import InfeasibleRateWarning
from ..core.models import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2
INV_E = math.exp(-1.0)

# sup over rho >= 0 is truncated here for the sphere-packing exponent
SPHERE_RHO_CAP = 1e4
CHERNOFF_GRID_POINTS = 10_000
# smallest eta searched by chernoff_k, relative to 1 - g
CHERNOFF_ETA_FLOOR = 1e-6


class EntropyBounds(NamedTuple):
    """Sandwich bounds on h_b(x) and h_b^{-1}(y)."""

    h_lower: float
    h_upper: float
    inv_lower: float
    inv_upper: float


# ─── HELPERS ────────────────────────────────────────────────────────────────────


def _scalar_or_array(value: np.ndarray) -> ArrayLike:
    if np.ndim(value) == 0:
        return float(value)
    return value


def _check_unit_interval(arr: np.ndarray, name: str) -> None:
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in [0, 1]")


def _entropy_bits(x: np.ndarray) -> np.ndarray:
    return -(special.xlogy(x, x) + special.xlogy(1.0 - x, 1.0 - x)) * LOG2E


def refine_grid_minimum(
    func: Callable[[float], float],
    xs: np.ndarray,
    values: np.ndarray,
    xatol: float = 1e-12,
) -> Tuple[float, float]:
    """
    Refine the minimum of a sampled function between the argmin's neighbors.

    Parameters
    ----------
    func : callable
        Scalar objective.
    xs, values : ndarray
        Grid abscissae (sorted) and the objective sampled on them.
    xatol : float, default 1e-12
        Absolute tolerance passed to the bounded Brent search.

    Returns
    -------
    tuple
        ``(x, f(x))``, never worse than the best grid point.
    """
    finite = np.isfinite(values)
    if not np.any(finite):
        return float(xs[0]), float(values[0])
    masked = np.where(finite, values, np.inf)
    idx = int(np.argmin(masked))
    best_x, best_f = float(xs[idx]), float(masked[idx])
    lo = float(xs[max(idx - 1, 0)])
    hi = float(xs[min(idx + 1, len(xs) - 1)])
    if hi <= lo:
        return best_x, best_f
    try:
        res = optimize.minimize_scalar(
            func, bounds=(lo, hi), method="bounded", options={"xatol": xatol}
        )
    except (ValueError, FloatingPointError) as e:
        logger.debug("Grid refinement skipped on [%g, %g]: %s", lo, hi, e)
        return best_x, best_f
    if np.isfinite(res.fun) and res.fun < best_f:
        return float(res.x), float(res.fun)
    return best_x, best_f


def positive_quadratic_root(a: ArrayLike, b: ArrayLike, c: ArrayLike) -> ArrayLike:
    """
    Larger root of ``a*s**2 + b*s + c = 0`` clipped at zero.

    Evaluated without cancellation. Complex roots give 0; ``a == 0`` falls
    back to the linear root ``-c/b`` (``inf`` when ``b == 0`` and ``c < 0``).
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    c_arr = np.asarray(c, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        disc = b_arr * b_arr - 4.0 * a_arr * c_arr
        sq = np.sqrt(np.maximum(disc, 0.0))
        # b > 0 would cancel in (-b + sq); use the conjugate form instead
        stable = np.where(b_arr > 0, -2.0 * c_arr / (b_arr + sq), (sq - b_arr) / (2.0 * a_arr))
        linear = np.where(b_arr > 0, -c_arr / b_arr, np.where(c_arr < 0, np.inf, 0.0))
        root = np.where(a_arr > 0, stable, linear)
        root = np.where(disc < 0, 0.0, root)
        root = np.where(np.isnan(root), 0.0, root)
    return _scalar_or_array(np.maximum(root, 0.0))


# ─── ENTROPY AND TAILS ──────────────────────────────────────────────────────────


def binary_entropy(x: ArrayLike) -> ArrayLike:
    """
    Binary entropy ``h_b(x)`` in bits, with ``0 * log2(1/0) = 0``.

    Raises
    ------
    ValueError
        If any ``x`` lies outside [0, 1].
    """
    arr = np.asarray(x, dtype=float)
    _check_unit_interval(arr, "x")
    return _scalar_or_array(np.clip(_entropy_bits(arr), 0.0, 1.0))


def binary_entropy_inv(
    y: ArrayLike, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ArrayLike:
    """
    Inverse of the binary entropy on the branch [0, 1/2].

    Bisection on ``ln x`` inside the bracket ``[(y ln2/4)^2, min(y/2, 1/2)]``
    (the d = 2 entropy sandwich), which keeps relative precision for tiny
    ``y``. Stops once ``|h_b(x) - y| <= min(abs_tol, rel_tol * y)``.

    Parameters
    ----------
    y : float or ndarray
        Entropy values in [0, 1].
    tolerances : Tolerances
        Root-finder configuration.

    Returns
    -------
    float or ndarray
        ``x`` in [0, 1/2] with ``h_b(x) = y``.
    """
    arr = np.asarray(y, dtype=float)
    _check_unit_interval(arr, "y")
    flat = np.atleast_1d(arr).astype(float)
    out = np.zeros_like(flat)
    out[flat >= 1.0] = 0.5
    interior = (flat > 0.0) & (flat < 1.0)
    if np.any(interior):
        yv = flat[interior]
        lo = 2.0 * np.log(yv) + 2.0 * math.log(LN2 / 4.0)
        hi = np.log(np.minimum(yv / 2.0, 0.5))
        tol = np.minimum(tolerances.abs_tol, tolerances.rel_tol * yv)
        mid = 0.5 * (lo + hi)
        active = np.ones_like(yv, dtype=bool)
        for _ in range(tolerances.max_iter):
            mid = np.where(active, 0.5 * (lo + hi), mid)
            hm = _entropy_bits(np.exp(mid))
            above = hm > yv
            hi = np.where(active & above, mid, hi)
            lo = np.where(active & ~above, mid, lo)
            done = (np.abs(hm - yv) <= tol) | (hi - lo <= 4.0 * np.finfo(float).eps)
            active &= ~done
            if not np.any(active):
                break
        else:
            logger.debug("binary_entropy_inv hit max_iter for %d points", int(active.sum()))
        out[interior] = np.exp(mid)
    return _scalar_or_array(out.reshape(arr.shape))


def q_function(x: ArrayLike) -> ArrayLike:
    """Complementary standard-normal CDF ``Q(x) = P(N(0,1) > x)``."""
    return _scalar_or_array(special.ndtr(-np.asarray(x, dtype=float)))


def log2_q_function(x: ArrayLike) -> ArrayLike:
    """``log2 Q(x)``, accurate far into the tail."""
    return _scalar_or_array(special.log_ndtr(-np.asarray(x, dtype=float)) * LOG2E)


def q_inverse(p: ArrayLike) -> ArrayLike:
    """Inverse of ``Q`` on (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise ValueError("p must lie in (0, 1)")
    return _scalar_or_array(-special.ndtri(arr))


# ─── DIVERGENCES ────────────────────────────────────────────────────────────────


def kl_bernoulli(g: ArrayLike, p: ArrayLike) -> ArrayLike:
    """
    Bernoulli KL divergence ``D(g||p)`` in bits.

    Written with ``log1p`` of the relative offset so nearby arguments keep
    their precision.

    Raises
    ------
    ValueError
        If ``p`` is not strictly inside (0, 1) or ``g`` is outside [0, 1].
    """
    g_arr = np.asarray(g, dtype=float)
    p_arr = np.asarray(p, dtype=float)
    _check_unit_interval(g_arr, "g")
    if np.any((p_arr <= 0.0) | (p_arr >= 1.0)) or np.any(np.isnan(p_arr)):
        raise ValueError("p must lie in (0, 1)")
    d = g_arr - p_arr
    nats = special.xlog1py(g_arr, d / p_arr) + special.xlog1py(1.0 - g_arr, -d / (1.0 - p_arr))
    return _scalar_or_array(np.maximum(nats, 0.0) * LOG2E)


def kl_gaussian_var(var_g: ArrayLike, var_p: ArrayLike) -> ArrayLike:
    """
    KL divergence between zero-mean Gaussians, in nats.

    ``D = (r - 1 - ln r) / 2`` with ``r = var_g / var_p``.
    """
    vg = np.asarray(var_g, dtype=float)
    vp = np.asarray(var_p, dtype=float)
    if np.any(vg <= 0) or np.any(vp <= 0):
        raise ValueError("variances must be > 0")
    excess = vg / vp - 1.0
    return _scalar_or_array(np.maximum(0.5 * (excess - np.log1p(excess)), 0.0))


# ─── LAMBERT W ──────────────────────────────────────────────────────────────────


def excess_from_log_ratio(
    t: ArrayLike, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ArrayLike:
    """
    Solve ``e - ln(1 + e) = t`` for ``e >= 0``.

    Newton iteration started at ``sqrt(2t) + 2t``, which lies right of the
    root; the left side is convex and increasing, so the iterates decrease
    monotonically onto the root.

    Raises
    ------
    ValueError
        If any ``t`` is negative.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
        raise ValueError("t must be >= 0")
    e = np.sqrt(2.0 * t_arr) + 2.0 * t_arr
    positive = t_arr > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(tolerances.max_iter):
            resid = e - np.log1p(e) - t_arr
            step = np.where(positive, resid * (1.0 + e) / e, 0.0)
            e_new = np.maximum(e - step, 0.0)
            converged = np.abs(e_new - e) <= tolerances.abs_tol * 1e-3 + tolerances.rel_tol * 1e-5 * e_new
            e = e_new
            if np.all(converged | ~positive):
                break
    return _scalar_or_array(np.where(positive, e, 0.0))


def lambert_w_lower(
    x: ArrayLike, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ArrayLike:
    """
    Lower real branch ``W_L(x) <= -1`` of the Lambert W function.

    With ``w = -1 - e`` the defining equation ``w * exp(w) = x`` becomes
    ``e - ln(1 + e) = -ln(-x) - 1``, solved by ``excess_from_log_ratio``.
    The branch point ``x = -1/e`` returns exactly ``-1``.

    Raises
    ------
    ValueError
        If ``x`` lies outside [-1/e, 0).
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr >= 0) or np.any(arr < -INV_E * (1.0 + 1e-15)) or np.any(np.isnan(arr)):
        raise ValueError("x must lie in [-1/e, 0)")
    s = np.maximum(-np.log(-arr) - 1.0, 0.0)
    return _scalar_or_array(-1.0 - np.asarray(excess_from_log_ratio(s, tolerances)))


# ─── CHERNOFF CONSTANT ──────────────────────────────────────────────────────────


@lru_cache(maxsize=4096)
def chernoff_k(g: float, grid_points: int = CHERNOFF_GRID_POINTS) -> float:
    """
    Chernoff constant ``K(g) = inf_{0 < eta <= 1-g} D(g+eta||g) / eta^2``.

    Dense log-spaced scan of ``eta`` followed by bounded refinement around
    the grid argmin. No closed form of the ``eta -> 0`` limit is assumed.

    Parameters
    ----------
    g : float
        Bernoulli parameter in (0, 1).
    grid_points : int, default 10000
        Scan size.

    Returns
    -------
    float
        ``K(g) > 0`` in bits per unit variance.
    """
    if not 0.0 < g < 1.0:
        raise ValueError("g must lie in (0, 1)")
    span = 1.0 - g
    log_eta = np.linspace(math.log(CHERNOFF_ETA_FLOOR * span), math.log(span), grid_points)
    eta = np.exp(log_eta)
    eta[-1] = span

    def ratio(le: float) -> float:
        et = min(math.exp(le), span)
        return float(kl_bernoulli(g + et, g)) / (et * et)

    values = np.asarray(kl_bernoulli(np.minimum(g + eta, 1.0), g)) / (eta * eta)
    _, k = refine_grid_minimum(ratio, log_eta, values)
    return k


# ─── GALLAGER EXPONENTS ─────────────────────────────────────────────────────────


def gallager_e0_bsc(rho: ArrayLike, p: float) -> ArrayLike:
    """
    Gallager function of the BSC with uniform inputs, in bits.

    ``E0(rho, p) = rho - (1+rho) log2(p^(1/(1+rho)) + (1-p)^(1/(1+rho)))``
    """
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    if not 0.0 < p <= 0.5:
        raise ValueError("p must lie in (0, 0.5]")
    s = 1.0 / (1.0 + rho_arr)
    mix = np.logaddexp2(s * math.log2(p), s * math.log2(1.0 - p))
    return _scalar_or_array(np.maximum(rho_arr - (1.0 + rho_arr) * mix, 0.0))


def gallager_e0_awgn(rho: ArrayLike, snr: float) -> ArrayLike:
    """Gallager function of the AWGN channel with Gaussian inputs, in bits."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    if snr < 0:
        raise ValueError("snr must be >= 0")
    return _scalar_or_array(0.5 * rho_arr * np.log2(1.0 + snr / (1.0 + rho_arr)))


def _maximize_exponent(
    e0: Callable[[float], float], rate: float, rho_max: float
) -> float:
    """sup over rho in [0, rho_max] of e0(rho) - rho*rate (concave, unimodal)."""
    u_max = math.log1p(rho_max)

    def neg(u: float) -> float:
        rho = math.expm1(u)
        return -(e0(rho) - rho * rate)

    res = optimize.minimize_scalar(
        neg, bounds=(0.0, u_max), method="bounded", options={"xatol": 1e-13, "maxiter": 1000}
    )
    candidates = [-float(res.fun), e0(1.0) - rate if rho_max >= 1.0 else 0.0, 0.0]
    return max(candidates)


def _exponent_or_flag(rate: float, capacity: float) -> bool:
    if rate <= 0:
        raise ValueError("rate must be > 0")
    if rate >= capacity:
        warnings.warn(
            f"rate {rate:g} is at or above capacity {capacity:g}; exponent is 0",
            InfeasibleRateWarning,
        )
        return False
    return True


def error_exponent_random(rate: float, p: float) -> float:
    """
    Random-coding exponent ``E_r(R)`` of the BSC in bits.

    Maximizes ``E0(rho, p) - rho*R`` over ``rho`` in [0, 1]. Returns 0 with an
    ``InfeasibleRateWarning`` when ``rate >= C(p)``.
    """
    if not _exponent_or_flag(rate, 1.0 - float(binary_entropy(p))):
        return 0.0
    return _maximize_exponent(lambda r: float(gallager_e0_bsc(r, p)), rate, 1.0)


def error_exponent_sphere(rate: float, p: float, rho_cap: float = SPHERE_RHO_CAP) -> float:
    """
    Sphere-packing exponent ``E_sp(R)`` of the BSC in bits.

    The sup over ``rho >= 0`` is truncated at ``rho_cap``. Never below
    ``error_exponent_random`` at the same point.
    """
    if not _exponent_or_flag(rate, 1.0 - float(binary_entropy(p))):
        return 0.0
    def e0(r: float) -> float:
        return float(gallager_e0_bsc(r, p))

    return max(_maximize_exponent(e0, rate, rho_cap), _maximize_exponent(e0, rate, 1.0))


def error_exponent_random_awgn(rate: float, snr: float) -> float:
    """Random-coding exponent of the Gaussian-input AWGN channel in bits."""
    if not _exponent_or_flag(rate, 0.5 * math.log2(1.0 + snr)):
        return 0.0
    return _maximize_exponent(lambda r: float(gallager_e0_awgn(r, snr)), rate, 1.0)


# ─── ENTROPY SANDWICH ───────────────────────────────────────────────────────────


def hb_bound_pair(x: float, y: float, d: float) -> EntropyBounds:
    """
    Power-law bounds around ``h_b`` and its inverse.

    For ``x`` in [0, 1/2], ``y`` in [0, 1] and ``d > 1``::

        2x <= h_b(x) <= 2 x^(1-1/d) d / ln2
        y^(d/(d-1)) (ln2 / 2d)^(d/(d-1)) <= h_b^{-1}(y) <= y/2
    """
    if not d > 1:
        raise ValueError("d must be > 1")
    if not 0.0 <= x <= 0.5:
        raise ValueError("x must lie in [0, 0.5]")
    if not 0.0 <= y <= 1.0:
        raise ValueError("y must lie in [0, 1]")
    power = d / (d - 1.0)
    return EntropyBounds(
        h_lower=2.0 * x,
        h_upper=2.0 * x ** (1.0 - 1.0 / d) * d / LN2,
        inv_lower=y**power * (LN2 / (2.0 * d)) ** power,
        inv_upper=y / 2.0,
    )
