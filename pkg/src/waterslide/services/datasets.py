"""
waterslide.datasets
===================

Builds the tabular datasets behind each CLI subcommand from a validated
``RunConfig``. Every builder returns a ``Dataset``: a pandas frame with the
subcommand's fixed columns and the number of infeasible points.

Infeasible points are not written as sentinel rows. A point is left out of
the frame and counted in ``Dataset.infeasible``, so the row count is always
the number of grid points minus that count. The CLI reports the count on
stderr and exits with status 2.
"""

import logging
import math
from typing import Callable, Dict, List, NamedTuple

import numpy as np
import pandas as pd

from ..core.errors import InfeasibleRegionError
from ..core.models import ChannelPoint, ClassicalScheme, RunConfig, TechnologyWeights
from .asymptotics import n_vs_gap_curve
from .bounds import pe_lower_bound
from .channels import bsc_point_from_crossover, min_snr_for_rate, shannon_waterfall_snr, snr_to_db
from .classical import optimize_scheme
from .optimizer import asymptotic_transmit_snr, uncoded_coding_threshold, waterslide_curve

logger = logging.getLogger(__name__)

COLUMNS: Dict[str, List[str]] = {
    "waterfall": ["log10_pe", "snr_linear", "snr_db"],
    "waterslide": [
        "log10_pe",
        "snr_linear",
        "snr_db",
        "n",
        "iterations",
        "decode_power_norm",
        "total_norm",
        "total_db",
    ],
    "classical": ["log10_pe", "snr_db", "size", "decode_power_norm", "total_db"],
    "optimal-power": ["gamma", "snr_opt", "excess_over_shannon"],
    "threshold": ["gamma", "alpha", "pe_threshold"],
    "gapscan": ["gap", "log2_gap", "n", "log2_n"],
    "boundscan": ["n", "log2_pe_bound", "test_parameter", "delta"],
}


class Dataset(NamedTuple):
    """Rows of one run and the count of infeasible points left out."""

    frame: pd.DataFrame
    infeasible: int


def _frame(subcommand: str, rows: List[Dict[str, float]], infeasible: int) -> Dataset:
    frame = pd.DataFrame(rows, columns=COLUMNS[subcommand])
    if infeasible:
        logger.warning("%s: dropped %d infeasible point(s)", subcommand, infeasible)
    return Dataset(frame, infeasible)


def pe_grid(config: RunConfig) -> np.ndarray:
    """Log-spaced target error probabilities from ``pe_max`` down to ``pe_min``."""
    return np.logspace(math.log10(config.pe_max), math.log10(config.pe_min), config.points)


def _log_grid(lo: float, hi: float, points: int) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), points)


# ─── BUILDERS ───────────────────────────────────────────────────────────────────


def waterfall_dataset(config: RunConfig) -> Dataset:
    """Shannon waterfall: SNR needed at each target Pe with ideal coding."""
    rows = []
    for pe in pe_grid(config):
        snr = shannon_waterfall_snr(config.rate, float(pe), config.kind)
        rows.append({"log10_pe": math.log10(pe), "snr_linear": snr, "snr_db": snr_to_db(snr)})
    return _frame("waterfall", rows, 0)


def waterslide_dataset(config: RunConfig) -> Dataset:
    """Optimized total-power lower bound along the Pe grid."""
    weights = TechnologyWeights(gamma=config.gamma, alpha=config.alpha)
    points = waterslide_curve(
        config.rate,
        weights,
        pe_grid(config),
        config.kind,
        variant=config.variant,
        integer_iterations=config.integer_iterations,
        workers=config.workers,
    )
    rows = [
        {
            "log10_pe": math.log10(pt.target_pe),
            "snr_linear": pt.snr_transmit,
            "snr_db": pt.snr_db,
            "n": pt.n,
            "iterations": pt.iterations,
            "decode_power_norm": pt.decode_power_norm,
            "total_norm": pt.total_norm,
            "total_db": pt.total_db,
        }
        for pt in points
        if pt.feasible
    ]
    return _frame("waterslide", rows, sum(not pt.feasible for pt in points))


def classical_dataset(config: RunConfig) -> Dataset:
    """Jointly optimized classical scheme along the Pe grid."""
    scheme = ClassicalScheme(config.scheme, config.rate, config.e_per_op, config.exponent)
    rows, infeasible = [], 0
    for pe in pe_grid(config):
        try:
            opt = optimize_scheme(scheme, float(pe))
        except InfeasibleRegionError as e:
            logger.warning("classical point pe=%g infeasible: %s", pe, e)
            infeasible += 1
            continue
        if not math.isfinite(opt.total):
            infeasible += 1
            continue
        rows.append(
            {
                "log10_pe": math.log10(pe),
                "snr_db": snr_to_db(opt.snr),
                "size": opt.size,
                "decode_power_norm": opt.decode_power,
                "total_db": snr_to_db(opt.total),
            }
        )
    return _frame("classical", rows, infeasible)


def optimal_power_dataset(config: RunConfig) -> Dataset:
    """Asymptotically optimal transmit SNR over a grid of gamma."""
    threshold = min_snr_for_rate(config.rate, config.kind)
    rows, infeasible = [], 0
    for gamma in _log_grid(config.gamma_min, config.gamma_max, config.points):
        try:
            zeta = asymptotic_transmit_snr(config.rate, float(gamma), config.kind)
        except RuntimeError as e:
            logger.warning("no optimal SNR at gamma=%g: %s", gamma, e)
            infeasible += 1
            continue
        rows.append({"gamma": gamma, "snr_opt": zeta, "excess_over_shannon": (zeta - threshold) / threshold})
    return _frame("optimal-power", rows, infeasible)


def threshold_dataset(config: RunConfig) -> Dataset:
    """Uncoded-versus-coded threshold over a grid of gamma."""
    rows, infeasible = [], 0
    for gamma in _log_grid(config.gamma_min, config.gamma_max, config.points):
        pe = uncoded_coding_threshold(
            config.rate, float(gamma), config.alpha, config.kind, adjust_waterfall=config.adjust_waterfall
        )
        if math.isnan(pe):
            infeasible += 1
            continue
        rows.append({"gamma": gamma, "alpha": config.alpha, "pe_threshold": pe})
    return _frame("threshold", rows, infeasible)


def gapscan_dataset(config: RunConfig) -> Dataset:
    """Brute-force neighborhood size against the gap to capacity."""
    curve = n_vs_gap_curve(
        _log_grid(config.gap_min, config.gap_max, config.points),
        kind=config.kind,
        beta=config.beta,
        balanced=config.balanced,
        p=config.p,
        snr=config.snr,
        variant=config.variant,
    )
    rows = [
        {"gap": pt.gap, "log2_gap": math.log2(pt.gap), "n": pt.n, "log2_n": math.log2(pt.n)}
        for pt in curve
        if math.isfinite(pt.n)
    ]
    return _frame("gapscan", rows, len(curve) - len(rows))


def scan_channel(config: RunConfig) -> ChannelPoint:
    """Channel of a bound scan: fixed crossover, given SNR, or twice the threshold."""
    if config.p is not None:
        if config.kind != "bsc":
            raise ValueError("--p only applies to the bsc kind")
        return bsc_point_from_crossover(config.p)
    snr = config.snr if config.snr is not None else 2.0 * min_snr_for_rate(config.rate, config.kind)
    return ChannelPoint(config.kind, snr)


def boundscan_dataset(config: RunConfig) -> Dataset:
    """Lower bound on log2 Pe against the neighborhood size at a fixed channel."""
    channel = scan_channel(config)
    rows, infeasible = [], 0
    for n in _log_grid(config.n_min, config.n_max, config.points):
        try:
            res = pe_lower_bound(config.rate, channel, float(n), variant=config.variant)
        except InfeasibleRegionError as e:
            logger.warning("bound infeasible at n=%g: %s", n, e)
            infeasible += 1
            continue
        rows.append(
            {
                "n": n,
                "log2_pe_bound": res.log2_pe_bound,
                "test_parameter": res.opt_test_channel.parameter if res.opt_test_channel else math.nan,
                "delta": res.delta,
            }
        )
    return _frame("boundscan", rows, infeasible)


BUILDERS: Dict[str, Callable[[RunConfig], Dataset]] = {
    "waterfall": waterfall_dataset,
    "waterslide": waterslide_dataset,
    "classical": classical_dataset,
    "optimal-power": optimal_power_dataset,
    "threshold": threshold_dataset,
    "gapscan": gapscan_dataset,
    "boundscan": boundscan_dataset,
}


def build_dataset(config: RunConfig) -> Dataset:
    """Dispatch to the builder of ``config.subcommand``."""
    return BUILDERS[config.subcommand](config)
