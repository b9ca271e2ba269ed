"""
waterslide.channels
===================

Channel operating points, capacities and capacity inversion for the BSC
(BPSK over AWGN with hard decisions) and AWGN channel families.

SNR is carried as a linear ratio ``P_T / sigma_P^2``; decibels only appear at
the I/O boundary through ``snr_to_db`` / ``db_to_snr``.
"""

import logging
import math
from typing import Union

from ..core.models import (
    DEFAULT_TOLERANCES,
    ChannelKind,
    ChannelPoint,
    TestChannel,
    Tolerances,
)
from .numerics import binary_entropy, binary_entropy_inv, q_function, q_inverse

logger = logging.getLogger(__name__)


def snr_to_db(snr: float) -> float:
    """Linear power ratio to decibels (``-inf`` at 0)."""
    if snr < 0:
        raise ValueError("snr must be >= 0")
    return 10.0 * math.log10(snr) if snr > 0 else -math.inf


def db_to_snr(db: float) -> float:
    """Decibels to a linear power ratio."""
    return 10.0 ** (db / 10.0)


def crossover_from_snr(snr: float) -> float:
    """
    Crossover probability of BPSK with hard decisions, ``p = Q(sqrt(snr))``.

    Parameters
    ----------
    snr : float
        Linear SNR (>= 0).

    Returns
    -------
    float
        Crossover probability in (0, 0.5].
    """
    if snr < 0:
        raise ValueError("snr must be >= 0")
    return float(q_function(math.sqrt(snr)))


def channel_crossover(point: ChannelPoint) -> float:
    """Crossover probability of a BSC operating point."""
    if point.kind != "bsc":
        raise ValueError("crossover is only defined for the bsc kind")
    if point.crossover_override is not None:
        return point.crossover_override
    return crossover_from_snr(point.snr)


def bsc_point_from_crossover(p: float) -> ChannelPoint:
    """
    BSC point built from a crossover probability instead of an SNR.

    Non-physical: the SNR field is back-filled as ``Q^{-1}(p)^2`` for
    reporting and the crossover is pinned to ``p`` exactly.
    """
    if not 0.0 < p <= 0.5:
        raise ValueError("p must lie in (0, 0.5]")
    snr = float(q_inverse(p)) ** 2 if p < 0.5 else 0.0
    logger.debug("Constructed non-physical BSC point p=%g (snr=%g)", p, snr)
    return ChannelPoint("bsc", snr, crossover_override=p)


def capacity(channel: Union[ChannelPoint, TestChannel]) -> float:
    """
    Capacity in bits per channel use.

    BSC: ``1 - h_b(p)``; AWGN: ``log2(1 + snr) / 2``. Test channels use
    ``1 - h_b(g)`` or ``log2(1 + snr / var_ratio) / 2`` and require the
    physical SNR, so only their BSC form is handled here.
    """
    if isinstance(channel, TestChannel):
        if channel.g is None:
            raise ValueError("AWGN test-channel capacity needs the snr; use awgn_test_capacity")
        return 1.0 - float(binary_entropy(channel.g))
    if channel.kind == "bsc":
        return 1.0 - float(binary_entropy(channel_crossover(channel)))
    return 0.5 * math.log2(1.0 + channel.snr)


def awgn_test_capacity(snr: float, var_ratio: float) -> float:
    """Capacity of the AWGN test channel with noise ``var_ratio * sigma_P^2``."""
    if var_ratio <= 0:
        raise ValueError("var_ratio must be > 0")
    return 0.5 * math.log2(1.0 + snr / var_ratio)


def min_snr_for_rate(
    rate: float,
    kind: ChannelKind,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """
    Shannon-limit SNR: the smallest SNR whose capacity equals ``rate``.

    AWGN uses the closed form ``2^(2R) - 1``. The BSC inverts twice:
    ``p* = h_b^{-1}(1 - R)`` then ``snr = Q^{-1}(p*)^2``.

    Raises
    ------
    ValueError
        If ``rate < 0``, or ``rate >= 1`` for the BSC.
    """
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if rate == 0:
        return 0.0
    if kind == "awgn":
        return math.expm1(2.0 * rate * math.log(2.0))
    if kind != "bsc":
        raise ValueError(f"unknown channel kind {kind!r}")
    if rate >= 1.0:
        raise ValueError("BSC rate must be < 1")
    p_star = float(binary_entropy_inv(1.0 - rate, tolerances))
    if p_star >= 0.5:
        return 0.0
    return float(q_inverse(p_star)) ** 2


def shannon_waterfall_snr(
    rate: float,
    pe: float,
    kind: ChannelKind,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """
    Waterfall SNR adjusted for the allowed bit-error rate.

    A bit-error probability ``pe`` lowers the required capacity to
    ``rate * (1 - h_b(pe))``.
    """
    if not 0.0 <= pe <= 0.5:
        raise ValueError("pe must lie in [0, 0.5]")
    return min_snr_for_rate(rate * (1.0 - float(binary_entropy(pe))), kind, tolerances)
