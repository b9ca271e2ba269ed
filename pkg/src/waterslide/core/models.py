"""
waterslide.models
=================

Typed value objects shared by the computational services.

Defines:
- Tolerances: root-finder configuration.
- ChannelPoint / TestChannel: the physical channel and the hypothetical
  degraded channel swept inside the sphere-packing bounds.
- TechnologyWeights: decoder technology constants (gamma, alpha).
- BoundResult / IterationBounds: evaluated lower bounds and iteration counts.
- WaterslidePoint: one point of an optimized total-power curve.
- ClassicalScheme / SchemeOptimum: classical-code waterslide models.
- QuadraticCoeffs / GapSpec: gap-to-capacity analysis.
- RunConfig: a validated CLI run.

All objects are frozen dataclasses that validate themselves in
``__post_init__`` and raise ``ValueError`` on bad input.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Literal, Optional

logger = logging.getLogger(__name__)


ChannelKind = Literal["bsc", "awgn"]

BoundVariant = Literal["auto", "asymptotic", "numeric", "combined"]

SchemeKind = Literal[
    "repetition",
    "block_ml",
    "viterbi",
    "magic_sequential",
    "magic_syndrome",
]

ExponentKind = Literal["random", "sphere"]

TForm = Literal["appendix", "theorem"]

Subcommand = Literal[
    "waterfall",
    "waterslide",
    "classical",
    "optimal-power",
    "threshold",
    "gapscan",
    "boundscan",
]

CHANNEL_KINDS = ("bsc", "awgn")
BOUND_VARIANTS = ("auto", "asymptotic", "numeric", "combined")
SCHEME_KINDS = (
    "repetition",
    "block_ml",
    "viterbi",
    "magic_sequential",
    "magic_syndrome",
)
EXPONENT_KINDS = ("random", "sphere")


def _check_kind(kind: str) -> None:
    if kind not in CHANNEL_KINDS:
        raise ValueError(f"kind must be one of {CHANNEL_KINDS}, got {kind!r}")


@dataclass(frozen=True)
class Tolerances:
    """Root-finder configuration shared by every iterative solve."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class ChannelPoint:
    """
    Physical channel operating point.

    Attributes
    ----------
    kind : {"bsc", "awgn"}
        ``"bsc"`` is BPSK over AWGN followed by hard decisions, so the
        crossover probability derives from the SNR as ``p = Q(sqrt(snr))``.
    snr : float
        Linear transmit power ratio ``P_T / sigma_P^2`` (>= 0).
    crossover_override : float, optional
        Crossover probability set directly (non-physical, for tests and
        analysis at fixed ``p``). Only valid for the BSC kind.
    """

    kind: ChannelKind
    snr: float
    crossover_override: Optional[float] = None

    def __post_init__(self) -> None:
        _check_kind(self.kind)
        if not (self.snr >= 0 and math.isfinite(self.snr)):
            raise ValueError("snr must be finite and >= 0")
        if self.crossover_override is not None:
            if self.kind != "bsc":
                raise ValueError("crossover_override only applies to the bsc kind")
            if not 0.0 < self.crossover_override <= 0.5:
                raise ValueError("crossover_override must lie in (0, 0.5]")

    @property
    def physical(self) -> bool:
        return self.crossover_override is None


@dataclass(frozen=True)
class TestChannel:
    """
    Hypothetical degraded channel G used inside the bounds.

    Exactly one of ``g`` (BSC crossover) or ``var_ratio``
    (``sigma_G^2 / sigma_P^2``, AWGN) is set.
    """

    __test__ = False  # not a pytest class

    g: Optional[float] = None
    var_ratio: Optional[float] = None

    def __post_init__(self) -> None:
        if (self.g is None) == (self.var_ratio is None):
            raise ValueError("set exactly one of g or var_ratio")
        if self.g is not None and not 0.0 < self.g <= 0.5:
            raise ValueError("g must lie in (0, 0.5]")
        if self.var_ratio is not None and not self.var_ratio >= 1.0:
            raise ValueError("var_ratio must be >= 1")

    @property
    def kind(self) -> ChannelKind:
        return "bsc" if self.g is not None else "awgn"

    @property
    def parameter(self) -> float:
        return float(self.g if self.g is not None else self.var_ratio)


@dataclass(frozen=True)
class TechnologyWeights:
    """
    Decoder technology constants.

    Attributes
    ----------
    gamma : float
        Normalized energy per node per iteration, in SNR units.
    alpha : float, default 4.0
        Node connectivity (>= 2).
    xi_t, xi_d, e_node, sigma_p2 : float, optional
        Raw quantities (linear path loss, decoder scaling, joules per node,
        noise energy in joules). When all are given, ``gamma`` must equal
        ``xi_d * e_node / (sigma_p2 * xi_t * log2(alpha))``.
    """

    gamma: float
    alpha: float = 4.0
    xi_t: Optional[float] = None
    xi_d: Optional[float] = None
    e_node: Optional[float] = None
    sigma_p2: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")
        if not self.alpha >= 2:
            raise ValueError("alpha must be >= 2")
        raw = (self.xi_t, self.xi_d, self.e_node, self.sigma_p2)
        if any(v is not None for v in raw):
            if any(v is None for v in raw):
                raise ValueError("raw fields xi_t, xi_d, e_node, sigma_p2 go together")
            if any(v <= 0 for v in raw):  # type: ignore[operator]
                raise ValueError("raw fields must be > 0")
            expected = self._gamma_from_raw(*raw, alpha=self.alpha)  # type: ignore[arg-type]
            if not math.isclose(self.gamma, expected, rel_tol=1e-9):
                raise ValueError(
                    f"gamma={self.gamma} inconsistent with raw fields (expected {expected})"
                )

    @staticmethod
    def _gamma_from_raw(
        xi_t: float, xi_d: float, e_node: float, sigma_p2: float, *, alpha: float
    ) -> float:
        return xi_d * e_node / (sigma_p2 * xi_t * math.log2(alpha))

    @classmethod
    def from_raw(
        cls,
        e_node: float,
        sigma_p2: float,
        xi_t: float,
        xi_d: float = 1.0,
        alpha: float = 4.0,
        xi_t_in_db: bool = False,
    ) -> "TechnologyWeights":
        """
        Build weights from physical quantities.

        Parameters
        ----------
        e_node : float
            Energy per node per iteration (J).
        sigma_p2 : float
            Receiver noise energy (J).
        xi_t : float
            Transmit path loss, linear or dB (see ``xi_t_in_db``).
        xi_d : float, default 1.0
            Decoder-side scaling.
        alpha : float, default 4.0
            Node connectivity.
        xi_t_in_db : bool, default False
            Interpret ``xi_t`` in decibels.
        """
        xi_lin = 10.0 ** (xi_t / 10.0) if xi_t_in_db else float(xi_t)
        gamma = cls._gamma_from_raw(xi_lin, xi_d, e_node, sigma_p2, alpha=alpha)
        return cls(
            gamma=gamma,
            alpha=alpha,
            xi_t=xi_lin,
            xi_d=xi_d,
            e_node=e_node,
            sigma_p2=sigma_p2,
        )


@dataclass(frozen=True)
class BoundResult:
    """
    Evaluated lower bound on the average bit-error probability.

    Attributes
    ----------
    n : float
        Neighborhood size the bound was evaluated at.
    log2_pe_bound : float
        log2 of the lower bound (``-inf`` when no test channel is feasible).
    opt_test_channel : TestChannel, optional
        Maximizing test channel.
    delta : float
        ``1 - C(G)/R`` at the maximizer.
    """

    n: float
    log2_pe_bound: float
    opt_test_channel: Optional[TestChannel]
    delta: float

    def __post_init__(self) -> None:
        if self.log2_pe_bound > 0:
            raise ValueError("log2_pe_bound must be <= 0")


@dataclass(frozen=True)
class IterationBounds:
    """Iteration counts implied by a neighborhood size."""

    l_lower: float
    l_upper: float
    alpha: float

    def __post_init__(self) -> None:
        if not self.alpha >= 2:
            raise ValueError("alpha must be >= 2")
        if self.l_upper < self.l_lower:
            raise ValueError("l_upper must be >= l_lower")


@dataclass(frozen=True)
class WaterslidePoint:
    """
    One point of an optimized total-power curve.

    ``feasible=False`` marks a sentinel row whose numeric fields are NaN.
    """

    target_pe: float
    snr_transmit: float
    n: float
    iterations: float
    decode_power_norm: float
    total_norm: float
    feasible: bool = True

    @classmethod
    def infeasible(cls, target_pe: float) -> "WaterslidePoint":
        nan = float("nan")
        return cls(target_pe, nan, nan, nan, nan, nan, feasible=False)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr_transmit)

    @property
    def total_db(self) -> float:
        return 10.0 * math.log10(self.total_norm)


@dataclass(frozen=True)
class ClassicalScheme:
    """
    Classical coding scheme with a (Pe model, decoder power model) pair.

    Attributes
    ----------
    kind : SchemeKind
        One of repetition, block_ml, viterbi, magic_sequential, magic_syndrome.
    rate : float
        Code rate in (0, 1).
    energy_per_op : float, default 0.3
        Normalized energy per decoding operation, in SNR units.
    exponent : {"random", "sphere"}, default "random"
        Block-code error exponent model.
    """

    kind: SchemeKind
    rate: float
    energy_per_op: float = 0.3
    exponent: ExponentKind = "random"

    def __post_init__(self) -> None:
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"kind must be one of {SCHEME_KINDS}")
        if not 0.0 < self.rate < 1.0:
            raise ValueError("rate must lie in (0, 1)")
        if self.energy_per_op < 0:
            raise ValueError("energy_per_op must be >= 0")
        if self.exponent not in EXPONENT_KINDS:
            raise ValueError(f"exponent must be one of {EXPONENT_KINDS}")

    @property
    def is_convolutional(self) -> bool:
        return self.kind in ("viterbi", "magic_sequential")


@dataclass(frozen=True)
class SchemeOptimum:
    """Jointly optimized operating point of a classical scheme."""

    scheme: ClassicalScheme
    target_pe: float
    snr: float
    size: float
    decode_power: float
    total: float

    @property
    def size_rounded(self) -> int:
        return int(math.ceil(self.size - 1e-9))


@dataclass(frozen=True)
class QuadraticCoeffs:
    """
    Coefficients of ``a*n + b*sqrt(n) + c <= 0`` bounding the neighborhood.

    BSC coefficients are in bits, AWGN coefficients in nats. ``details``
    holds the exact intermediate quantities, ``taylor`` the small-gap
    approximations of the same quantities for comparison.
    """

    a: float
    b: float
    c: float
    kind: ChannelKind
    details: Dict[str, float] = field(default_factory=dict)
    taylor: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_kind(self.kind)


@dataclass(frozen=True)
class GapSpec:
    """
    Settings of a gap-to-capacity study.

    Attributes
    ----------
    gap : float
        ``C(P) - R`` in bits per channel use.
    beta : float, default 1.0
        Target error probability is ``gap ** beta`` unless ``balanced``.
    balanced : bool, default False
        Use the Pe that equalizes the rate-distortion and code gaps.
    r : float, optional
        Test-channel substitution exponent; defaults to
        ``0.9 * min(beta * (d - 1) / d, 1)``.
    d : float, default 10.0
        Entropy-bound parameter (> 1).
    """

    gap: float
    beta: float = 1.0
    balanced: bool = False
    r: Optional[float] = None
    d: float = 10.0

    def __post_init__(self) -> None:
        if not self.gap > 0:
            raise ValueError("gap must be > 0")
        if not self.beta > 0:
            raise ValueError("beta must be > 0")
        if not self.d > 1:
            raise ValueError("d must be > 1")
        if self.r is not None and not 0.0 < self.r < 1.0:
            raise ValueError("r must lie in (0, 1)")

    @property
    def r_effective(self) -> float:
        if self.r is not None:
            return self.r
        beta = 1.0 if self.balanced else self.beta
        return 0.9 * min(beta * (self.d - 1.0) / self.d, 1.0)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration of one CLI run."""

    subcommand: Subcommand
    rate: float = 1.0 / 3.0
    kind: ChannelKind = "bsc"
    gamma: float = 0.3
    alpha: float = 4.0
    e_per_op: float = 0.3
    pe_min: float = 1e-60
    pe_max: float = 1e-2
    points: int = 30
    variant: BoundVariant = "auto"
    integer_iterations: bool = False
    output: Optional[Path] = None
    scheme: SchemeKind = "viterbi"
    exponent: ExponentKind = "random"
    beta: float = 1.0
    balanced: bool = False
    snr: Optional[float] = None
    p: Optional[float] = None
    gap_min: float = 1e-3
    gap_max: float = 1e-1
    n_min: float = 1.0
    n_max: float = 1e9
    gamma_min: float = 1e-3
    gamma_max: float = 10.0
    adjust_waterfall: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        _check_kind(self.kind)
        if self.points < 2:
            raise ValueError("points must be >= 2")
        if not 0.0 < self.pe_min < self.pe_max < 0.5:
            raise ValueError("need 0 < pe_min < pe_max < 0.5")
        if not 0.0 < self.rate:
            raise ValueError("rate must be > 0")
        if not self.gamma > 0 or not self.alpha >= 2:
            raise ValueError("gamma must be > 0 and alpha >= 2")
        if self.variant not in BOUND_VARIANTS:
            raise ValueError(f"variant must be one of {BOUND_VARIANTS}")
        if self.scheme not in SCHEME_KINDS:
            raise ValueError(f"scheme must be one of {SCHEME_KINDS}")
        if self.exponent not in EXPONENT_KINDS:
            raise ValueError(f"exponent must be one of {EXPONENT_KINDS}")
        if not 0.0 < self.gap_min < self.gap_max:
            raise ValueError("need 0 < gap_min < gap_max")
        if not 1.0 <= self.n_min < self.n_max:
            raise ValueError("need 1 <= n_min < n_max")
        if not 0.0 < self.gamma_min < self.gamma_max:
            raise ValueError("need 0 < gamma_min < gamma_max")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
