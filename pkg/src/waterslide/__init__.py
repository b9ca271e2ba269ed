"""
waterslide
==========

Information-theoretic bounds on the complexity of iterative decoding and the
total (transmit plus decoding) power it implies.

Features:
- Numerical primitives: binary entropy and its inverse, Gaussian tails,
  divergences, the lower Lambert W branch, Gallager exponents.
- Sphere-packing style lower bounds on bit-error probability for decoders
  that see ``n`` channel outputs, over BSC and AWGN channels, and their
  inversion to a minimum neighborhood size.
- Waterslide curves: total power minimized jointly over transmit SNR and
  decoding effort, for iterative decoders and classical coding schemes.
- Gap-to-capacity scaling of the required neighborhood size.
- A CLI (``ws-cli``) emitting every dataset as CSV.

Example:
    import waterslide as ws

    weights = ws.TechnologyWeights(gamma=0.3, alpha=4.0)
    point = ws.total_power_lower(1 / 3, weights, 1e-12, "bsc")
    print(point.snr_db, point.total_db)
"""

import logging

# Configure a library logger with a NullHandler by default
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

__version__ = "0.1.0"
__author__ = "waterslide developers"
__license__ = "MIT"

try:
    # core
    from .core.errors import InfeasibleRateWarning, InfeasibleRegionError
    from .core.models import (
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

    # services
    from .services.numerics import (
        binary_entropy,
        binary_entropy_inv,
        chernoff_k,
        error_exponent_random,
        error_exponent_random_awgn,
        error_exponent_sphere,
        gallager_e0_awgn,
        gallager_e0_bsc,
        hb_bound_pair,
        kl_bernoulli,
        kl_gaussian_var,
        lambert_w_lower,
        log2_q_function,
        q_function,
        q_inverse,
    )
    from .services.channels import (
        capacity,
        crossover_from_snr,
        db_to_snr,
        min_snr_for_rate,
        shannon_waterfall_snr,
        snr_to_db,
    )
    from .services.bounds import (
        awgn_mapping_f,
        awgn_mapping_f_l,
        awgn_pe_lower_asymptotic,
        awgn_pe_lower_numeric,
        bsc_mapping_f,
        bsc_pe_lower,
        bsc_pe_lower_at,
        chernoff_awgn_tail,
        chernoff_bsc_tail,
        iteration_bounds,
        min_neighborhood,
        pe_floor_over_channel,
        pe_lower_bound,
        trivial_neighborhood,
        trivial_pe_lower,
        upper_bound_neighborhood,
    )
    from .services.classical import (
        classical_curve,
        conv_error_exponent,
        optimize_scheme,
        repetition_pe,
        scheme_decode_power,
        scheme_pe,
    )
    from .services.optimizer import (
        asymptotic_transmit_snr,
        divergence_at_capacity,
        total_power_lower,
        total_power_upper,
        uncoded_coding_threshold,
        waterslide_curve,
        waterslide_upper_curve,
    )
    from .services.asymptotics import (
        awgn_gap_coeffs,
        balanced_pe,
        bsc_gap_coeffs,
        fitted_slope,
        gap_decomposition,
        n_vs_gap_curve,
        quadratic_sqrt_n_lower,
    )
    from .services.export import export_frame_to_csv, export_frame_to_json
except ImportError as e:
    logger.error("Failed to import waterslide submodule: %s", e)
    raise

__all__ = [
    # errors
    "InfeasibleRateWarning",
    "InfeasibleRegionError",
    # data models
    "BoundResult",
    "ChannelPoint",
    "ClassicalScheme",
    "GapSpec",
    "IterationBounds",
    "QuadraticCoeffs",
    "RunConfig",
    "SchemeOptimum",
    "TechnologyWeights",
    "TestChannel",
    "Tolerances",
    "WaterslidePoint",
    # numerics
    "binary_entropy",
    "binary_entropy_inv",
    "chernoff_k",
    "error_exponent_random",
    "error_exponent_random_awgn",
    "error_exponent_sphere",
    "gallager_e0_awgn",
    "gallager_e0_bsc",
    "hb_bound_pair",
    "kl_bernoulli",
    "kl_gaussian_var",
    "lambert_w_lower",
    "log2_q_function",
    "q_function",
    "q_inverse",
    # channels
    "capacity",
    "crossover_from_snr",
    "db_to_snr",
    "min_snr_for_rate",
    "shannon_waterfall_snr",
    "snr_to_db",
    # bounds
    "awgn_mapping_f",
    "awgn_mapping_f_l",
    "awgn_pe_lower_asymptotic",
    "awgn_pe_lower_numeric",
    "bsc_mapping_f",
    "bsc_pe_lower",
    "bsc_pe_lower_at",
    "chernoff_awgn_tail",
    "chernoff_bsc_tail",
    "iteration_bounds",
    "min_neighborhood",
    "pe_floor_over_channel",
    "pe_lower_bound",
    "trivial_neighborhood",
    "trivial_pe_lower",
    "upper_bound_neighborhood",
    # classical
    "classical_curve",
    "conv_error_exponent",
    "optimize_scheme",
    "repetition_pe",
    "scheme_decode_power",
    "scheme_pe",
    # optimizer
    "asymptotic_transmit_snr",
    "divergence_at_capacity",
    "total_power_lower",
    "total_power_upper",
    "uncoded_coding_threshold",
    "waterslide_curve",
    "waterslide_upper_curve",
    # asymptotics
    "awgn_gap_coeffs",
    "balanced_pe",
    "bsc_gap_coeffs",
    "fitted_slope",
    "gap_decomposition",
    "n_vs_gap_curve",
    "quadratic_sqrt_n_lower",
    # export
    "export_frame_to_csv",
    "export_frame_to_json",
    # metadata
    "__version__",
    "__author__",
    "__license__",
]
