"""
Command-line interface for waterslide.

Each subcommand computes one dataset family and writes it as CSV to standard
output or to ``--output``:

  - waterfall: Shannon waterfall SNR against target Pe.
  - waterslide: optimized total-power lower bound against target Pe.
  - classical: classical coding schemes against target Pe.
  - optimal-power: asymptotically optimal transmit SNR against gamma.
  - threshold: uncoded-versus-coded threshold against gamma.
  - gapscan: neighborhood size against the gap to capacity.
  - boundscan: lower bound on Pe against the neighborhood size.

Exit status is 0 on success, 1 on usage errors and 2 when some points fall
in an infeasible region (the remaining rows are still written). Diagnostics
go to standard error only.
"""

from __future__ import annotations

import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional

import typer

from ..core.errors import InfeasibleRegionError
from ..core.models import BOUND_VARIANTS, CHANNEL_KINDS, EXPONENT_KINDS, SCHEME_KINDS, RunConfig
from ..services.datasets import Dataset, build_dataset
from ..services.export import export_frame_to_csv, export_frame_to_json, frame_to_csv_text

app = typer.Typer(help="Bounds on the total power of iterative decoding, as CSV datasets")
logger = logging.getLogger(__name__)

# UsageError of whichever click build typer runs on
UsageError = typer.BadParameter.__bases__[0]

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# ─── HELPERS ────────────────────────────────────────────────────────────────────


def _parse_rate(text: str) -> float:
    """Parse a rate given as a decimal or a fraction such as ``1/3``."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise typer.BadParameter(f"cannot parse rate {text!r}") from e
    if not 0 < value < 1:
        raise typer.BadParameter("rate must lie in (0, 1)")
    return float(value)


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def _config(ctx: typer.Context, subcommand: str, **fields: Any) -> RunConfig:
    """Build a validated RunConfig or exit with status 1."""
    workers = (ctx.obj or {}).get("workers", 1)
    try:
        return RunConfig(subcommand=subcommand, workers=workers, **fields)  # type: ignore[arg-type]
    except ValueError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1)


def _dump_or_print(dataset: Dataset, output: Optional[Path], json_out: Optional[Path]) -> None:
    """Write the dataset as CSV to a file or stdout, optionally also as JSON."""
    if output:
        export_frame_to_csv(dataset.frame, output)
        typer.echo(f"Wrote {output}", err=True)
    else:
        typer.echo(frame_to_csv_text(dataset.frame), nl=False)
    if json_out:
        export_frame_to_json(dataset.frame, json_out)
        typer.echo(f"Wrote {json_out}", err=True)


def _run(ctx: typer.Context, subcommand: str, output: Optional[Path], json_out: Optional[Path], **fields: Any) -> None:
    config = _config(ctx, subcommand, output=output, **fields)
    try:
        dataset = build_dataset(config)
    except InfeasibleRegionError as e:
        typer.echo(f"Infeasible region: {e}", err=True)
        raise typer.Exit(code=2)
    except ValueError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1)
    _dump_or_print(dataset, output, json_out)
    if dataset.infeasible:
        typer.echo(f"{dataset.infeasible} point(s) infeasible and omitted", err=True)
        raise typer.Exit(code=2)


_KIND = typer.Option("bsc", "--kind", help=f"Channel family: {', '.join(CHANNEL_KINDS)}")
_VARIANT = typer.Option(
    "auto", "--bound-variant", "--variant", help=f"Lower-bound selection: {', '.join(BOUND_VARIANTS)}"
)
_RATE = typer.Option("1/3", "--rate", "-r", help="Code rate, decimal or fraction")
_POINTS = typer.Option(30, "--points", help="Number of grid points")
_PE_MIN = typer.Option(1e-60, "--pe-min", help="Smallest target error probability")
_PE_MAX = typer.Option(1e-2, "--pe-max", help="Largest target error probability")
_GAMMA_MIN = typer.Option(1e-3, "--gamma-min", help="Smallest gamma of the sweep")
_GAMMA_MAX = typer.Option(10.0, "--gamma-max", help="Largest gamma of the sweep")
_ALPHA = typer.Option(4.0, "--alpha", help="Node connectivity")
_OUTPUT = typer.Option(None, "--output", "-o", help="Write CSV to this file instead of stdout")
_JSON_OUT = typer.Option(None, "--json-out", help="Also write the rows as JSON")


# ─── APP CALLBACK ───────────────────────────────────────────────────────────────


@app.callback()
def _setup(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress to stderr"),
    workers: int = typer.Option(
        1,
        "--workers",
        envvar="WATERSLIDE_WORKERS",
        help="Worker processes for per-point computations",
    ),
) -> None:
    """Configure logging and parallelism before running any command."""
    _configure_logging(verbose)
    ctx.obj = {"workers": workers}


# ─── COMMANDS ───────────────────────────────────────────────────────────────────


@app.command("waterfall")
def cli_waterfall(
    ctx: typer.Context,
    rate: str = _RATE,
    kind: str = _KIND,
    pe_min: float = _PE_MIN,
    pe_max: float = _PE_MAX,
    points: int = _POINTS,
    output: Optional[Path] = _OUTPUT,
    json_out: Optional[Path] = _JSON_OUT,
) -> None:
    """Rate-distortion adjusted Shannon waterfall."""
    _run(ctx, "waterfall", output, json_out, rate=_parse_rate(rate), kind=kind, pe_min=pe_min, pe_max=pe_max, points=points)


@app.command("waterslide")
def cli_waterslide(
    ctx: typer.Context,
    rate: str = _RATE,
    kind: str = _KIND,
    gamma: float = typer.Option(0.3, "--gamma", "-g", help="Decoding energy per node-iteration (SNR units)"),
    alpha: float = _ALPHA,
    pe_min: float = _PE_MIN,
    pe_max: float = _PE_MAX,
    points: int = _POINTS,
    variant: str = _VARIANT,
    integer_iterations: bool = typer.Option(
        False, "--integer-iterations", help="Round iterations up to an integer"
    ),
    output: Optional[Path] = _OUTPUT,
    json_out: Optional[Path] = _JSON_OUT,
) -> None:
    """Lower bound on total power (transmit plus decoding) against target Pe."""
    _run(
        ctx,
        "waterslide",
        output,
        json_out,
        rate=_parse_rate(rate),
        kind=kind,
        gamma=gamma,
        alpha=alpha,
        pe_min=pe_min,
        pe_max=pe_max,
        points=points,
        variant=variant,
        integer_iterations=integer_iterations,
    )


@app.command("classical")
def cli_classical(
    ctx: typer.Context,
    scheme: str = typer.Option("viterbi", "--scheme", help=f"Coding scheme: {', '.join(SCHEME_KINDS)}"),
    rate: str = _RATE,
    e_per_op: float = typer.Option(0.3, "--e", "--e-per-op", help="Normalized energy per decoding operation"),
    exponent: str = typer.Option(
        "random", "--exponent", help=f"Block-code exponent model: {', '.join(EXPONENT_KINDS)}"
    ),
    pe_min: float = typer.Option(1e-30, "--pe-min", help="Smallest target error probability"),
    pe_max: float = _PE_MAX,
    points: int = _POINTS,
    output: Optional[Path] = _OUTPUT,
    json_out: Optional[Path] = _JSON_OUT,
) -> None:
    """Jointly optimized classical coding scheme against target Pe."""
    _run(
        ctx,
        "classical",
        output,
        json_out,
        scheme=scheme,
        rate=_parse_rate(rate),
        e_per_op=e_per_op,
        exponent=exponent,
        pe_min=pe_min,
        pe_max=pe_max,
        points=points,
    )


@app.command("optimal-power")
def cli_optimal_power(
    ctx: typer.Context,
    rate: str = _RATE,
    kind: str = _KIND,
    gamma_min: float = _GAMMA_MIN,
    gamma_max: float = _GAMMA_MAX,
    points: int = _POINTS,
    output: Optional[Path] = _OUTPUT,
    json_out: Optional[Path] = _JSON_OUT,
) -> None:
    """Asymptotically optimal transmit SNR against gamma."""
    _run(
        ctx,
        "optimal-power",
        output,
        json_out,
        rate=_parse_rate(rate),
        kind=kind,
        gamma_min=gamma_min,
        gamma_max=gamma_max,
        points=points,
    )


@app.command("threshold")
def cli_threshold(
    ctx: typer.Context,
    rate: str = _RATE,
    kind: str = _KIND,
    alpha: float = typer.Option(3.0, "--alpha", help="Node connectivity"),
    gamma_min: float = typer.Option(0.1, "--gamma-min", help="Smallest gamma of the sweep"),
    gamma_max: float = _GAMMA_MAX,
    points: int = _POINTS,
    adjust_waterfall: bool = typer.Option(
        True,
        "--adjusted/--unadjusted",
        help="Use the rate-distortion adjusted waterfall (default) or the plain Shannon SNR",
    ),
    output: Optional[Path] = _OUTPUT,
    json_out: Optional[Path] = _JSON_OUT,
) -> None:
    """Error probability below which coding can beat uncoded transmission."""
    _run(
        ctx,
        "threshold",
        output,
        json_out,
        rate=_parse_rate(rate),
        kind=kind,
        alpha=alpha,
        gamma_min=gamma_min,
        gamma_max=gamma_max,
        points=points,
        adjust_waterfall=adjust_waterfall,
    )


@app.command("gapscan")
def cli_gapscan(
    ctx: typer.Context,
    kind: str = _KIND,
    beta: float = typer.Option(1.0, "--beta", help="Target Pe is gap**beta"),
    balanced: bool = typer.Option(False, "--balanced", help="Use the Pe that balances both gaps"),
    p: Optional[float] = typer.Option(None, "--p", help="BSC crossover (default 0.1)"),
    snr: Optional[float] = typer.Option(None, "--snr", help="AWGN SNR (default gives C = 0.531)"),
    gap_min: float = typer.Option(1e-3, "--gap-min", help="Smallest gap"),
    gap_max: float = typer.Option(1e-1, "--gap-max", help="Largest gap"),
    points: int = typer.Option(10, "--points", help="Number of grid points"),
    variant: str = _VARIANT,
    output: Optional[Path] = _OUTPUT,
    json_out: Optional[Path] = _JSON_OUT,
) -> None:
    """Neighborhood size against the gap to capacity."""
    _run(
        ctx,
        "gapscan",
        output,
        json_out,
        kind=kind,
        beta=beta,
        balanced=balanced,
        p=p,
        snr=snr,
        gap_min=gap_min,
        gap_max=gap_max,
        points=points,
        variant=variant,
    )


@app.command("boundscan")
def cli_boundscan(
    ctx: typer.Context,
    rate: str = _RATE,
    kind: str = _KIND,
    p: Optional[float] = typer.Option(None, "--p", help="Fixed BSC crossover instead of an SNR"),
    snr: Optional[float] = typer.Option(None, "--snr", help="Channel SNR (default twice the threshold)"),
    n_min: float = typer.Option(1.0, "--n-min", help="Smallest neighborhood size"),
    n_max: float = typer.Option(1e9, "--n-max", help="Largest neighborhood size"),
    points: int = _POINTS,
    variant: str = _VARIANT,
    output: Optional[Path] = _OUTPUT,
    json_out: Optional[Path] = _JSON_OUT,
) -> None:
    """Lower bound on log2 Pe against the neighborhood size."""
    _run(
        ctx,
        "boundscan",
        output,
        json_out,
        rate=_parse_rate(rate),
        kind=kind,
        p=p,
        snr=snr,
        n_min=n_min,
        n_max=n_max,
        points=points,
        variant=variant,
    )


# ─── ENTRY POINTS ───────────────────────────────────────────────────────────────


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit status instead of exiting."""
    args = sys.argv[1:] if argv is None else list(argv)
    try:
        rv = app(args=args, prog_name="ws-cli", standalone_mode=False)
    except UsageError as e:
        e.show()
        return 1
    except typer.Abort:
        typer.echo("Aborted", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
