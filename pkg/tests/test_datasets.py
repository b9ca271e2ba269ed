# tests/test_datasets.py

import math

import pytest

from waterslide.core.models import RunConfig
from waterslide.services import datasets
from waterslide.services.channels import min_snr_for_rate, shannon_waterfall_snr


def test_pe_grid_runs_from_loose_to_strict():
    grid = datasets.pe_grid(RunConfig("waterfall", pe_min=1e-9, pe_max=1e-3, points=4))
    assert grid[0] == pytest.approx(1e-3)
    assert grid[-1] == pytest.approx(1e-9)
    assert len(grid) == 4


@pytest.mark.parametrize("subcommand", sorted(datasets.COLUMNS))
def test_every_subcommand_has_a_builder(subcommand):
    assert subcommand in datasets.BUILDERS


def test_waterfall_dataset_columns_and_order():
    ds = datasets.build_dataset(RunConfig("waterfall", pe_min=1e-12, pe_max=1e-2, points=5))
    assert list(ds.frame.columns) == datasets.COLUMNS["waterfall"]
    assert ds.infeasible == 0
    snrs = ds.frame["snr_linear"].tolist()
    assert all(a < b for a, b in zip(snrs, snrs[1:]))
    # a nonzero error probability relaxes the Shannon limit
    assert snrs[-1] <= min_snr_for_rate(1.0 / 3.0, "bsc")
    assert snrs[-1] == pytest.approx(shannon_waterfall_snr(1.0 / 3.0, 1e-12, "bsc"), rel=1e-12)


def test_waterslide_dataset_rows_are_feasible():
    ds = datasets.build_dataset(RunConfig("waterslide", pe_min=1e-9, pe_max=1e-3, points=3))
    assert list(ds.frame.columns) == datasets.COLUMNS["waterslide"]
    assert len(ds.frame) == 3
    assert (ds.frame["total_norm"] > ds.frame["snr_linear"]).all()


def test_gapscan_dataset_drops_gaps_beyond_capacity():
    ds = datasets.build_dataset(RunConfig("gapscan", gap_min=1e-2, gap_max=0.9, points=2))
    assert ds.infeasible == 1
    assert len(ds.frame) == 1
    assert len(ds.frame) + ds.infeasible == 2
    assert not ds.frame.isna().any().any()
    assert ds.frame["log2_gap"].iloc[0] == pytest.approx(math.log2(1e-2))


def test_scan_channel_choices():
    thr = min_snr_for_rate(1.0 / 3.0, "awgn")
    assert datasets.scan_channel(RunConfig("boundscan", kind="awgn")).snr == pytest.approx(2.0 * thr)
    assert datasets.scan_channel(RunConfig("boundscan", kind="awgn", snr=3.0)).snr == 3.0
    assert datasets.scan_channel(RunConfig("boundscan", p=0.1)).crossover_override == pytest.approx(0.1)
    with pytest.raises(ValueError):
        datasets.scan_channel(RunConfig("boundscan", kind="awgn", p=0.1))


def test_boundscan_dataset_is_nonincreasing():
    ds = datasets.build_dataset(RunConfig("boundscan", p=0.1, n_min=1.0, n_max=1e3, points=4))
    assert list(ds.frame.columns) == datasets.COLUMNS["boundscan"]
    bounds = ds.frame["log2_pe_bound"].tolist()
    assert all(b <= a + 1e-9 for a, b in zip(bounds, bounds[1:]))
