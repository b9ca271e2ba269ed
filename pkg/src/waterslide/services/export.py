"""
waterslide.export
=================

Export utilities for the waterslide package.

Writes dataset frames as CSV (17 significant digits, header always present,
byte-identical for identical input) or as JSON records.
"""

import json
import logging
from pathlib import Path
from typing import Union

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    """Render a frame as CSV text with a header row and ``\\n`` line endings."""
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def export_frame_to_csv(frame: pd.DataFrame, path: Union[str, Path]) -> None:
    """
    Write a dataset frame to a CSV file.

    Parameters
    ----------
    frame : pandas.DataFrame
        Dataset rows.
    path : str or Path
        Output CSV file path.

    Raises
    ------
    IOError
        If writing the file fails.
    """
    try:
        out_path = Path(path)
        with out_path.open("w", newline="", encoding="utf-8") as f:
            f.write(frame_to_csv_text(frame))
        logger.info("Exported %d rows to CSV: %s", len(frame), path)
    except Exception as e:
        logger.exception("Failed to write CSV export to %s", path)
        raise IOError(f"Could not write CSV file '{path}': {e}") from e


def export_frame_to_json(frame: pd.DataFrame, path: Union[str, Path]) -> None:
    """
    Write a dataset frame to a JSON file as a list of records.

    Non-finite values become ``null``.

    Raises
    ------
    IOError
        If writing the file fails.
    """
    records = json.loads(frame.to_json(orient="records", double_precision=15))
    try:
        out_path = Path(path)
        with out_path.open("w", encoding="utf-8") as f:
            json.dump(records, f, indent=2)
        logger.info("Exported %d rows to JSON: %s", len(frame), path)
    except Exception as e:
        logger.exception("Failed to write JSON export to %s", path)
        raise IOError(f"Could not write JSON file '{path}': {e}") from e
