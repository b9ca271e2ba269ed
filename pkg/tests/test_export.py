# tests/test_export.py
import json
import math
from pathlib import Path

import pandas as pd
import pytest

import waterslide.services.export as export_module


@pytest.fixture
def frame():
    return pd.DataFrame({"n": [1.0, 10.0], "log2_pe_bound": [-0.5, 1.0 / 3.0], "delta": [0.1, math.nan]})


def test_csv_text_has_header_and_full_precision(frame):
    text = export_module.frame_to_csv_text(frame)
    lines = text.split("\n")
    assert lines[0] == "n,log2_pe_bound,delta"
    assert text.endswith("\n")
    # 17 significant digits survive a float round trip
    assert float(lines[2].split(",")[1]) == 1.0 / 3.0
    assert "\r" not in text


def test_csv_text_of_empty_frame_keeps_header():
    text = export_module.frame_to_csv_text(pd.DataFrame(columns=["gap", "n"]))
    assert text == "gap,n\n"


def test_export_csv_success(tmp_path, frame):
    out_file = tmp_path / "out.csv"
    export_module.export_frame_to_csv(frame, out_file)
    assert out_file.read_text(encoding="utf-8") == export_module.frame_to_csv_text(frame)


def test_export_csv_is_byte_identical(tmp_path, frame):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_module.export_frame_to_csv(frame, a)
    export_module.export_frame_to_csv(frame.copy(), b)
    assert a.read_bytes() == b.read_bytes()


def test_export_csv_write_error(tmp_path, frame):
    with pytest.raises(IOError) as exc:
        export_module.export_frame_to_csv(frame, tmp_path / "missing" / "out.csv")
    assert "Could not write CSV file" in str(exc.value)


def test_export_json_success(tmp_path, frame):
    out_file = tmp_path / "out.json"
    export_module.export_frame_to_json(frame, str(out_file))
    loaded = json.loads(out_file.read_text(encoding="utf-8"))
    assert len(loaded) == 2
    assert loaded[0]["n"] == 1.0
    # NaN becomes null
    assert loaded[1]["delta"] is None


def test_export_json_write_error(tmp_path, monkeypatch, frame):
    def fake_open(self, *args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr(Path, "open", fake_open)
    with pytest.raises(IOError) as exc:
        export_module.export_frame_to_json(frame, tmp_path / "out.json")
    assert "disk full" in str(exc.value)
