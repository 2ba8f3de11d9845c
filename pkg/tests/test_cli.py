"""End-to-end command-line runs on the synthetic approach fixture."""

from __future__ import annotations

import json

import pytest

from scenecrit.cli import main

from conftest import STRAIGHT_MAP_DOC, approach_csv


@pytest.fixture
def inputs(tmp_path):
    tracks = tmp_path / "approach.csv"
    tracks.write_text(approach_csv(), encoding="utf-8")
    lane_map = tmp_path / "map.json"
    lane_map.write_text(json.dumps(STRAIGHT_MAP_DOC), encoding="utf-8")
    return tracks, lane_map


ANALYZE_ARTIFACTS = (
    "scenario.json",
    "lane_map.json",
    "params.json",
    "records.jsonl",
    "timelines.json",
    "timelines.csv",
)


def run_analyze(inputs, out_dir):
    tracks, lane_map = inputs
    return main(
        ["analyze", "--tracks", str(tracks), "--map", str(lane_map), "--out", str(out_dir)]
    )


def test_analyze_writes_artifacts(inputs, tmp_path, capsys):
    out = tmp_path / "out"
    assert run_analyze(inputs, out) == 0
    for name in ANALYZE_ARTIFACTS:
        assert (out / name).is_file(), name
    printed = capsys.readouterr().out
    assert "scenario approach" in printed
    assert "60 frames" in printed
    # the summary names the closing pair at the peak
    assert "pair (1, 2)" in printed


def test_analyze_is_byte_identical(inputs, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_analyze(inputs, out1) == 0
    assert run_analyze(inputs, out2) == 0
    for name in ANALYZE_ARTIFACTS:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_analyze_scenario_json_reloads_identically(inputs, tmp_path):
    from scenecrit import load_scenario, parse_tracks
    from scenecrit.ingest import with_id

    out = tmp_path / "out"
    assert run_analyze(inputs, out) == 0
    reloaded = load_scenario(out / "scenario.json")
    original = with_id(parse_tracks(inputs[0].read_text()), "approach")
    assert reloaded == original


def test_empty_measures_is_usage_error(inputs, tmp_path, capsys):
    tracks, lane_map = inputs
    code = main(
        [
            "analyze",
            "--tracks", str(tracks),
            "--map", str(lane_map),
            "--measures", ",",
            "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 2
    assert "measure" in capsys.readouterr().err


def test_unknown_measure_is_usage_error(inputs, tmp_path):
    tracks, lane_map = inputs
    code = main(
        [
            "analyze",
            "--tracks", str(tracks),
            "--map", str(lane_map),
            "--measures", "banana",
            "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 2


def test_missing_map_file_is_runtime_error(inputs, tmp_path, capsys):
    tracks, _ = inputs
    code = main(
        [
            "analyze",
            "--tracks", str(tracks),
            "--map", str(tmp_path / "nope.json"),
            "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 1
    assert capsys.readouterr().err


def test_detect_finds_single_interval(inputs, tmp_path, capsys):
    tracks, lane_map = inputs
    out = tmp_path / "out"
    code = main(
        [
            "detect",
            "--tracks", str(tracks),
            "--map", str(lane_map),
            "--measures", "inv_ttc",
            "--threshold", "0.3",
            "--out", str(out),
        ]
    )
    assert code == 0
    doc = json.loads((out / "intervals.json").read_text())
    assert len(doc["intervals"]) == 1
    iv = doc["intervals"][0]
    assert iv["peak_pair"] == [1, 2]
    breakdown = json.loads((out / "breakdown.json").read_text())
    assert breakdown["breakdowns"][0]["pairs"][0]["pair"] == [1, 2]
    assert "1 critical interval" in capsys.readouterr().out


def test_detect_above_peak_finds_nothing(inputs, tmp_path):
    tracks, lane_map = inputs
    out = tmp_path / "out"
    code = main(
        [
            "detect",
            "--tracks", str(tracks),
            "--map", str(lane_map),
            "--threshold", "1e9",
            "--out", str(out),
        ]
    )
    assert code == 0
    assert json.loads((out / "intervals.json").read_text())["intervals"] == []


def test_export_writes_scene_view_and_cube(inputs, tmp_path):
    tracks, lane_map = inputs
    out = tmp_path / "out"
    code = main(
        [
            "export",
            "--tracks", str(tracks),
            "--map", str(lane_map),
            "--measures", "inv_ttc",
            "--threshold", "0.1",
            "--at", "5900",
            "--stride", "5",
            "--out", str(out),
        ]
    )
    assert code == 0
    scene_doc = json.loads((out / "scene_view_5900.json").read_text())
    assert scene_doc["kind"] == "scene_graph_view"
    assert sum(1 for p in scene_doc["primitives"] if p["type"] == "sphere") == 1
    cube_doc = json.loads((out / "cube_0_5900.json").read_text())
    assert cube_doc["kind"] == "space_time_cube"
    polylines = [p for p in cube_doc["primitives"] if p["type"] == "polyline"]
    assert len(polylines) == 4  # two tracks, elevated + ground each


def test_export_window_outside_scenario_fails(inputs, tmp_path, capsys):
    tracks, lane_map = inputs
    code = main(
        [
            "export",
            "--tracks", str(tracks),
            "--map", str(lane_map),
            "--window", "700000:800000",
            "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 1
    assert capsys.readouterr().err


def test_export_defaults_to_interval_peaks(inputs, tmp_path):
    tracks, lane_map = inputs
    out = tmp_path / "out"
    code = main(
        [
            "export",
            "--tracks", str(tracks),
            "--map", str(lane_map),
            "--measures", "inv_ttc",
            "--threshold", "0.3",
            "--out", str(out),
        ]
    )
    assert code == 0
    scene_views = sorted(out.glob("scene_view_*.json"))
    assert len(scene_views) == 1  # one detected interval -> its peak frame
