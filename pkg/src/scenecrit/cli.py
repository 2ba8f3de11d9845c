"""Batch command-line pipeline: analyze, detect, export, serve.

``analyze`` sweeps a recording into reusable artifacts (records, timelines,
canonical inputs), ``detect`` extracts critical intervals with per-pair
breakdowns, ``export`` writes visualization documents, and ``serve`` exposes
analyzed scenario directories over HTTP for the interactive viewer.

Exit codes: 0 success, 1 runtime/pipeline error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import (
    ALL_MEASURES,
    Measure,
    analyze_scenario,
    detect_critical_intervals,
    intervals_to_json,
    pair_breakdown,
    timelines_to_csv,
    timelines_to_json,
)
from .criticality import MeasureParams, load_params
from .errors import ScenecritError
from .ingest import (
    IngestConfig,
    Scenario,
    parse_tracks,
    scenario_to_json,
    scene_at,
    with_id,
)
from .jsonio import dump_json_file, load_json_file
from .lanemap import LaneMap, lane_map_to_json, load_lane_map
from .scenegraph import build_scene_graph
from .visexport import export_scene_graph_view, export_space_time_cube

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def _parse_measures(raw: str) -> list[Measure]:
    names = [part.strip() for part in raw.split(",") if part.strip()]
    if not names:
        raise ValueError("at least one measure must be selected")
    try:
        return [Measure(name) for name in names]
    except ValueError:
        valid = ", ".join(m.value for m in ALL_MEASURES)
        raise ValueError(f"unknown measure in {raw!r}; valid: {valid}")


def _parse_window(raw: str) -> tuple[int, int]:
    try:
        lo, hi = raw.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ValueError(f"window must be T0:T1 in milliseconds, got {raw!r}")


def _load_inputs(args) -> tuple[Scenario, LaneMap, MeasureParams]:
    if getattr(args, "ingest_config", None):
        config = IngestConfig.from_json(load_json_file(args.ingest_config))
    else:
        config = IngestConfig()
    with open(args.tracks, "r", encoding="utf-8", newline="") as fh:
        scenario = parse_tracks(fh, config)
    if scenario.id == "scenario":  # no explicit id: name after the input file
        scenario = with_id(scenario, Path(args.tracks).stem)
    lane_map = load_lane_map(args.map)
    params = load_params(args.params) if args.params else MeasureParams()
    return scenario, lane_map, params


def _write_common_artifacts(out: Path, scenario, lane_map, params) -> None:
    out.mkdir(parents=True, exist_ok=True)
    # exact float reprs here: these files must parse back to identical values
    dump_json_file(scenario_to_json(scenario), out / "scenario.json", digits=None)
    dump_json_file(lane_map_to_json(lane_map), out / "lane_map.json", digits=None)
    dump_json_file(params.to_json(), out / "params.json", digits=None)


def cmd_analyze(args) -> int:
    measures = _parse_measures(args.measures)
    scenario, lane_map, params = _load_inputs(args)
    records, timelines = analyze_scenario(scenario, lane_map, params, measures)

    out = Path(args.out)
    _write_common_artifacts(out, scenario, lane_map, params)
    from .analysis import write_records_jsonl

    write_records_jsonl(records, out / "records.jsonl")
    dump_json_file(timelines_to_json(timelines), out / "timelines.json")
    (out / "timelines.csv").write_text(timelines_to_csv(timelines), encoding="utf-8")

    t_lo, t_hi = scenario.span
    print(f"scenario {scenario.id}: {len(scenario.objects)} tracks, "
          f"{len(scenario.timestamps)} frames, t = [{t_lo}, {t_hi}] ms")
    for measure in measures:
        tl = timelines[measure]
        peak_t, peak_v = tl.peak()
        pair = None
        for iv in detect_critical_intervals(tl, threshold=0.0, min_gap=1, records=records):
            if iv.peak_timestamp == peak_t:
                pair = iv.peak_pair
                break
        pair_text = f" pair ({pair[0]}, {pair[1]})" if pair else ""
        print(f"  {measure.value}: peak {peak_v:.6g} at t = {peak_t} ms{pair_text}")
    print(f"artifacts written to {out}")
    return 0


def cmd_detect(args) -> int:
    measures = _parse_measures(args.measures)
    scenario, lane_map, params = _load_inputs(args)
    records, timelines = analyze_scenario(scenario, lane_map, params, measures)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    all_intervals = []
    breakdowns = []
    for measure in measures:
        intervals = detect_critical_intervals(
            timelines[measure], args.threshold, args.min_gap, records
        )
        all_intervals.extend(intervals)
        for iv in intervals:
            breakdowns.append(
                {"interval": iv.to_json(), "pairs": pair_breakdown(records, iv)}
            )
    dump_json_file(
        intervals_to_json(all_intervals, args.threshold, args.min_gap),
        out / "intervals.json",
    )
    dump_json_file({"version": 1, "breakdowns": breakdowns}, out / "breakdown.json")

    print(f"{len(all_intervals)} critical interval(s) at threshold {args.threshold:g}")
    for iv in all_intervals:
        pair_text = (
            f" pair ({iv.peak_pair[0]}, {iv.peak_pair[1]})" if iv.peak_pair else ""
        )
        print(
            f"  {iv.measure.value}: [{iv.t_start}, {iv.t_end}] ms, "
            f"peak {iv.peak_value:.6g} at t = {iv.peak_timestamp} ms{pair_text}"
        )
    return 0


def cmd_export(args) -> int:
    measures = _parse_measures(args.measures)
    scenario, lane_map, params = _load_inputs(args)
    records, timelines = analyze_scenario(scenario, lane_map, params, measures)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    measure = measures[0]
    if args.at is not None:
        frame_ts = list(args.at)
    else:
        frame_ts = [
            iv.peak_timestamp
            for iv in detect_critical_intervals(
                timelines[measure], args.threshold, args.min_gap, records
            )
        ]
    by_t: dict[int, list] = {}
    for r in records:
        by_t.setdefault(r.timestamp, []).append(r)
    for t in frame_ts:
        graph = build_scene_graph(scene_at(scenario, t), lane_map, timestamp=t)
        doc = export_scene_graph_view(
            graph, by_t.get(t, []), args.threshold, measure
        )
        dump_json_file(doc.to_json(), out / f"scene_view_{t}.json")

    window = args.window if args.window else scenario.span
    cube = export_space_time_cube(
        scenario, window, connector_stride=args.stride
    )
    dump_json_file(cube.to_json(), out / f"cube_{window[0]}_{window[1]}.json")

    print(f"wrote {len(frame_ts)} scene view(s) and 1 cube document to {out}")
    return 0


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import create_app

    scenario_dir = args.dir or os.environ.get("SCENARIO_DIR")
    if not scenario_dir:
        print("serve: no scenario directory (--dir or SCENARIO_DIR)", file=sys.stderr)
        return USAGE_ERROR
    host, _, port = args.addr.partition(":")
    app = create_app(scenario_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8099), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenecrit",
        description="Criticality analysis and visualization export for "
        "recorded road-traffic scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tracks", required=True, help="object-list CSV file")
        p.add_argument("--map", required=True, help="lane map JSON file")
        p.add_argument("--params", help="measure parameter JSON file")
        p.add_argument(
            "--ingest-config", help="column mapping / unit config JSON file"
        )
        p.add_argument(
            "--measures",
            default="inv_ttc,rss,sff",
            help="comma-separated measure list (inv_ttc, rss, sff)",
        )
        p.add_argument("--out", required=True, help="output directory")

    p_analyze = sub.add_parser("analyze", help="evaluate all frames, write artifacts")
    add_inputs(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_detect = sub.add_parser("detect", help="extract critical intervals")
    add_inputs(p_detect)
    p_detect.add_argument("--threshold", type=float, default=0.1)
    p_detect.add_argument("--min-gap", type=int, default=5, dest="min_gap")
    p_detect.set_defaults(func=cmd_detect)

    p_export = sub.add_parser("export", help="write visualization documents")
    add_inputs(p_export)
    p_export.add_argument("--threshold", type=float, default=0.1)
    p_export.add_argument("--min-gap", type=int, default=5, dest="min_gap")
    p_export.add_argument(
        "--at",
        type=int,
        action="append",
        help="scene-view timestamp (ms), repeatable; default: interval peaks",
    )
    p_export.add_argument(
        "--window", type=_parse_window, help="cube window T0:T1 in ms (default: full span)"
    )
    p_export.add_argument("--stride", type=int, default=1, help="connector stride, frames")
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="serve analyzed scenarios over HTTP")
    p_serve.add_argument("--dir", help="directory of analyzed scenario folders")
    p_serve.add_argument("--addr", default="127.0.0.1:8099", help="host:port")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ScenecritError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    except OSError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
