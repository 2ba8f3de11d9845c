"""Read-only HTTP API over analyzed scenario directories.

Each subdirectory of the scenario root holds the artifacts written by the
``analyze`` command (scenario.json, lane_map.json, params.json,
records.jsonl, timelines.json). Everything is loaded once at startup and
never mutated, so concurrent reads are safe and identical requests return
identical bodies. Thresholds and windows are applied per request; the
interval logic is the same code path the ``detect`` command uses.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware

from .analysis import (
    ALL_MEASURES,
    Measure,
    Timeline,
    detect_critical_intervals,
    read_records_jsonl,
    timelines_from_json,
)
from .criticality import CriticalityRecord, MeasureParams
from .ingest import Scenario, load_scenario, scene_at
from .jsonio import load_json_file, round_floats
from .lanemap import LaneMap, build_conflicts, lane_map_to_json, parse_lane_map
from .scenegraph import GraphConfig, SceneGraph, build_scene_graph
from .visexport import export_scene_graph_view, export_space_time_cube

DRIVER_EYE_UP = 0.5  # meters above the actor reference point
DRIVER_EYE_LEFT = 0.3  # meters left of the actor center, along +90 deg of yaw


@dataclass(frozen=True)
class ScenarioHandle:
    """One fully loaded scenario and its precomputed analysis artifacts."""

    id: str
    scenario: Scenario
    lane_map: LaneMap
    params: MeasureParams
    records: tuple[CriticalityRecord, ...]
    timelines: Mapping[Measure, Timeline]
    records_by_t: Mapping[int, tuple[CriticalityRecord, ...]]
    graph_config: GraphConfig = field(default_factory=GraphConfig)

    @classmethod
    def load(cls, directory: Path) -> "ScenarioHandle":
        scenario = load_scenario(directory / "scenario.json")
        lane_map = build_conflicts(
            parse_lane_map((directory / "lane_map.json").read_text(encoding="utf-8"))
        )
        params = MeasureParams.from_json(load_json_file(directory / "params.json"))
        records = tuple(read_records_jsonl(directory / "records.jsonl"))
        timelines = timelines_from_json(load_json_file(directory / "timelines.json"))
        by_t: dict[int, list[CriticalityRecord]] = {}
        for r in records:
            by_t.setdefault(r.timestamp, []).append(r)
        return cls(
            id=scenario.id,
            scenario=scenario,
            lane_map=lane_map,
            params=params,
            records=records,
            timelines=timelines,
            records_by_t={t: tuple(rs) for t, rs in by_t.items()},
        )

    def summary(self) -> dict:
        t_lo, t_hi = self.scenario.span
        return {
            "id": self.id,
            "t_start": t_lo,
            "t_end": t_hi,
            "frame_interval_ms": self.scenario.frame_interval,
            "tracks": len(self.scenario.objects),
            "measures": [m.value for m in ALL_MEASURES if m in self.timelines],
        }

    def detail(self) -> dict:
        doc = self.summary()
        doc["timestamps"] = list(self.scenario.timestamps)
        doc["objects"] = [
            {
                "track": o.track_id,
                "class": o.object_class.value,
                "length": o.length,
                "width": o.width,
                "t_first": o.first_timestamp,
                "t_last": o.last_timestamp,
            }
            for o in sorted(self.scenario.objects, key=lambda o: o.track_id)
        ]
        return doc


def load_scenario_root(root: str | Path) -> dict[str, ScenarioHandle]:
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"scenario directory {root} does not exist")
    handles: dict[str, ScenarioHandle] = {}
    for sub in sorted(root.iterdir()):
        if sub.is_dir() and (sub / "scenario.json").exists():
            handle = ScenarioHandle.load(sub)
            handles[handle.id] = handle
    return handles


def _bad_query(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


def _invalid_value(message: str) -> HTTPException:
    return HTTPException(status_code=422, detail=message)


def _query_measure(request: Request) -> Measure:
    raw = request.query_params.get("measure")
    if raw is None:
        raise _bad_query("missing query parameter 'measure'")
    try:
        return Measure(raw)
    except ValueError:
        valid = ", ".join(m.value for m in ALL_MEASURES)
        raise _bad_query(f"unknown measure {raw!r}; valid: {valid}")


def _query_float(request: Request, name: str, default: float | None = None) -> float:
    raw = request.query_params.get(name)
    if raw is None:
        if default is None:
            raise _bad_query(f"missing query parameter {name!r}")
        return default
    try:
        value = float(raw)
    except ValueError:
        raise _bad_query(f"query parameter {name!r} is not a number: {raw!r}")
    if not math.isfinite(value):
        raise _invalid_value(f"query parameter {name!r} must be finite")
    return value


def _query_int(request: Request, name: str, default: int | None = None) -> int:
    raw = request.query_params.get(name)
    if raw is None:
        if default is None:
            raise _bad_query(f"missing query parameter {name!r}")
        return default
    try:
        return int(raw)
    except ValueError:
        raise _bad_query(f"query parameter {name!r} is not an integer: {raw!r}")


def create_app(scenario_dir: str | Path | None = None) -> FastAPI:
    """Build the service application, preloading every scenario directory."""
    root = scenario_dir or os.environ.get("SCENARIO_DIR")
    if root is None:
        raise ValueError("no scenario directory: pass one or set SCENARIO_DIR")
    handles = load_scenario_root(root)

    app = FastAPI(title="scenecrit service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    def handle_of(scenario_id: str) -> ScenarioHandle:
        handle = handles.get(scenario_id)
        if handle is None:
            raise HTTPException(status_code=404, detail=f"unknown scenario {scenario_id!r}")
        return handle

    def frame_of(handle: ScenarioHandle, t: int) -> int:
        if t not in handle.scenario.timestamps:
            raise HTTPException(
                status_code=404, detail=f"no frame at t = {t} ms in {handle.id!r}"
            )
        return t

    @app.get("/api/scenarios")
    def list_scenarios() -> list[dict]:
        return [handles[k].summary() for k in sorted(handles)]

    @app.get("/api/scenarios/{scenario_id}")
    def scenario_detail(scenario_id: str) -> dict:
        return handle_of(scenario_id).detail()

    @app.get("/api/scenarios/{scenario_id}/map")
    def scenario_map(scenario_id: str) -> dict:
        return lane_map_to_json(handle_of(scenario_id).lane_map)

    @app.get("/api/scenarios/{scenario_id}/timeline")
    def timeline(scenario_id: str, request: Request) -> dict:
        handle = handle_of(scenario_id)
        measure = _query_measure(request)
        tl = handle.timelines.get(measure)
        if tl is None:
            raise HTTPException(
                status_code=404,
                detail=f"measure {measure.value!r} not analyzed for {scenario_id!r}",
            )
        return tl.to_json()

    @app.get("/api/scenarios/{scenario_id}/intervals")
    def intervals(scenario_id: str, request: Request) -> dict:
        handle = handle_of(scenario_id)
        measure = _query_measure(request)
        threshold = _query_float(request, "threshold")
        min_gap = _query_int(request, "min_gap", default=5)
        if threshold < 0:
            raise _invalid_value("threshold must be >= 0")
        if min_gap < 1:
            raise _invalid_value("min_gap must be >= 1")
        tl = handle.timelines.get(measure)
        if tl is None:
            raise HTTPException(
                status_code=404,
                detail=f"measure {measure.value!r} not analyzed for {scenario_id!r}",
            )
        found = detect_critical_intervals(tl, threshold, min_gap, handle.records)
        return {
            "measure": measure.value,
            "threshold": threshold,
            "min_gap": min_gap,
            "intervals": [iv.to_json() for iv in found],
        }

    @app.get("/api/scenarios/{scenario_id}/frames/{t}/graph")
    def frame_graph(scenario_id: str, t: int, request: Request) -> dict:
        handle = handle_of(scenario_id)
        t = frame_of(handle, t)
        measure = _query_measure(request)
        threshold = _query_float(request, "threshold", default=0.0)
        if threshold < 0:
            raise _invalid_value("threshold must be >= 0")
        graph = build_scene_graph(
            scene_at(handle.scenario, t),
            handle.lane_map,
            handle.graph_config,
            timestamp=t,
        )
        doc = export_scene_graph_view(
            graph, handle.records_by_t.get(t, ()), threshold, measure
        )
        # on-demand documents get the same float treatment as disk artifacts
        return round_floats({"document": doc.to_json(), "graph": graph.to_json()})

    @app.get("/api/scenarios/{scenario_id}/cube")
    def cube(scenario_id: str, request: Request) -> dict:
        handle = handle_of(scenario_id)
        t_lo, t_hi = handle.scenario.span
        t0 = _query_int(request, "from", default=t_lo)
        t1 = _query_int(request, "to", default=t_hi)
        stride = _query_int(request, "stride", default=1)
        if stride < 1:
            raise _invalid_value("stride must be >= 1")
        if t0 >= t1:
            raise _invalid_value("'from' must be earlier than 'to'")
        in_range = [t for t in handle.scenario.timestamps if t0 <= t <= t1]
        if not in_range:
            raise HTTPException(
                status_code=404, detail=f"no frames inside [{t0}, {t1}] ms"
            )
        doc = export_space_time_cube(handle.scenario, (t0, t1), connector_stride=stride)
        return round_floats(doc.to_json())

    @app.get("/api/scenarios/{scenario_id}/frames/{t}/poses")
    def poses(scenario_id: str, t: int) -> dict:
        handle = handle_of(scenario_id)
        t = frame_of(handle, t)
        actors = []
        for obj, state in sorted(
            scene_at(handle.scenario, t), key=lambda pair: pair[0].track_id
        ):
            left = (-math.sin(state.yaw), math.cos(state.yaw))
            actors.append(
                {
                    "track": obj.track_id,
                    "class": obj.object_class.value,
                    "x": state.x,
                    "y": state.y,
                    "yaw": state.yaw,
                    "speed": state.speed,
                    "length": obj.length,
                    "width": obj.width,
                    "camera": {
                        "eye": [
                            state.x + DRIVER_EYE_LEFT * left[0],
                            state.y + DRIVER_EYE_LEFT * left[1],
                            DRIVER_EYE_UP,
                        ],
                        "forward": [math.cos(state.yaw), math.sin(state.yaw), 0.0],
                        "up": [0.0, 0.0, 1.0],
                    },
                }
            )
        return round_floats({"t": t, "actors": actors})

    return app
