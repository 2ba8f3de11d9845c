"""Shared fixtures: tiny hand-built lane maps and synthetic scenarios."""

from __future__ import annotations

import json

import pytest

from scenecrit import LaneMap, Scenario, build_conflicts, parse_lane_map
from scenecrit.ingest import ObjectClass, ObjectState, TrackedObject


def lane_doc(lane_id, centerline, successors=(), left=None, right=None, width=3.5):
    doc = {
        "lane_id": lane_id,
        "width": width,
        "centerline": [list(p) for p in centerline],
        "successors": list(successors),
    }
    if left is not None:
        doc["left_neighbor"] = left
    if right is not None:
        doc["right_neighbor"] = right
    return doc


def make_map(*lanes) -> LaneMap:
    return build_conflicts(
        parse_lane_map(json.dumps({"version": 1, "lanes": list(lanes)}))
    )


def make_state(t, x, y, yaw=0.0, speed=0.0, velocity_heading=None):
    return ObjectState(
        timestamp=t,
        x=float(x),
        y=float(y),
        yaw=float(yaw),
        speed=float(speed),
        velocity_heading=float(yaw if velocity_heading is None else velocity_heading),
    )


def make_object(track_id, states, cls=ObjectClass.CAR, length=4.0, width=2.0):
    return TrackedObject(
        track_id=track_id,
        object_class=cls,
        length=float(length),
        width=float(width),
        states=tuple(states),
    )


def make_scenario(objects, scenario_id="fixture"):
    timestamps = sorted({s.timestamp for o in objects for s in o.states})
    diffs = [b - a for a, b in zip(timestamps, timestamps[1:])]
    return Scenario(
        id=scenario_id,
        objects=tuple(objects),
        timestamps=tuple(timestamps),
        frame_interval=min(diffs) if diffs else 0,
    )


@pytest.fixture
def straight_map() -> LaneMap:
    """One 300 m straight lane along the x axis."""
    return make_map(lane_doc(1, [(0, 0), (300, 0)]))


@pytest.fixture
def parallel_map() -> LaneMap:
    """Two parallel lanes, lane 2 to the left of lane 1."""
    return make_map(
        lane_doc(1, [(0, 0), (200, 0)], left=2),
        lane_doc(2, [(0, 3.5), (200, 3.5)], right=1),
    )


@pytest.fixture
def crossing_map() -> LaneMap:
    """Perpendicular crossing: conflict at (50, 0), s = 50 on both lanes."""
    return make_map(
        lane_doc(1, [(0, 0), (100, 0)]),
        lane_doc(2, [(50, -50), (50, 50)]),
    )


@pytest.fixture
def chain_map() -> LaneMap:
    """Two 50 m lanes joined by a successor link."""
    return make_map(
        lane_doc(1, [(0, 0), (50, 0)], successors=[2]),
        lane_doc(2, [(50, 0), (100, 0)]),
    )


@pytest.fixture
def scurve_map() -> LaneMap:
    """A zig-zag lane crossing a straight one twice (x = 25 and x = 35)."""
    return make_map(
        lane_doc(1, [(0, 0), (100, 0)]),
        lane_doc(2, [(20, -10), (30, 10), (40, -10)]),
    )


def approach_objects(n_frames=60, dt_ms=100):
    """Follower at 15 m/s chasing a 10 m/s leader that starts 40 m ahead."""
    follower = make_object(
        1,
        [
            make_state(k * dt_ms, 15.0 * k * dt_ms / 1000.0, 0.0, speed=15.0)
            for k in range(n_frames)
        ],
    )
    leader = make_object(
        2,
        [
            make_state(k * dt_ms, 40.0 + 10.0 * k * dt_ms / 1000.0, 0.0, speed=10.0)
            for k in range(n_frames)
        ],
    )
    return [follower, leader]


@pytest.fixture
def approach_scenario() -> Scenario:
    return make_scenario(approach_objects(), scenario_id="approach")


INGEST_HEADER = (
    "trackId,timestamp,xCenter,yCenter,heading,length,width,class,xVelocity,yVelocity"
)


def tracks_csv(rows) -> str:
    lines = [INGEST_HEADER]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def approach_csv(n_frames=60, dt_ms=100) -> str:
    rows = []
    for k in range(n_frames):
        t = k * dt_ms
        rows.append((1, t, 15.0 * t / 1000.0, 0.0, 0.0, 4.0, 2.0, "car", 15.0, 0.0))
        rows.append((2, t, 40.0 + 10.0 * t / 1000.0, 0.0, 0.0, 4.0, 2.0, "car", 10.0, 0.0))
    return tracks_csv(rows)


STRAIGHT_MAP_DOC = {"version": 1, "lanes": [lane_doc(1, [(0, 0), (300, 0)])]}
