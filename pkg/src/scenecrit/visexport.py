"""Abstract 3D visualization documents.

Two exporters produce renderer-agnostic primitive lists:

* the scene-graph view: one box per road user plus, for every relation
  above the criticality threshold, a sphere at the pair midpoint whose
  color darkens with criticality and two segments tying it to the actors,
* the space-time cube: per-track trajectory polylines lifted onto a time
  axis (z grows with time), their ground projections, and periodic
  vertical connectors whose horizontal spacing encodes speed and whose
  accumulation marks stop points.

Documents are plain data; rendering is the consumer's job.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .analysis import Measure, record_value
from .criticality import CriticalityRecord
from .errors import EmptyWindow, MismatchedTimestamp
from .ingest import Scenario
from .scenegraph import SceneGraph

Color = tuple[float, float, float, float]

RAMP_LIGHT: tuple[float, float, float] = (1.0, 0.9, 0.2)  # yellow
RAMP_DARK: tuple[float, float, float] = (0.4, 0.0, 0.0)  # dark red
BOX_COLOR: Color = (0.55, 0.55, 0.6, 1.0)
CONNECTOR_COLOR: Color = (0.5, 0.5, 0.5, 0.8)
BOX_HEIGHT = 1.5  # presentational actor height, meters
SPHERE_RADIUS = 0.6
SPHERE_Z = 1.0

TRACK_PALETTE: tuple[tuple[float, float, float], ...] = (
    (0.12, 0.47, 0.71),
    (1.0, 0.5, 0.05),
    (0.17, 0.63, 0.17),
    (0.84, 0.15, 0.16),
    (0.58, 0.4, 0.74),
    (0.55, 0.34, 0.29),
    (0.89, 0.47, 0.76),
    (0.5, 0.5, 0.5),
    (0.74, 0.74, 0.13),
    (0.09, 0.75, 0.81),
)


class VisKind(str, Enum):
    SCENE_GRAPH_VIEW = "scene_graph_view"
    SPACE_TIME_CUBE = "space_time_cube"


@dataclass(frozen=True)
class Box:
    center: tuple[float, float, float]
    yaw: float
    extent: tuple[float, float, float]  # length, width, height
    color: Color

    def to_json(self) -> dict:
        return {
            "type": "box",
            "center": list(self.center),
            "yaw": self.yaw,
            "extent": list(self.extent),
            "color": list(self.color),
        }


@dataclass(frozen=True)
class Sphere:
    center: tuple[float, float, float]
    radius: float
    color: Color

    def to_json(self) -> dict:
        return {
            "type": "sphere",
            "center": list(self.center),
            "radius": self.radius,
            "color": list(self.color),
        }


@dataclass(frozen=True)
class Polyline:
    points: tuple[tuple[float, float, float], ...]
    color: Color
    width: float = 1.0

    def to_json(self) -> dict:
        return {
            "type": "polyline",
            "points": [list(p) for p in self.points],
            "color": list(self.color),
            "width": self.width,
        }


@dataclass(frozen=True)
class Segment:
    a: tuple[float, float, float]
    b: tuple[float, float, float]
    color: Color

    def to_json(self) -> dict:
        return {
            "type": "segment",
            "a": list(self.a),
            "b": list(self.b),
            "color": list(self.color),
        }


Primitive = Box | Sphere | Polyline | Segment


@dataclass(frozen=True)
class VisDocument:
    kind: VisKind
    primitives: tuple[Primitive, ...]
    meta: Mapping = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "version": 1,
            "kind": self.kind.value,
            "meta": dict(self.meta),
            "primitives": [p.to_json() for p in self.primitives],
        }

    def count(self, primitive_type: type) -> int:
        return sum(1 for p in self.primitives if isinstance(p, primitive_type))


def ramp_color(u: float) -> Color:
    """Light-to-dark criticality ramp; u is the normalized value in [0, 1]."""
    u = min(1.0, max(0.0, u))
    r = RAMP_LIGHT[0] + u * (RAMP_DARK[0] - RAMP_LIGHT[0])
    g = RAMP_LIGHT[1] + u * (RAMP_DARK[1] - RAMP_LIGHT[1])
    b = RAMP_LIGHT[2] + u * (RAMP_DARK[2] - RAMP_LIGHT[2])
    return (r, g, b, 1.0)


def export_scene_graph_view(
    graph: SceneGraph,
    records: Sequence[CriticalityRecord],
    threshold: float,
    measure: Measure,
    value_range: tuple[float, float] | None = None,
) -> VisDocument:
    """Sphere view of one frame: actor boxes plus critical-relation spheres.

    Only records strictly above the threshold are drawn. Sphere colors are
    normalized over this document's value range by default; passing
    ``value_range`` pins the ramp to an absolute scale instead (e.g. the
    scenario-wide peak). A degenerate range maps to the dark end.
    """
    for r in records:
        if r.timestamp != graph.timestamp:
            raise MismatchedTimestamp(graph.timestamp, r.timestamp)

    primitives: list[Primitive] = []
    for track_id in sorted(graph.nodes):
        node = graph.nodes[track_id]
        primitives.append(
            Box(
                center=(node.state.x, node.state.y, BOX_HEIGHT / 2.0),
                yaw=node.state.yaw,
                extent=(node.obj.length, node.obj.width, BOX_HEIGHT),
                color=BOX_COLOR,
            )
        )

    shown = [
        (v, r)
        for r in records
        if (v := record_value(r, measure)) is not None and v > threshold
    ]
    shown.sort(key=lambda item: (item[1].pair, item[1].detail.get("kind", "")))

    if shown:
        values = [v for v, _ in shown]
        lo, hi = value_range if value_range is not None else (min(values), max(values))
    else:
        lo, hi = 0.0, 0.0

    for v, r in shown:
        a = graph.nodes[r.pair[0]].state
        b = graph.nodes[r.pair[1]].state
        u = (v - lo) / (hi - lo) if hi > lo else 1.0
        color = ramp_color(u)
        center = ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0, SPHERE_Z)
        primitives.append(Sphere(center=center, radius=SPHERE_RADIUS, color=color))
        primitives.append(Segment((a.x, a.y, BOX_HEIGHT / 2.0), center, color))
        primitives.append(Segment((b.x, b.y, BOX_HEIGHT / 2.0), center, color))

    return VisDocument(
        kind=VisKind.SCENE_GRAPH_VIEW,
        primitives=tuple(primitives),
        meta={
            "t": graph.timestamp,
            "measure": measure.value,
            "threshold": threshold,
            "value_min": lo,
            "value_max": hi,
        },
    )


def export_space_time_cube(
    scenario: Scenario,
    window: tuple[int, int],
    connector_stride: int = 1,
    time_scale: float = 1.0,
) -> VisDocument:
    """Space-time cube over a time window.

    Each track yields a trajectory polyline with z = (t - t0) * time_scale
    / 1000, its projection onto the ground plane, and a vertical connector
    segment every ``connector_stride`` frames. Actor roll/pitch and any
    source z are discarded; the cube is a purely 2D+time view.
    """
    t0, t1 = window
    if t0 >= t1:
        raise EmptyWindow(t0, t1)
    if connector_stride < 1:
        raise ValueError("connector_stride must be >= 1")
    frame_ts = [t for t in scenario.timestamps if t0 <= t <= t1]
    if not frame_ts:
        raise EmptyWindow(t0, t1)

    def z_of(t: int) -> float:
        return (t - t0) * time_scale / 1000.0

    primitives: list[Primitive] = []
    tracks_drawn: list[int] = []
    for obj in sorted(scenario.objects, key=lambda o: o.track_id):
        states = [s for s in obj.states if t0 <= s.timestamp <= t1]
        if not states:
            continue
        tracks_drawn.append(obj.track_id)
        rgb = TRACK_PALETTE[obj.track_id % len(TRACK_PALETTE)]
        elevated = tuple((s.x, s.y, z_of(s.timestamp)) for s in states)
        ground = tuple((s.x, s.y, 0.0) for s in states)
        if len(states) >= 2:
            primitives.append(Polyline(elevated, color=(*rgb, 1.0), width=2.0))
            primitives.append(
                Polyline(
                    ground,
                    color=(rgb[0] * 0.45, rgb[1] * 0.45, rgb[2] * 0.45, 1.0),
                    width=1.0,
                )
            )
        for i in range(0, len(states), connector_stride):
            x, y, z = elevated[i]
            primitives.append(Segment((x, y, z), (x, y, 0.0), CONNECTOR_COLOR))

    return VisDocument(
        kind=VisKind.SPACE_TIME_CUBE,
        primitives=tuple(primitives),
        meta={
            "t0": t0,
            "t1": t1,
            "stride": connector_stride,
            "time_scale": time_scale,
            "tracks": tracks_drawn,
        },
    )
