"""Object-list trajectory ingestion into the immutable scenario model.

Input is CSV (header row, comma separated, UTF-8, '.' decimal separator) in
any column layout; a column mapping adapts dataset-specific headers to the
canonical fields. Defaults follow the inD-style drone-dataset layout.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadNumeric,
    MissingColumn,
    NonMonotonicTime,
    UnknownClass,
    UnknownTimestamp,
)

SCENARIO_SCHEMA_VERSION = 1

TAU = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Normalize an angle in radians to the interval (-pi, pi]."""
    wrapped = angle - TAU * math.floor((angle + math.pi) / TAU)
    if wrapped <= -math.pi:
        wrapped += TAU
    return wrapped


class ObjectClass(str, Enum):
    CAR = "Car"
    TRUCK = "Truck"
    BIKE = "Bike"
    PEDESTRIAN = "Pedestrian"


# Lower-cased dataset labels accepted for each canonical class.
_CLASS_ALIASES = {
    "car": ObjectClass.CAR,
    "van": ObjectClass.CAR,
    "truck": ObjectClass.TRUCK,
    "bus": ObjectClass.TRUCK,
    "truck_bus": ObjectClass.TRUCK,
    "trailer": ObjectClass.TRUCK,
    "bike": ObjectClass.BIKE,
    "bicycle": ObjectClass.BIKE,
    "cyclist": ObjectClass.BIKE,
    "motorcycle": ObjectClass.BIKE,
    "pedestrian": ObjectClass.PEDESTRIAN,
    "person": ObjectClass.PEDESTRIAN,
}

VEHICLE_CLASSES = frozenset(
    {ObjectClass.CAR, ObjectClass.TRUCK, ObjectClass.BIKE}
)


@dataclass(frozen=True)
class ObjectState:
    """One observation of a tracked object at a discrete timestamp."""

    timestamp: int  # milliseconds
    x: float  # meters
    y: float  # meters
    yaw: float  # radians, normalized to (-pi, pi]
    speed: float  # m/s, non-negative scalar
    velocity_heading: float  # radians


@dataclass(frozen=True)
class TrackedObject:
    track_id: int
    object_class: ObjectClass
    length: float  # meters
    width: float  # meters
    states: tuple[ObjectState, ...] = field(default_factory=tuple)

    @property
    def half_length(self) -> float:
        return 0.5 * self.length

    def state_at(self, t: int) -> ObjectState | None:
        i = _bisect_states(self.states, t)
        if i is not None:
            return self.states[i]
        return None

    @property
    def first_timestamp(self) -> int:
        return self.states[0].timestamp

    @property
    def last_timestamp(self) -> int:
        return self.states[-1].timestamp


def _bisect_states(states: Sequence[ObjectState], t: int) -> int | None:
    lo, hi = 0, len(states)
    while lo < hi:
        mid = (lo + hi) // 2
        if states[mid].timestamp < t:
            lo = mid + 1
        else:
            hi = mid
    if lo < len(states) and states[lo].timestamp == t:
        return lo
    return None


@dataclass(frozen=True)
class Scenario:
    """Immutable store of tracked objects and their time-indexed states.

    ``timestamps`` is the sorted union of all per-track timestamps and
    ``frame_interval`` the nominal spacing between consecutive frames.
    """

    id: str
    objects: tuple[TrackedObject, ...]
    timestamps: tuple[int, ...]
    frame_interval: int  # milliseconds

    def __post_init__(self) -> None:
        ids = [o.track_id for o in self.objects]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate track_id in scenario")

    @property
    def span(self) -> tuple[int, int]:
        if not self.timestamps:
            return (0, 0)
        return (self.timestamps[0], self.timestamps[-1])

    def object_by_id(self, track_id: int) -> TrackedObject:
        for obj in self.objects:
            if obj.track_id == track_id:
                return obj
        raise KeyError(track_id)


Scene = list[tuple[TrackedObject, ObjectState]]


def scene_at(scenario: Scenario, t: int) -> Scene:
    """All (object, state) pairs visible at timestamp ``t``.

    ``t`` must be a member of ``scenario.timestamps``; an empty scene is
    legal (every visible track may have a gap at that frame).
    """
    if t not in scenario.timestamps:
        raise UnknownTimestamp(t)
    out: Scene = []
    for obj in scenario.objects:
        state = obj.state_at(t)
        if state is not None:
            out.append((obj, state))
    return out


# --- column-mapped CSV parsing ----------------------------------------------

#: Canonical column mapping for inD-style object lists.
DEFAULT_COLUMNS: dict[str, str | None] = {
    "track_id": "trackId",
    "time": "timestamp",
    "x": "xCenter",
    "y": "yCenter",
    "heading": "heading",
    "length": "length",
    "width": "width",
    "class": "class",
    "vx": "xVelocity",
    "vy": "yVelocity",
    "speed": None,
}

_OPTIONAL_FIELDS = ("vx", "vy", "speed")


@dataclass(frozen=True)
class IngestConfig:
    """Column mapping plus unit flags adapting a dataset to the canonical model.

    ``columns`` maps canonical field names (keys of :data:`DEFAULT_COLUMNS`)
    to CSV header names; ``vx``/``vy``/``speed`` entries may be ``None`` when
    the dataset lacks them. ``time_unit`` is one of ``milliseconds``,
    ``seconds`` or ``frames``; frame numbers are converted via
    ``frame_interval_ms``. Headings arrive in ``degrees`` (the drone-dataset
    convention) unless flagged as ``radians``.
    """

    scenario_id: str = "scenario"
    columns: Mapping[str, str | None] = field(
        default_factory=lambda: dict(DEFAULT_COLUMNS)
    )
    heading_unit: str = "degrees"
    time_unit: str = "milliseconds"
    frame_interval_ms: int | None = None

    def __post_init__(self) -> None:
        if self.heading_unit not in ("degrees", "radians"):
            raise ValueError(f"bad heading_unit {self.heading_unit!r}")
        if self.time_unit not in ("milliseconds", "seconds", "frames"):
            raise ValueError(f"bad time_unit {self.time_unit!r}")
        if self.time_unit == "frames" and self.frame_interval_ms is None:
            raise ValueError("time_unit 'frames' requires frame_interval_ms")
        merged = dict(DEFAULT_COLUMNS)
        merged.update(self.columns)
        object.__setattr__(self, "columns", merged)

    @classmethod
    def from_json(cls, doc: Mapping) -> "IngestConfig":
        return cls(
            scenario_id=doc.get("scenario_id", "scenario"),
            columns=doc.get("columns", {}),
            heading_unit=doc.get("heading_unit", "degrees"),
            time_unit=doc.get("time_unit", "milliseconds"),
            frame_interval_ms=doc.get("frame_interval_ms"),
        )


def _parse_float(raw: str | None, row: int, column: str) -> float:
    try:
        value = float(raw)  # type: ignore[arg-type]
    except (ValueError, TypeError):
        raise BadNumeric(row, column, repr(raw)) from None
    if math.isnan(value) or math.isinf(value):
        raise BadNumeric(row, column, repr(raw))
    return value


def _parse_int(raw: str | None, row: int, column: str) -> int:
    try:
        return int(float(raw))  # type: ignore[arg-type]
    except (ValueError, TypeError):
        raise BadNumeric(row, column, repr(raw)) from None


def object_class_from_name(name: str) -> ObjectClass:
    """Resolve a class name, accepting canonical values and dataset aliases."""
    cls = _CLASS_ALIASES.get(name.strip().lower())
    if cls is None:
        raise ValueError(f"unknown object class {name!r}")
    return cls


def _parse_class(raw: str | None, row: int) -> ObjectClass:
    cls = _CLASS_ALIASES.get((raw or "").strip().lower())
    if cls is None:
        raise UnknownClass(row, repr(raw))
    return cls


def parse_tracks(
    source: bytes | str | io.IOBase, config: IngestConfig | None = None
) -> Scenario:
    """Parse an object-list CSV into a :class:`Scenario`.

    One :class:`TrackedObject` is built per distinct track id, with states
    sorted by timestamp. Speed falls back from an explicit speed column to
    the Euclidean norm of the velocity columns, and finally to finite
    differences of position. Rows may arrive in any order.
    """
    config = config or IngestConfig()
    text = _as_text(source)
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise MissingColumn("<header>")
    header = set(reader.fieldnames)

    cols = dict(config.columns)
    for name, mapped in cols.items():
        if mapped is None:
            if name in _OPTIONAL_FIELDS:
                continue
            raise MissingColumn(name)
        if mapped not in header:
            if name in _OPTIONAL_FIELDS:
                cols[name] = None  # treat as absent, fall back
                continue
            raise MissingColumn(mapped)

    have_speed = cols["speed"] is not None
    have_vel = cols["vx"] is not None and cols["vy"] is not None

    # raw rows per track: (t_ms, x, y, yaw, speed|None, vheading|None)
    rows_by_track: dict[int, list[tuple]] = {}
    meta_by_track: dict[int, tuple[ObjectClass, float, float]] = {}

    for i, row in enumerate(reader):
        rownum = i + 2  # 1-based, after the header line
        track_id = _parse_int(row[cols["track_id"]], rownum, cols["track_id"])
        t = _parse_time(row[cols["time"]], rownum, config, cols["time"])
        x = _parse_float(row[cols["x"]], rownum, cols["x"])
        y = _parse_float(row[cols["y"]], rownum, cols["y"])
        yaw = _parse_float(row[cols["heading"]], rownum, cols["heading"])
        if config.heading_unit == "degrees":
            yaw = math.radians(yaw)
        yaw = wrap_angle(yaw)

        speed = vheading = None
        if have_speed:
            speed = abs(_parse_float(row[cols["speed"]], rownum, cols["speed"]))
        if have_vel:
            vx = _parse_float(row[cols["vx"]], rownum, cols["vx"])
            vy = _parse_float(row[cols["vy"]], rownum, cols["vy"])
            if speed is None:
                speed = math.hypot(vx, vy)
            vheading = math.atan2(vy, vx) if (vx, vy) != (0.0, 0.0) else yaw

        if track_id not in meta_by_track:
            cls = _parse_class(row[cols["class"]], rownum)
            length = _parse_float(row[cols["length"]], rownum, cols["length"])
            width = _parse_float(row[cols["width"]], rownum, cols["width"])
            if cls in VEHICLE_CLASSES and (length <= 0 or width <= 0):
                raise BadNumeric(rownum, cols["length"], f"{length}x{width}")
            meta_by_track[track_id] = (cls, length, width)
        rows_by_track.setdefault(track_id, []).append(
            (t, x, y, yaw, speed, vheading)
        )

    objects = []
    for track_id in sorted(rows_by_track):
        rows = sorted(rows_by_track[track_id], key=lambda r: r[0])
        for a, b in zip(rows, rows[1:]):
            if b[0] <= a[0]:
                raise NonMonotonicTime(track_id, b[0])
        cls, length, width = meta_by_track[track_id]
        objects.append(
            TrackedObject(
                track_id=track_id,
                object_class=cls,
                length=length,
                width=width,
                states=tuple(_finalize_states(rows)),
            )
        )

    timestamps = sorted({s.timestamp for o in objects for s in o.states})
    interval = config.frame_interval_ms
    if interval is None:
        interval = _infer_frame_interval(timestamps)
    return Scenario(
        id=config.scenario_id,
        objects=tuple(objects),
        timestamps=tuple(timestamps),
        frame_interval=interval,
    )


def _as_text(source: bytes | str | io.IOBase) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _parse_time(raw: str, rownum: int, config: IngestConfig, column: str) -> int:
    value = _parse_float(raw, rownum, column)
    if config.time_unit == "seconds":
        return round(value * 1000.0)
    if config.time_unit == "frames":
        return round(value) * int(config.frame_interval_ms)
    return round(value)


def _finalize_states(rows: list[tuple]) -> Iterable[ObjectState]:
    """Fill missing speed/heading by finite differences over the track."""
    n = len(rows)
    for i, (t, x, y, yaw, speed, vheading) in enumerate(rows):
        if speed is None or vheading is None:
            # forward difference; the last state reuses the previous step
            j = i if i + 1 < n else i - 1
            if j < 0:
                dx = dy = 0.0
                dt = 1.0
            else:
                t0, x0, y0 = rows[j][0], rows[j][1], rows[j][2]
                t1, x1, y1 = rows[j + 1][0], rows[j + 1][1], rows[j + 1][2]
                dx, dy = x1 - x0, y1 - y0
                dt = (t1 - t0) / 1000.0
            if speed is None:
                speed = math.hypot(dx, dy) / dt if dt > 0 else 0.0
            if vheading is None:
                vheading = math.atan2(dy, dx) if (dx, dy) != (0.0, 0.0) else yaw
        yield ObjectState(
            timestamp=t,
            x=x,
            y=y,
            yaw=yaw,
            speed=speed,
            velocity_heading=wrap_angle(vheading),
        )


def _infer_frame_interval(timestamps: Sequence[int]) -> int:
    if len(timestamps) < 2:
        return 0
    return min(b - a for a, b in zip(timestamps, timestamps[1:]))


# --- versioned scenario serialization ----------------------------------------

def scenario_to_json(scenario: Scenario) -> dict:
    """Serialize to the versioned scenario document (see docs/formats.md).

    Floats keep their exact shortest repr so that parsing the document back
    reproduces an identical scenario.
    """
    return {
        "version": SCENARIO_SCHEMA_VERSION,
        "id": scenario.id,
        "frame_interval_ms": scenario.frame_interval,
        "objects": [
            {
                "track_id": o.track_id,
                "class": o.object_class.value,
                "length": o.length,
                "width": o.width,
                "states": [
                    {
                        "t": s.timestamp,
                        "x": s.x,
                        "y": s.y,
                        "yaw": s.yaw,
                        "speed": s.speed,
                        "velocity_heading": s.velocity_heading,
                    }
                    for s in o.states
                ],
            }
            for o in scenario.objects
        ],
    }


def scenario_from_json(doc: Mapping) -> Scenario:
    if doc.get("version") != SCENARIO_SCHEMA_VERSION:
        raise ValueError(f"unsupported scenario document version {doc.get('version')!r}")
    objects = tuple(
        TrackedObject(
            track_id=o["track_id"],
            object_class=ObjectClass(o["class"]),
            length=o["length"],
            width=o["width"],
            states=tuple(
                ObjectState(
                    timestamp=s["t"],
                    x=s["x"],
                    y=s["y"],
                    yaw=s["yaw"],
                    speed=s["speed"],
                    velocity_heading=s["velocity_heading"],
                )
                for s in o["states"]
            ),
        )
        for o in doc["objects"]
    )
    timestamps = tuple(sorted({s.timestamp for o in objects for s in o.states}))
    return Scenario(
        id=doc["id"],
        objects=objects,
        timestamps=timestamps,
        frame_interval=doc["frame_interval_ms"],
    )


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_json(json.load(fh))


def with_id(scenario: Scenario, scenario_id: str) -> Scenario:
    return replace(scenario, id=scenario_id)
