"""Lane-level HD map: topology, conflict points, and Frenet projection.

Lanes are polyline centerlines with width, successor links and left/right
neighbor links. All Cartesian coordinates live in one local metric frame;
elevation is not modelled. The canonical on-disk format is a versioned JSON
document validated against ``schemas/lane_map.schema.json``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np
from jsonschema import Draft202012Validator

from .errors import (
    AsymmetricNeighbor,
    DegenerateCenterline,
    NoLaneMatch,
    SchemaViolation,
)
from .ingest import wrap_angle

LANE_MAP_SCHEMA_VERSION = 1

# Conflicts closer than this (in arc length on both lanes) collapse into one.
_CONFLICT_DEDUP_TOL = 1e-6
# Spatial tolerance for dropping the shared junction point of successor pairs.
_JUNCTION_TOL = 1e-6


@dataclass(eq=False)
class Lane:
    """One lane centerline with topology links and precomputed geometry."""

    lane_id: int
    centerline: np.ndarray  # (N, 2) float64, N >= 2
    width: float
    successors: tuple[int, ...] = ()
    left_neighbor: int | None = None
    right_neighbor: int | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.centerline, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
            raise DegenerateCenterline(self.lane_id, "centerline needs >= 2 2D points")
        seg = np.diff(pts, axis=0)
        seg_len = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(seg_len <= 0.0):
            raise DegenerateCenterline(self.lane_id, "zero-length centerline segment")
        self.centerline = pts
        self._seg = seg
        self._seg_len = seg_len
        self._cum_s = np.concatenate(([0.0], np.cumsum(seg_len)))
        self._headings = np.arctan2(seg[:, 1], seg[:, 0])

    @property
    def length(self) -> float:
        """Total arc length of the centerline."""
        return float(self._cum_s[-1])

    def point_at(self, s: float) -> tuple[float, float]:
        """Cartesian point at arc length ``s`` (clamped to the lane)."""
        s = min(max(s, 0.0), self.length)
        i = int(np.searchsorted(self._cum_s, s, side="right") - 1)
        i = min(i, len(self._seg_len) - 1)
        t = (s - self._cum_s[i]) / self._seg_len[i]
        p = self.centerline[i] + t * self._seg[i]
        return (float(p[0]), float(p[1]))

    def heading_at(self, s: float) -> float:
        """Tangent heading (radians) of the segment containing arc length s."""
        s = min(max(s, 0.0), self.length)
        i = int(np.searchsorted(self._cum_s, s, side="right") - 1)
        i = min(i, len(self._seg_len) - 1)
        return float(self._headings[i])

    def project(self, x: float, y: float) -> tuple[float, float, float, float]:
        """Foot-point projection of (x, y) onto the centerline.

        Returns ``(lateral_distance, s, d_signed, segment_heading)`` where
        ``d_signed`` is positive to the left of the direction of travel.
        """
        q = np.array((x, y), dtype=np.float64)
        rel = q - self.centerline[:-1]
        t = (rel * self._seg).sum(axis=1) / (self._seg_len**2)
        t = np.clip(t, 0.0, 1.0)
        feet = self.centerline[:-1] + t[:, None] * self._seg
        off = q - feet
        dist2 = (off**2).sum(axis=1)
        i = int(np.argmin(dist2))
        lateral = float(math.sqrt(dist2[i]))
        cross = self._seg[i, 0] * off[i, 1] - self._seg[i, 1] * off[i, 0]
        d_signed = lateral if cross >= 0.0 else -lateral
        s = float(self._cum_s[i] + t[i] * self._seg_len[i])
        return lateral, s, d_signed, float(self._headings[i])


@dataclass(frozen=True)
class ConflictPoint:
    """Transversal crossing of two lane centerlines.

    Stored once per crossing with ``lane_a < lane_b``; ``s_a``/``s_b`` are the
    arc lengths from each lane's start to the crossing.
    """

    lane_a: int
    lane_b: int
    s_a: float
    s_b: float
    point: tuple[float, float]

    def distance_on(self, lane_id: int) -> float:
        if lane_id == self.lane_a:
            return self.s_a
        if lane_id == self.lane_b:
            return self.s_b
        raise KeyError(lane_id)


@dataclass(frozen=True)
class FrenetPose:
    """Lane-relative pose: arc length ``s`` and signed lateral offset ``d``."""

    lane_id: int
    s: float
    d: float  # left-of-travel positive


@dataclass(frozen=True)
class MatchConfig:
    """Map-matching cost weights and gates.

    Cost is ``lateral + heading_weight * |heading - tangent|``; candidates
    beyond ``lateral_cutoff`` or misaligned beyond ``heading_gate`` are
    rejected (the gate keeps poses off oncoming lanes).
    """

    lateral_cutoff: float = 4.0  # meters
    heading_gate: float = math.pi / 3.0  # radians (60 degrees)
    heading_weight: float = 3.0  # meters per radian


@dataclass(frozen=True)
class LaneMap:
    lanes: Mapping[int, Lane]
    meta: Mapping = field(default_factory=dict)
    conflicts: tuple[ConflictPoint, ...] = ()

    def lane(self, lane_id: int) -> Lane:
        return self.lanes[lane_id]

    def conflicts_between(self, lane_x: int, lane_y: int) -> list[ConflictPoint]:
        """Conflict points shared by two lanes, queryable from either side."""
        out = []
        for cp in self.conflicts:
            if {cp.lane_a, cp.lane_b} == {lane_x, lane_y}:
                out.append(cp)
        return out

    def neighbors_of(self, lane_id: int) -> tuple[int, ...]:
        lane = self.lanes[lane_id]
        return tuple(n for n in (lane.left_neighbor, lane.right_neighbor) if n is not None)


def _load_schema() -> dict:
    with resources.files("scenecrit.schemas").joinpath("lane_map.schema.json").open(
        "r", encoding="utf-8"
    ) as fh:
        return json.load(fh)


_VALIDATOR = Draft202012Validator(_load_schema())


def parse_lane_map(source: Mapping | str | bytes) -> LaneMap:
    """Parse and validate the canonical lane-map JSON document."""
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"not valid JSON: {exc}") from None
    else:
        doc = source

    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise SchemaViolation(f"{where}: {first.message}")

    lanes: dict[int, Lane] = {}
    for entry in doc["lanes"]:
        lane = Lane(
            lane_id=entry["lane_id"],
            centerline=np.asarray(entry["centerline"], dtype=np.float64),
            width=entry["width"],
            successors=tuple(entry.get("successors", ())),
            left_neighbor=entry.get("left_neighbor"),
            right_neighbor=entry.get("right_neighbor"),
        )
        if lane.lane_id in lanes:
            raise SchemaViolation(f"duplicate lane_id {lane.lane_id}")
        lanes[lane.lane_id] = lane

    for lane in lanes.values():
        for succ in lane.successors:
            if succ not in lanes:
                raise SchemaViolation(f"lane {lane.lane_id}: unknown successor {succ}")
        if lane.left_neighbor is not None:
            other = lanes.get(lane.left_neighbor)
            if other is None or other.right_neighbor != lane.lane_id:
                raise AsymmetricNeighbor(lane.lane_id, lane.left_neighbor)
        if lane.right_neighbor is not None:
            other = lanes.get(lane.right_neighbor)
            if other is None or other.left_neighbor != lane.lane_id:
                raise AsymmetricNeighbor(lane.lane_id, lane.right_neighbor)

    return LaneMap(lanes=lanes, meta=doc.get("meta", {}))


def load_lane_map(path) -> LaneMap:
    with open(path, "r", encoding="utf-8") as fh:
        return build_conflicts(parse_lane_map(json.load(fh)))


def lane_map_to_json(lane_map: LaneMap) -> dict:
    """Serialize back to the canonical document (conflicts are derived data)."""
    return {
        "version": LANE_MAP_SCHEMA_VERSION,
        "meta": dict(lane_map.meta),
        "lanes": [
            {
                "lane_id": lane.lane_id,
                "width": lane.width,
                "centerline": [[float(x), float(y)] for x, y in lane.centerline],
                "successors": list(lane.successors),
                "left_neighbor": lane.left_neighbor,
                "right_neighbor": lane.right_neighbor,
            }
            for lane_id, lane in sorted(lane_map.lanes.items())
        ],
    }


# --- conflict-point construction ---------------------------------------------

def _segment_intersections(
    a: Lane, b: Lane, skip_points: Sequence[tuple[float, float]]
) -> Iterable[tuple[float, float, tuple[float, float]]]:
    """Yield (s_a, s_b, point) for every transversal crossing of two polylines."""
    for i in range(len(a._seg)):
        p = a.centerline[i]
        r = a._seg[i]
        for j in range(len(b._seg)):
            q = b.centerline[j]
            s = b._seg[j]
            denom = r[0] * s[1] - r[1] * s[0]
            # parallelism test on unit directions
            if abs(denom) <= 1e-9 * a._seg_len[i] * b._seg_len[j]:
                continue
            qp = q - p
            t = (qp[0] * s[1] - qp[1] * s[0]) / denom
            u = (qp[0] * r[1] - qp[1] * r[0]) / denom
            if not (0.0 <= t <= 1.0 and 0.0 <= u <= 1.0):
                continue
            pt = (float(p[0] + t * r[0]), float(p[1] + t * r[1]))
            if any(
                math.hypot(pt[0] - sx, pt[1] - sy) <= _JUNCTION_TOL
                for sx, sy in skip_points
            ):
                continue
            s_a = float(a._cum_s[i] + t * a._seg_len[i])
            s_b = float(b._cum_s[j] + u * b._seg_len[j])
            yield s_a, s_b, pt


def build_conflicts(lane_map: LaneMap) -> LaneMap:
    """Enrich the map with one ConflictPoint per crossing centerline pair.

    Only transversal crossings count: the shared junction point of
    successor-linked lanes is continuity, not a conflict.
    """
    conflicts: list[ConflictPoint] = []
    ids = sorted(lane_map.lanes)
    for ia, id_a in enumerate(ids):
        a = lane_map.lanes[id_a]
        for id_b in ids[ia + 1 :]:
            b = lane_map.lanes[id_b]
            skip: list[tuple[float, float]] = []
            if id_b in a.successors:
                skip.append(tuple(a.centerline[-1]))
            if id_a in b.successors:
                skip.append(tuple(b.centerline[-1]))
            found: list[tuple[float, float, tuple[float, float]]] = []
            for s_a, s_b, pt in _segment_intersections(a, b, skip):
                if any(
                    abs(s_a - fa) < _CONFLICT_DEDUP_TOL
                    and abs(s_b - fb) < _CONFLICT_DEDUP_TOL
                    for fa, fb, _ in found
                ):
                    continue
                found.append((s_a, s_b, pt))
            for s_a, s_b, pt in found:
                conflicts.append(
                    ConflictPoint(lane_a=id_a, lane_b=id_b, s_a=s_a, s_b=s_b, point=pt)
                )
    return replace(lane_map, conflicts=tuple(conflicts))


# --- Frenet projection ---------------------------------------------------------

def project_to_frenet(
    pose: tuple[float, float, float],
    lane_map: LaneMap,
    config: MatchConfig | None = None,
) -> FrenetPose:
    """Map a Cartesian pose (x, y, yaw) onto the best-matching lane.

    The winning lane minimizes ``lateral + heading_weight * misalignment``
    among candidates inside the lateral cutoff and heading gate. Raises
    :class:`NoLaneMatch` when nothing qualifies.
    """
    config = config or MatchConfig()
    x, y, yaw = pose
    best: tuple[float, int, float, float] | None = None  # (cost, lane_id, s, d)
    for lane_id in sorted(lane_map.lanes):
        lane = lane_map.lanes[lane_id]
        lateral, s, d_signed, tangent = lane.project(x, y)
        if lateral > config.lateral_cutoff:
            continue
        mis = abs(wrap_angle(yaw - tangent))
        if mis > config.heading_gate:
            continue
        cost = lateral + config.heading_weight * mis
        if best is None or cost < best[0]:
            best = (cost, lane_id, s, d_signed)
    if best is None:
        raise NoLaneMatch(x, y)
    _, lane_id, s, d = best
    return FrenetPose(lane_id=lane_id, s=s, d=d)


# --- longitudinal connectivity -------------------------------------------------

#: Successor-chain search bounds: arc-length lookahead and maximum hops.
DEFAULT_CHAIN_HORIZON = 150.0
DEFAULT_CHAIN_DEPTH = 5


def chain_distance(
    lane_map: LaneMap,
    from_lane: int,
    s_from: float,
    to_lane: int,
    s_to: float,
    horizon: float = DEFAULT_CHAIN_HORIZON,
    max_depth: int = DEFAULT_CHAIN_DEPTH,
) -> float | None:
    """Forward arc distance from (from_lane, s_from) to (to_lane, s_to).

    Follows successor links breadth-first up to ``max_depth`` hops and
    ``horizon`` meters; returns None when the target is not reachable
    driving forward.
    """
    if from_lane == to_lane:
        d = s_to - s_from
        return d if d >= 0.0 else None
    best: float | None = None
    # base = arc distance from s_from to the START of the keyed lane
    frontier: dict[int, float] = {from_lane: -s_from}
    seen: dict[int, float] = dict(frontier)
    for _ in range(max_depth):
        nxt: dict[int, float] = {}
        for lane_id, base in frontier.items():
            advance = base + lane_map.lanes[lane_id].length
            if advance > horizon:
                continue
            for succ in lane_map.lanes[lane_id].successors:
                if succ == to_lane:
                    total = advance + s_to
                    if total <= horizon and (best is None or total < best):
                        best = total
                if succ not in seen or seen[succ] > advance:
                    seen[succ] = advance
                    nxt[succ] = advance
        frontier = nxt
        if not frontier:
            break
    return best


def gap_along_lane(
    a: FrenetPose,
    b: FrenetPose,
    lane_map: LaneMap,
    half_lengths: tuple[float, float],
    horizon: float = DEFAULT_CHAIN_HORIZON,
    max_depth: int = DEFAULT_CHAIN_DEPTH,
) -> float | None:
    """Bumper-to-bumper arc-length gap between two lane-mapped objects.

    Center distance along the lane (or the shortest connecting successor
    chain, tried in both roles) minus both half lengths, clamped at zero;
    None when no chain connects the poses.
    """
    if a.lane_id == b.lane_id:
        center = abs(a.s - b.s)
    else:
        candidates = [
            chain_distance(lane_map, a.lane_id, a.s, b.lane_id, b.s, horizon, max_depth),
            chain_distance(lane_map, b.lane_id, b.s, a.lane_id, a.s, horizon, max_depth),
        ]
        reachable = [c for c in candidates if c is not None]
        if not reachable:
            return None
        center = min(reachable)
    return max(0.0, center - half_lengths[0] - half_lengths[1])
