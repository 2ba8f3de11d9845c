"""Per-timestamp semantic scene graphs over the lane map.

Road users become nodes carrying their map-relative pose; their pairwise
relations become directed edges of three kinds:

* ``Longitudinal``: follower behind leader on one lane or a successor
  chain, emitted follower -> leader only (the measures are follower-centric),
* ``Lateral``: abreast on neighboring lanes, emitted both directions,
* ``Intersecting``: both approaching a shared conflict point, emitted both
  directions with the per-actor remaining distance as the gap.

Pedestrians take part in intersecting relations only; objects that fail
lane matching stay in the graph as isolated nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping

from .ingest import ObjectState, Scene, TrackedObject, VEHICLE_CLASSES
from .lanemap import (
    ConflictPoint,
    FrenetPose,
    LaneMap,
    MatchConfig,
    chain_distance,
    project_to_frenet,
)
from .errors import NoLaneMatch


class RelationKind(str, Enum):
    LONGITUDINAL = "longitudinal"
    LATERAL = "lateral"
    INTERSECTING = "intersecting"


@dataclass(frozen=True)
class GraphNode:
    obj: TrackedObject
    state: ObjectState
    pose: FrenetPose | None  # None when the object matched no lane

    def to_json(self) -> dict:
        pose = None
        if self.pose is not None:
            pose = {"lane": self.pose.lane_id, "s": self.pose.s, "d": self.pose.d}
        return {
            "track": self.obj.track_id,
            "class": self.obj.object_class.value,
            "x": self.state.x,
            "y": self.state.y,
            "yaw": self.state.yaw,
            "speed": self.state.speed,
            "length": self.obj.length,
            "width": self.obj.width,
            "pose": pose,
        }


@dataclass(frozen=True)
class RelationEdge:
    """Directed relation between two tracks.

    ``gap`` is the bumper gap for longitudinal edges and the source actor's
    remaining distance to the conflict point for intersecting edges;
    lateral edges carry no gap. ``conflict`` is set exactly on
    intersecting edges.
    """

    from_id: int
    to_id: int
    kind: RelationKind
    gap: float | None = None
    conflict: ConflictPoint | None = None

    def __post_init__(self) -> None:
        if self.from_id == self.to_id:
            raise ValueError("self edges are not allowed")
        if self.gap is not None and self.gap < 0:
            raise ValueError("gap must be >= 0")
        if (self.conflict is not None) != (self.kind is RelationKind.INTERSECTING):
            raise ValueError("conflict is set exactly on intersecting edges")

    def to_json(self) -> dict:
        doc: dict = {"from": self.from_id, "to": self.to_id, "kind": self.kind.value}
        if self.gap is not None:
            doc["gap"] = self.gap
        if self.conflict is not None:
            doc["conflict"] = {
                "lanes": [self.conflict.lane_a, self.conflict.lane_b],
                "x": self.conflict.point[0],
                "y": self.conflict.point[1],
            }
        return doc


@dataclass(frozen=True)
class GraphConfig:
    match: MatchConfig = field(default_factory=MatchConfig)
    horizon: float = 150.0  # meters of successor chain to search
    max_depth: int = 5
    lateral_buffer: float = 5.0  # slack added to the half-length overlap test


@dataclass(frozen=True)
class SceneGraph:
    timestamp: int
    nodes: Mapping[int, GraphNode]
    edges: tuple[RelationEdge, ...]

    def edges_between(self, a: int, b: int) -> list[RelationEdge]:
        return [e for e in self.edges if {e.from_id, e.to_id} == {a, b}]

    def edges_of_kind(self, kind: RelationKind) -> Iterator[RelationEdge]:
        return (e for e in self.edges if e.kind is kind)

    def to_json(self) -> dict:
        return {
            "t": self.timestamp,
            "nodes": [self.nodes[k].to_json() for k in sorted(self.nodes)],
            "edges": [e.to_json() for e in self.edges],
        }


def _match_nodes(
    scene: Scene, lane_map: LaneMap, config: GraphConfig
) -> dict[int, GraphNode]:
    nodes: dict[int, GraphNode] = {}
    for obj, state in sorted(scene, key=lambda pair: pair[0].track_id):
        try:
            pose = project_to_frenet((state.x, state.y, state.yaw), lane_map, config.match)
        except NoLaneMatch:
            pose = None
        nodes[obj.track_id] = GraphNode(obj=obj, state=state, pose=pose)
    return nodes


def _longitudinal_edge(
    a: GraphNode, b: GraphNode, lane_map: LaneMap, config: GraphConfig
) -> RelationEdge | None:
    """Follower -> leader edge when one actor trails the other along lanes."""
    d_ab = chain_distance(
        lane_map, a.pose.lane_id, a.pose.s, b.pose.lane_id, b.pose.s,
        horizon=config.horizon, max_depth=config.max_depth,
    )
    d_ba = chain_distance(
        lane_map, b.pose.lane_id, b.pose.s, a.pose.lane_id, a.pose.s,
        horizon=config.horizon, max_depth=config.max_depth,
    )
    if d_ab is None and d_ba is None:
        return None
    # on a lane cycle both directions can connect; the shorter one wins
    if d_ba is None or (d_ab is not None and d_ab <= d_ba):
        follower, leader, center_dist = a, b, d_ab
    else:
        follower, leader, center_dist = b, a, d_ba
    gap = max(0.0, center_dist - follower.obj.half_length - leader.obj.half_length)
    return RelationEdge(
        from_id=follower.obj.track_id,
        to_id=leader.obj.track_id,
        kind=RelationKind.LONGITUDINAL,
        gap=gap,
    )


def _lateral_pair(
    a: GraphNode, b: GraphNode, lane_map: LaneMap, config: GraphConfig
) -> bool:
    """True when a and b ride neighboring lanes roughly abreast.

    The partner position is re-projected onto this actor's lane so the s
    ranges share one axis; ranges are inflated by both half lengths plus a
    small buffer to also catch slightly offset driving.
    """
    if b.pose.lane_id not in lane_map.neighbors_of(a.pose.lane_id):
        return False
    lane = lane_map.lane(a.pose.lane_id)
    _, s_partner, _, _ = lane.project(b.state.x, b.state.y)
    slack = a.obj.half_length + b.obj.half_length + config.lateral_buffer
    return abs(a.pose.s - s_partner) <= slack


def _intersecting_conflict(
    a: GraphNode, b: GraphNode, lane_map: LaneMap
) -> tuple[ConflictPoint, float, float] | None:
    """Nearest shared conflict point still ahead of both actors."""
    best: tuple[ConflictPoint, float, float] | None = None
    for cp in lane_map.conflicts_between(a.pose.lane_id, b.pose.lane_id):
        d_a = cp.distance_on(a.pose.lane_id) - a.pose.s
        d_b = cp.distance_on(b.pose.lane_id) - b.pose.s
        if d_a <= 0.0 or d_b <= 0.0:
            continue
        if best is None or d_a + d_b < best[1] + best[2]:
            best = (cp, d_a, d_b)
    return best


def build_scene_graph(
    scene: Scene,
    lane_map: LaneMap,
    config: GraphConfig | None = None,
    timestamp: int | None = None,
) -> SceneGraph:
    """Relate every pair of road users present in one scene.

    Purely a function of its inputs: identical scenes yield identical
    graphs, so frames can be processed in parallel.
    """
    config = config or GraphConfig()
    if timestamp is None:
        timestamp = scene[0][1].timestamp if scene else 0
    nodes = _match_nodes(scene, lane_map, config)
    edges: list[RelationEdge] = []

    ids = sorted(nodes)
    for i, id_a in enumerate(ids):
        for id_b in ids[i + 1:]:
            a, b = nodes[id_a], nodes[id_b]
            if a.pose is None or b.pose is None:
                continue
            both_vehicles = (
                a.obj.object_class in VEHICLE_CLASSES
                and b.obj.object_class in VEHICLE_CLASSES
            )
            if both_vehicles and a.pose.lane_id == b.pose.lane_id:
                edge = _longitudinal_edge(a, b, lane_map, config)
                if edge is not None:
                    edges.append(edge)
                continue
            if both_vehicles:
                edge = _longitudinal_edge(a, b, lane_map, config)
                if edge is not None:
                    edges.append(edge)
                if _lateral_pair(a, b, lane_map, config) or _lateral_pair(
                    b, a, lane_map, config
                ):
                    edges.append(
                        RelationEdge(id_a, id_b, RelationKind.LATERAL)
                    )
                    edges.append(
                        RelationEdge(id_b, id_a, RelationKind.LATERAL)
                    )
            hit = _intersecting_conflict(a, b, lane_map)
            if hit is not None:
                cp, d_a, d_b = hit
                edges.append(
                    RelationEdge(
                        id_a, id_b, RelationKind.INTERSECTING, gap=d_a, conflict=cp
                    )
                )
                edges.append(
                    RelationEdge(
                        id_b, id_a, RelationKind.INTERSECTING, gap=d_b, conflict=cp
                    )
                )

    edges.sort(key=lambda e: (e.from_id, e.to_id, e.kind.value))
    return SceneGraph(timestamp=timestamp, nodes=nodes, edges=tuple(edges))
