"""Criticality analysis and abstract 3D visualization for recorded road traffic.

The pipeline turns naturalistic motion recordings (object-list CSV plus a
lane-level map) into per-timestamp semantic scene graphs, scores every
relation with exchangeable criticality measures (inverse TTC, an
intersection TTC variant, the RSS longitudinal check, the SFF safety
potential), aggregates timelines, detects critical intervals, and exports
renderer-agnostic 3D documents (criticality-sphere scene view, space-time
cube) plus an HTTP API for interactive exploration.
"""

from .analysis import (
    ALL_MEASURES,
    CriticalInterval,
    Measure,
    Timeline,
    analyze_scenario,
    detect_critical_intervals,
    pair_breakdown,
)
from .criticality import (
    CriticalityRecord,
    MeasureParams,
    RssParams,
    SffParams,
    compute_inverse_ttc,
    compute_rss_longitudinal,
    compute_sff_safety_potential,
    compute_ttc,
    compute_ttc_int,
    evaluate_edge,
    evaluate_graph,
)
from .errors import (
    BadNumeric,
    EmptyWindow,
    IngestError,
    LaneMapError,
    MismatchedTimestamp,
    MissingColumn,
    NoLaneMatch,
    NonMonotonicTime,
    ScenecritError,
    SchemaViolation,
    UnknownTimestamp,
    ZeroGap,
)
from .ingest import (
    IngestConfig,
    ObjectClass,
    ObjectState,
    Scenario,
    TrackedObject,
    load_scenario,
    parse_tracks,
    scenario_from_json,
    scenario_to_json,
    scene_at,
)
from .lanemap import (
    ConflictPoint,
    FrenetPose,
    Lane,
    LaneMap,
    MatchConfig,
    build_conflicts,
    chain_distance,
    gap_along_lane,
    lane_map_to_json,
    load_lane_map,
    parse_lane_map,
    project_to_frenet,
)
from .scenegraph import (
    GraphConfig,
    GraphNode,
    RelationEdge,
    RelationKind,
    SceneGraph,
    build_scene_graph,
)
from .visexport import (
    Box,
    Polyline,
    Segment,
    Sphere,
    VisDocument,
    VisKind,
    export_scene_graph_view,
    export_space_time_cube,
)

__version__ = "0.1.0"
