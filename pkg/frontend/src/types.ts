// Shapes of the JSON bodies served by the scenecrit HTTP API.
// The viewer treats all of these as read-only.

export type Vec3 = [number, number, number];
export type Rgba = [number, number, number, number];

export interface BoxPrimitive {
  type: "box";
  center: Vec3;
  yaw: number;
  extent: Vec3;
  color: Rgba;
}

export interface SpherePrimitive {
  type: "sphere";
  center: Vec3;
  radius: number;
  color: Rgba;
}

export interface SegmentPrimitive {
  type: "segment";
  a: Vec3;
  b: Vec3;
  color: Rgba;
}

export interface PolylinePrimitive {
  type: "polyline";
  points: Vec3[];
  color: Rgba;
}

export type Primitive =
  | BoxPrimitive
  | SpherePrimitive
  | SegmentPrimitive
  | PolylinePrimitive;

export interface SceneViewMeta {
  t: number;
  measure: string;
  threshold: number;
  value_min: number | null;
  value_max: number | null;
}

export interface CubeMeta {
  t0: number;
  t1: number;
  stride: number;
  time_scale: number;
  tracks: number[];
}

export interface VisDocument {
  version: number;
  kind: "scene_graph_view" | "space_time_cube";
  meta: Record<string, unknown>;
  primitives: Primitive[];
}

export interface ScenarioSummary {
  id: string;
  t_start: number;
  t_end: number;
  frame_interval_ms: number;
  tracks: number;
  measures: string[];
}

export interface TrackMeta {
  track: number;
  class: string;
  length: number;
  width: number;
  t_first: number;
  t_last: number;
}

export interface ScenarioDetail extends ScenarioSummary {
  timestamps: number[];
  objects: TrackMeta[];
}

export interface Lane {
  lane_id: number;
  width: number;
  centerline: [number, number][];
  successors: number[];
  left_neighbor: number | null;
  right_neighbor: number | null;
}

export interface LaneMapDoc {
  version: number;
  meta: Record<string, unknown>;
  lanes: Lane[];
}

export interface TimelineDoc {
  measure: string;
  points: [number, number][];
}

export interface Interval {
  measure: string;
  t_start: number;
  t_end: number;
  peak_value: number;
  peak_t: number;
  peak_pair: [number, number] | null;
}

export interface IntervalsDoc {
  measure: string;
  threshold: number;
  min_gap: number;
  intervals: Interval[];
}

export interface LanePose {
  lane: number;
  s: number;
  d: number;
}

export interface GraphNode {
  track: number;
  class: string;
  x: number;
  y: number;
  yaw: number;
  speed: number;
  length: number;
  width: number;
  pose: LanePose | null;
}

export interface GraphEdge {
  from: number;
  to: number;
  kind: "longitudinal" | "lateral" | "intersecting";
  gap?: number | null;
  conflict?: unknown;
}

export interface FrameGraph {
  t: number;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface FrameGraphDoc {
  document: VisDocument;
  graph: FrameGraph;
}

export interface CameraPreset {
  eye: Vec3;
  forward: Vec3;
  up: Vec3;
}

export interface ActorPose {
  track: number;
  class: string;
  x: number;
  y: number;
  yaw: number;
  speed: number;
  length: number;
  width: number;
  camera: CameraPreset;
}

export interface FramePoses {
  t: number;
  actors: ActorPose[];
}
