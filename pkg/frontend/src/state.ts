import type { ScenarioDetail } from "./types";

export type CameraMode =
  | { kind: "orbit" }
  | { kind: "top-down" }
  | { kind: "actor-follow"; track: number };

export interface Playback {
  playing: boolean;
  speed: number; // real-time multiplier
  direction: 1 | -1;
}

export interface ViewerState {
  scenario: ScenarioDetail | null;
  t: number; // always a member of scenario.timestamps
  playback: Playback;
  measure: string;
  threshold: number; // >= 0
  camera: CameraMode;
  cubeShown: boolean;
  cubeStride: number;
}

export function initialState(): ViewerState {
  return {
    scenario: null,
    t: 0,
    playback: { playing: false, speed: 1, direction: 1 },
    measure: "inv_ttc",
    threshold: 0,
    camera: { kind: "orbit" },
    cubeShown: false,
    cubeStride: 1,
  };
}

/** Nearest member of a sorted timestamp list; ties resolve to the earlier frame. */
export function nearestTimestamp(timestamps: number[], t: number): number {
  if (timestamps.length === 0) throw new Error("empty timestamp list");
  let lo = 0;
  let hi = timestamps.length - 1;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (timestamps[mid]! < t) lo = mid + 1;
    else hi = mid;
  }
  // lo is the first index with timestamps[lo] >= t; compare with predecessor
  if (lo > 0 && t - timestamps[lo - 1]! <= timestamps[lo]! - t) return timestamps[lo - 1]!;
  return timestamps[lo]!;
}

export function loadScenario(state: ViewerState, detail: ScenarioDetail): ViewerState {
  const measure = detail.measures.includes(state.measure)
    ? state.measure
    : (detail.measures[0] ?? "inv_ttc");
  return {
    ...state,
    scenario: detail,
    t: detail.timestamps[0] ?? 0,
    measure,
    playback: { ...state.playback, playing: false },
    camera: { kind: "orbit" },
  };
}

/** Snap to the nearest served frame; repeated seeks to the same t are no-ops. */
export function seek(state: ViewerState, t: number): ViewerState {
  if (!state.scenario) return state;
  const snapped = nearestTimestamp(state.scenario.timestamps, t);
  if (snapped === state.t) return state;
  return { ...state, t: snapped };
}

export function setMeasure(state: ViewerState, measure: string): ViewerState {
  return measure === state.measure ? state : { ...state, measure };
}

export function setThreshold(state: ViewerState, threshold: number): ViewerState {
  const clamped = Math.max(0, Number.isFinite(threshold) ? threshold : 0);
  return clamped === state.threshold ? state : { ...state, threshold: clamped };
}

export function setCamera(state: ViewerState, camera: CameraMode): ViewerState {
  return { ...state, camera };
}

export function setPlaying(state: ViewerState, playing: boolean): ViewerState {
  return { ...state, playback: { ...state.playback, playing } };
}

export function setSpeed(state: ViewerState, speed: number): ViewerState {
  return { ...state, playback: { ...state.playback, speed: Math.max(0.1, speed) } };
}

export function setDirection(state: ViewerState, direction: 1 | -1): ViewerState {
  return { ...state, playback: { ...state.playback, direction } };
}

export function setCube(state: ViewerState, shown: boolean): ViewerState {
  return { ...state, cubeShown: shown };
}

export function setCubeStride(state: ViewerState, stride: number): ViewerState {
  return { ...state, cubeStride: Math.max(1, Math.round(stride)) };
}
