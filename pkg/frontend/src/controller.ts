import type { ApiClient } from "./api";
import { reconcileCamera } from "./cameras";
import { PlaybackTicker } from "./playback";
import { LatestWins } from "./seq";
import * as viewer from "./state";
import type { CameraMode, ViewerState } from "./state";
import type {
  FrameGraphDoc,
  FramePoses,
  Interval,
  LaneMapDoc,
  ScenarioSummary,
  TimelineDoc,
  VisDocument,
} from "./types";

export interface ControllerEvents {
  onState(state: ViewerState): void;
  onScenarios(list: ScenarioSummary[]): void;
  onMap(map: LaneMapDoc): void;
  onFrame(doc: FrameGraphDoc, poses: FramePoses): void;
  onTimeline(timeline: TimelineDoc, intervals: Interval[]): void;
  onCube(doc: VisDocument | null): void;
  onError(message: string): void;
}

/**
 * Everything between the HTTP API and the screen except pixels. Owns the
 * viewer state, keeps fetches last-write-wins, and leaves the previous good
 * data in place when a request fails (errors surface through onError only).
 */
export class ViewerController {
  state: ViewerState = viewer.initialState();
  lastFrame: FrameGraphDoc | null = null;
  lastPoses: FramePoses | null = null;
  lastTimeline: TimelineDoc | null = null;
  lastIntervals: Interval[] = [];
  lastCube: VisDocument | null = null;

  private readonly gates = new LatestWins();
  private readonly ticker = new PlaybackTicker();

  constructor(
    readonly api: ApiClient,
    private readonly events: Partial<ControllerEvents> = {},
  ) {}

  private emitState(): void {
    this.events.onState?.(this.state);
  }

  private fail(context: string, error: unknown): void {
    const message = error instanceof Error ? error.message : String(error);
    this.events.onError?.(`${context}: ${message}`);
  }

  async start(): Promise<void> {
    try {
      const list = await this.api.scenarios();
      this.events.onScenarios?.(list);
      if (list.length > 0) await this.openScenario(list[0]!.id);
    } catch (error) {
      this.fail("loading scenario list", error);
    }
  }

  async openScenario(id: string): Promise<void> {
    try {
      const [detail, map] = await Promise.all([this.api.scenario(id), this.api.laneMap(id)]);
      this.state = viewer.loadScenario(this.state, detail);
      this.lastCube = null;
      this.events.onMap?.(map);
      this.events.onCube?.(null);
      this.emitState();
      await Promise.all([this.refreshTimeline(), this.refreshFrame()]);
    } catch (error) {
      this.fail(`opening scenario ${id}`, error);
    }
  }

  /** Seek snaps to the nearest served frame and refetches its documents. */
  seekTo(t: number): void {
    const next = viewer.seek(this.state, t);
    if (next === this.state) return;
    this.state = next;
    this.emitState();
    void this.refreshFrame();
    this.keepCubeInWindow();
  }

  setMeasure(measure: string): void {
    const next = viewer.setMeasure(this.state, measure);
    if (next === this.state) return;
    this.state = next;
    this.emitState();
    void this.refreshTimeline();
    void this.refreshFrame();
  }

  setThreshold(threshold: number): void {
    const next = viewer.setThreshold(this.state, threshold);
    if (next === this.state) return;
    this.state = next;
    this.emitState();
    void this.refreshIntervals();
    void this.refreshFrame();
  }

  setCameraMode(mode: CameraMode): void {
    this.state = viewer.setCamera(this.state, mode);
    this.emitState();
  }

  setPlaying(playing: boolean): void {
    this.state = viewer.setPlaying(this.state, playing);
    if (playing) this.ticker.reset();
    this.emitState();
  }

  setSpeed(speed: number): void {
    this.state = viewer.setSpeed(this.state, speed);
    this.emitState();
  }

  setDirection(direction: 1 | -1): void {
    this.state = viewer.setDirection(this.state, direction);
    this.emitState();
  }

  setCubeShown(shown: boolean): void {
    this.state = viewer.setCube(this.state, shown);
    this.emitState();
    if (shown) void this.refreshCube();
    else {
      this.lastCube = null;
      this.events.onCube?.(null);
    }
  }

  setCubeStride(stride: number): void {
    const next = viewer.setCubeStride(this.state, stride);
    if (next === this.state) return;
    this.state = next;
    this.emitState();
    if (this.state.cubeShown) void this.refreshCube();
  }

  /** Drive playback from the render loop; returns true if the frame moved. */
  tick(elapsedRealMs: number): boolean {
    const { scenario, playback } = this.state;
    if (!scenario || !playback.playing) return false;
    const step = this.ticker.tick(
      scenario.timestamps,
      this.state.t,
      elapsedRealMs,
      playback.speed,
      playback.direction,
    );
    if (step.ended) {
      this.state = viewer.setPlaying(this.state, false);
      this.emitState();
    }
    if (step.t === this.state.t) return false;
    this.state = { ...this.state, t: step.t };
    this.emitState();
    void this.refreshFrame();
    this.keepCubeInWindow();
    return true;
  }

  /** Window for the cube: the critical interval around t, else the full span. */
  cubeWindow(): [number, number] | null {
    const scenario = this.state.scenario;
    if (!scenario) return null;
    const t = this.state.t;
    const around = this.lastIntervals.find(
      (interval) => interval.t_start <= t && t <= interval.t_end,
    );
    if (around && around.t_start < around.t_end) return [around.t_start, around.t_end];
    if (scenario.t_start < scenario.t_end) return [scenario.t_start, scenario.t_end];
    return null;
  }

  private keepCubeInWindow(): void {
    if (!this.state.cubeShown || !this.lastCube) return;
    const meta = this.lastCube.meta as { t0?: number; t1?: number };
    const t = this.state.t;
    if (meta.t0 !== undefined && meta.t1 !== undefined && (t < meta.t0 || t > meta.t1)) {
      void this.refreshCube();
    }
  }

  private async refreshFrame(): Promise<void> {
    const scenario = this.state.scenario;
    if (!scenario) return;
    const seq = this.gates.issue("frame");
    const { id } = scenario;
    const { t, measure, threshold } = this.state;
    try {
      const [doc, poses] = await Promise.all([
        this.api.frameGraph(id, t, measure, threshold),
        this.api.poses(id, t),
      ]);
      if (!this.gates.isCurrent("frame", seq)) return;
      this.lastFrame = doc;
      this.lastPoses = poses;
      const camera = reconcileCamera(this.state.camera, poses);
      if (camera !== this.state.camera) {
        this.state = viewer.setCamera(this.state, camera);
        this.emitState();
      }
      this.events.onFrame?.(doc, poses);
    } catch (error) {
      if (this.gates.isCurrent("frame", seq)) this.fail(`frame ${t}`, error);
    }
  }

  private async refreshTimeline(): Promise<void> {
    const scenario = this.state.scenario;
    if (!scenario) return;
    const seq = this.gates.issue("timeline");
    const { measure, threshold } = this.state;
    try {
      const [timeline, intervals] = await Promise.all([
        this.api.timeline(scenario.id, measure),
        this.api.intervals(scenario.id, measure, threshold),
      ]);
      if (!this.gates.isCurrent("timeline", seq)) return;
      this.lastTimeline = timeline;
      this.lastIntervals = intervals.intervals;
      this.events.onTimeline?.(timeline, intervals.intervals);
    } catch (error) {
      if (this.gates.isCurrent("timeline", seq)) this.fail(`timeline ${measure}`, error);
    }
  }

  private async refreshIntervals(): Promise<void> {
    const scenario = this.state.scenario;
    if (!scenario || !this.lastTimeline) return;
    const seq = this.gates.issue("timeline");
    const { measure, threshold } = this.state;
    try {
      const intervals = await this.api.intervals(scenario.id, measure, threshold);
      if (!this.gates.isCurrent("timeline", seq)) return;
      this.lastIntervals = intervals.intervals;
      this.events.onTimeline?.(this.lastTimeline, intervals.intervals);
    } catch (error) {
      if (this.gates.isCurrent("timeline", seq)) this.fail("intervals", error);
    }
  }

  private async refreshCube(): Promise<void> {
    const scenario = this.state.scenario;
    const window = this.cubeWindow();
    if (!scenario || !window) return;
    const seq = this.gates.issue("cube");
    try {
      const doc = await this.api.cube(scenario.id, window[0], window[1], this.state.cubeStride);
      if (!this.gates.isCurrent("cube", seq)) return;
      this.lastCube = doc;
      this.events.onCube?.(doc);
    } catch (error) {
      if (this.gates.isCurrent("cube", seq)) this.fail("cube", error);
    }
  }
}
