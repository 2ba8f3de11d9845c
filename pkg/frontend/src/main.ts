import * as THREE from "three";

import { ApiClient } from "./api";
import {
  actorView,
  applyView,
  OrbitRig,
  topDownView,
  type LookAround,
} from "./cameras";
import { apiBase } from "./config";
import { ViewerController } from "./controller";
import { CubeOverlay } from "./cube";
import { buildDocumentGroup, buildLaneGroup, laneBounds, type Bounds } from "./scene";
import type { ViewerState } from "./state";
import { TimelinePanel } from "./timeline";
import type { FrameGraphDoc, FramePoses, Interval, TimelineDoc } from "./types";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const viewHost = el<HTMLDivElement>("view");
const banner = el<HTMLDivElement>("banner");
const hud = el<HTMLDivElement>("hud");
const scenarioSelect = el<HTMLSelectElement>("scenario");
const measureSelect = el<HTMLSelectElement>("measure");
const thresholdSlider = el<HTMLInputElement>("threshold");
const thresholdValue = el<HTMLSpanElement>("threshold-value");
const camOrbitBtn = el<HTMLButtonElement>("cam-orbit");
const camTopBtn = el<HTMLButtonElement>("cam-top");
const camActorSelect = el<HTMLSelectElement>("cam-actor");
const playBtn = el<HTMLButtonElement>("play");
const dirBtn = el<HTMLButtonElement>("dir");
const speedSelect = el<HTMLSelectElement>("speed");
const cubeToggleBtn = el<HTMLButtonElement>("cube-toggle");
const cubeStrideInput = el<HTMLInputElement>("cube-stride");
const intervalList = el<HTMLUListElement>("intervals");
const timelineCanvas = el<HTMLCanvasElement>("timeline");
const tooltip = el<HTMLDivElement>("tooltip");

// three.js basics, z-up to match the data
const renderer = new THREE.WebGLRenderer({ antialias: true });
viewHost.appendChild(renderer.domElement);
const scene = new THREE.Scene();
scene.background = new THREE.Color(0x0d0f12);
const camera = new THREE.PerspectiveCamera(55, 1, 0.1, 5000);
camera.up.set(0, 0, 1);
scene.add(new THREE.AmbientLight(0xffffff, 0.75));
const sun = new THREE.DirectionalLight(0xffffff, 1.4);
sun.position.set(80, -40, 120);
scene.add(sun);

let laneGroup: THREE.Group | null = null;
let frameGroup: THREE.Group | null = null;
const cubeOverlay = new CubeOverlay();
scene.add(cubeOverlay.group);

const orbit = new OrbitRig();
const look: LookAround = { yaw: 0, pitch: 0 };
let mapBounds: Bounds | null = null;

const timelinePanel = new TimelinePanel();

let bannerTimer: number | undefined;
function showBanner(message: string): void {
  banner.textContent = message;
  banner.classList.add("show");
  window.clearTimeout(bannerTimer);
  bannerTimer = window.setTimeout(() => banner.classList.remove("show"), 4000);
}

const controller = new ViewerController(new ApiClient(apiBase()), {
  onError: showBanner,
  onScenarios(list) {
    scenarioSelect.replaceChildren(
      ...list.map((s) => new Option(`${s.id} (${s.tracks} tracks)`, s.id)),
    );
  },
  onMap(map) {
    if (laneGroup) scene.remove(laneGroup);
    laneGroup = buildLaneGroup(map);
    scene.add(laneGroup);
    mapBounds = laneBounds(map);
    if (mapBounds) {
      orbit.target = [
        (mapBounds.min[0] + mapBounds.max[0]) / 2,
        (mapBounds.min[1] + mapBounds.max[1]) / 2,
        0,
      ];
      orbit.radius =
        Math.max(
          mapBounds.max[0] - mapBounds.min[0],
          mapBounds.max[1] - mapBounds.min[1],
          40,
        ) * 0.8;
    }
  },
  onFrame(doc: FrameGraphDoc, poses: FramePoses) {
    if (frameGroup) scene.remove(frameGroup);
    frameGroup = buildDocumentGroup(doc.document);
    scene.add(frameGroup);
    refreshActorOptions(poses);
    cubeOverlay.setNow(poses.t);
  },
  onTimeline(timeline: TimelineDoc, intervals: Interval[]) {
    const ts = controller.state.scenario?.timestamps ?? [];
    timelinePanel.setData(timeline, intervals, ts);
    renderIntervalList(intervals);
    drawTimeline();
  },
  onCube(doc) {
    cubeOverlay.setDocument(doc);
    cubeOverlay.setNow(controller.state.t);
    cubeToggleBtn.classList.toggle("active", doc !== null);
    cubeToggleBtn.textContent = doc !== null ? "hide cube" : "show cube";
  },
  onState(state) {
    syncControls(state);
  },
});

function refreshActorOptions(poses: FramePoses): void {
  const current = camActorSelect.value;
  camActorSelect.replaceChildren(
    new Option("follow actor...", ""),
    ...poses.actors.map(
      (actor) => new Option(`${actor.track} (${actor.class})`, String(actor.track)),
    ),
  );
  camActorSelect.value = current;
  if (camActorSelect.value !== current) camActorSelect.value = "";
}

function renderIntervalList(intervals: Interval[]): void {
  intervalList.replaceChildren(
    ...intervals.map((interval) => {
      const item = document.createElement("li");
      const pair = interval.peak_pair ? ` (${interval.peak_pair.join(", ")})` : "";
      item.textContent =
        `${(interval.t_start / 1000).toFixed(1)}-${(interval.t_end / 1000).toFixed(1)} s ` +
        `peak ${interval.peak_value.toPrecision(3)}${pair}`;
      item.title = `jump to peak at ${interval.peak_t} ms`;
      item.addEventListener("click", () => controller.seekTo(interval.peak_t));
      return item;
    }),
  );
}

function syncControls(state: ViewerState): void {
  hud.textContent = `t = ${state.t} ms`;
  playBtn.textContent = state.playback.playing ? "pause" : "play";
  dirBtn.innerHTML = state.playback.direction === 1 ? "&#9654; fwd" : "&#9664; rev";
  camOrbitBtn.classList.toggle("active", state.camera.kind === "orbit");
  camTopBtn.classList.toggle("active", state.camera.kind === "top-down");
  if (state.camera.kind !== "actor-follow") camActorSelect.value = "";
  if (state.scenario && measureSelect.options.length !== state.scenario.measures.length) {
    measureSelect.replaceChildren(
      ...state.scenario.measures.map((m) => new Option(m, m)),
    );
  }
  measureSelect.value = state.measure;
  timelinePanel.cursor = state.t;
  timelinePanel.threshold = state.threshold;
  drawTimeline();
}

// timeline canvas
function drawTimeline(): void {
  const ctx = timelineCanvas.getContext("2d");
  if (!ctx) return;
  const { clientWidth, clientHeight } = timelineCanvas;
  if (timelineCanvas.width !== clientWidth) timelineCanvas.width = clientWidth;
  if (timelineCanvas.height !== clientHeight) timelineCanvas.height = clientHeight;
  timelinePanel.draw(ctx, timelineCanvas.width, timelineCanvas.height);
}

timelineCanvas.addEventListener("pointerdown", (event) => {
  const target = timelinePanel.clickTarget(event.offsetX, timelineCanvas.width);
  if (target !== null) controller.seekTo(target);
});
timelineCanvas.addEventListener("pointermove", (event) => {
  const hover = timelinePanel.hoverValue(event.offsetX, timelineCanvas.width);
  if (!hover) {
    tooltip.style.display = "none";
    return;
  }
  tooltip.style.display = "block";
  tooltip.style.left = `${event.offsetX + 12}px`;
  tooltip.style.top = `${event.offsetY - 8}px`;
  tooltip.textContent = `${hover.t} ms: ${hover.value.toPrecision(4)}`;
});
timelineCanvas.addEventListener("pointerleave", () => {
  tooltip.style.display = "none";
});

// side panel controls
scenarioSelect.addEventListener("change", () => {
  void controller.openScenario(scenarioSelect.value);
});
measureSelect.addEventListener("change", () => controller.setMeasure(measureSelect.value));
thresholdSlider.addEventListener("input", () => {
  const value = Number(thresholdSlider.value);
  thresholdValue.textContent = value.toFixed(2);
  controller.setThreshold(value);
});
camOrbitBtn.addEventListener("click", () => controller.setCameraMode({ kind: "orbit" }));
camTopBtn.addEventListener("click", () => controller.setCameraMode({ kind: "top-down" }));
camActorSelect.addEventListener("change", () => {
  const track = Number(camActorSelect.value);
  if (camActorSelect.value === "" || Number.isNaN(track)) {
    controller.setCameraMode({ kind: "orbit" });
  } else {
    look.yaw = 0;
    look.pitch = 0;
    controller.setCameraMode({ kind: "actor-follow", track });
  }
});
playBtn.addEventListener("click", () => controller.setPlaying(!controller.state.playback.playing));
dirBtn.addEventListener("click", () =>
  controller.setDirection(controller.state.playback.direction === 1 ? -1 : 1),
);
speedSelect.addEventListener("change", () => controller.setSpeed(Number(speedSelect.value)));
cubeToggleBtn.addEventListener("click", () => controller.setCubeShown(!controller.state.cubeShown));
cubeStrideInput.addEventListener("change", () =>
  controller.setCubeStride(Number(cubeStrideInput.value)),
);

// mouse control over the 3D view: orbit drag / look-around in follow mode
let dragging = false;
renderer.domElement.addEventListener("pointerdown", (event) => {
  dragging = true;
  renderer.domElement.setPointerCapture(event.pointerId);
});
renderer.domElement.addEventListener("pointerup", () => {
  dragging = false;
});
renderer.domElement.addEventListener("pointermove", (event) => {
  if (!dragging) return;
  if (controller.state.camera.kind === "actor-follow") {
    look.yaw -= event.movementX * 0.004;
    look.pitch -= event.movementY * 0.004;
  } else if (controller.state.camera.kind === "orbit") {
    if (event.shiftKey) orbit.panBy(event.movementX * 0.2, event.movementY * 0.2);
    else orbit.rotateBy(-event.movementX * 0.005, event.movementY * 0.005);
  }
});
renderer.domElement.addEventListener("wheel", (event) => {
  event.preventDefault();
  orbit.zoomBy(event.deltaY > 0 ? 1.12 : 1 / 1.12);
});

function resize(): void {
  const width = viewHost.clientWidth;
  const height = viewHost.clientHeight;
  renderer.setSize(width, height, false);
  renderer.setPixelRatio(window.devicePixelRatio);
  camera.aspect = width / Math.max(1, height);
  camera.updateProjectionMatrix();
  drawTimeline();
}
window.addEventListener("resize", resize);

function updateCamera(): void {
  const mode = controller.state.camera;
  if (mode.kind === "actor-follow") {
    const pose = controller.lastPoses?.actors.find((actor) => actor.track === mode.track);
    if (pose) {
      applyView(camera, actorView(pose, look));
      return;
    }
  }
  if (mode.kind === "top-down" && mapBounds) {
    const center: [number, number] = [
      (mapBounds.min[0] + mapBounds.max[0]) / 2,
      (mapBounds.min[1] + mapBounds.max[1]) / 2,
    ];
    const extent = Math.max(
      mapBounds.max[0] - mapBounds.min[0],
      mapBounds.max[1] - mapBounds.min[1],
      30,
    );
    applyView(camera, topDownView(center, extent * 0.9));
    return;
  }
  applyView(camera, orbit.view());
}

let lastTick = performance.now();
function loop(now: number): void {
  const elapsed = now - lastTick;
  lastTick = now;
  controller.tick(elapsed);
  cubeOverlay.setNow(controller.state.t);
  updateCamera();
  renderer.render(scene, camera);
  requestAnimationFrame(loop);
}

resize();
requestAnimationFrame(loop);
void controller.start();
