import * as THREE from "three";

import type { CameraMode } from "./state";
import type { ActorPose, FramePoses, Vec3 } from "./types";

export interface ViewPose {
  eye: Vec3;
  forward: Vec3;
  up: Vec3;
}

/** User look-around on top of the follow camera, radians. */
export interface LookAround {
  yaw: number;
  pitch: number;
}

const PITCH_LIMIT = Math.PI / 2 - 0.05;

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: Vec3): Vec3 {
  const len = Math.hypot(v[0], v[1], v[2]) || 1;
  return [v[0] / len, v[1] / len, v[2] / len];
}

// Rodrigues rotation of v about unit axis k.
function rotate(v: Vec3, k: Vec3, angle: number): Vec3 {
  const cosA = Math.cos(angle);
  const sinA = Math.sin(angle);
  const kxv = cross(k, v);
  const dot = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
  return [
    v[0] * cosA + kxv[0] * sinA + k[0] * dot * (1 - cosA),
    v[1] * cosA + kxv[1] * sinA + k[1] * dot * (1 - cosA),
    v[2] * cosA + kxv[2] * sinA + k[2] * dot * (1 - cosA),
  ];
}

/**
 * First-person view from the served driver preset. The eye never moves with
 * look-around, only the gaze direction does, so pausing and looking out the
 * side window keeps the pose fixed.
 */
export function actorView(pose: ActorPose, look: LookAround): ViewPose {
  const preset = pose.camera;
  const up = normalize(preset.up);
  let forward = normalize(preset.forward);
  forward = rotate(forward, up, look.yaw);
  const side = normalize(cross(forward, up));
  const pitch = Math.max(-PITCH_LIMIT, Math.min(PITCH_LIMIT, look.pitch));
  forward = normalize(rotate(forward, side, pitch));
  return { eye: [...preset.eye], forward, up };
}

/** Orbit rig: spherical coordinates around a target point, z-up. */
export class OrbitRig {
  target: Vec3 = [0, 0, 0];
  radius = 60;
  azimuth = -Math.PI / 2;
  elevation = 0.9;

  rotateBy(dAzimuth: number, dElevation: number): void {
    this.azimuth += dAzimuth;
    this.elevation = Math.max(0.05, Math.min(PITCH_LIMIT, this.elevation + dElevation));
  }

  zoomBy(factor: number): void {
    this.radius = Math.max(2, Math.min(2000, this.radius * factor));
  }

  panBy(dx: number, dy: number): void {
    // pan in the horizontal plane relative to the viewing azimuth
    const sinA = Math.sin(this.azimuth);
    const cosA = Math.cos(this.azimuth);
    this.target[0] += dx * sinA + dy * cosA;
    this.target[1] += -dx * cosA + dy * sinA;
  }

  view(): ViewPose {
    const horizontal = this.radius * Math.cos(this.elevation);
    const eye: Vec3 = [
      this.target[0] + horizontal * Math.cos(this.azimuth),
      this.target[1] + horizontal * Math.sin(this.azimuth),
      this.target[2] + this.radius * Math.sin(this.elevation),
    ];
    const forward = normalize([
      this.target[0] - eye[0],
      this.target[1] - eye[1],
      this.target[2] - eye[2],
    ]);
    return { eye, forward, up: [0, 0, 1] };
  }
}

export function topDownView(center: [number, number], height: number): ViewPose {
  return {
    eye: [center[0], center[1], Math.max(10, height)],
    forward: [0, 0, -1],
    up: [0, 1, 0], // keep map +y pointing to the top of the screen
  };
}

/** A follow target that left the scene drops the camera back to orbit. */
export function reconcileCamera(mode: CameraMode, poses: FramePoses): CameraMode {
  if (mode.kind !== "actor-follow") return mode;
  const present = poses.actors.some((actor) => actor.track === mode.track);
  return present ? mode : { kind: "orbit" };
}

export function applyView(camera: THREE.PerspectiveCamera, view: ViewPose): void {
  camera.up.set(view.up[0], view.up[1], view.up[2]);
  camera.position.set(view.eye[0], view.eye[1], view.eye[2]);
  camera.lookAt(
    view.eye[0] + view.forward[0],
    view.eye[1] + view.forward[1],
    view.eye[2] + view.forward[2],
  );
}
