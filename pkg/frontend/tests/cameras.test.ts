import { describe, expect, it } from "vitest";

import { actorView, OrbitRig, reconcileCamera, topDownView } from "../src/cameras";
import type { CameraMode } from "../src/state";
import type { FramePoses } from "../src/types";
import { fixture } from "./helpers";

const poses = fixture<FramePoses>("poses_5900.json");
const follower = poses.actors.find((a) => a.track === 1)!;
const leader = poses.actors.find((a) => a.track === 2)!;

describe("actorView", () => {
  it("with no look-around it is exactly the served driver preset", () => {
    const view = actorView(follower, { yaw: 0, pitch: 0 });
    expect(view.eye).toEqual(follower.camera.eye);
    expect(view.forward[0]).toBeCloseTo(follower.camera.forward[0], 12);
    expect(view.forward[1]).toBeCloseTo(follower.camera.forward[1], 12);
    expect(view.forward[2]).toBeCloseTo(follower.camera.forward[2], 12);
    expect(view.up).toEqual(follower.camera.up);
  });

  it("puts the leader in the follower's forward view", () => {
    const view = actorView(follower, { yaw: 0, pitch: 0 });
    const toLeader = [
      leader.x - view.eye[0],
      leader.y - view.eye[1],
      0.75 - view.eye[2],
    ];
    const ahead =
      toLeader[0]! * view.forward[0] +
      toLeader[1]! * view.forward[1] +
      toLeader[2]! * view.forward[2];
    expect(ahead).toBeGreaterThan(0);
    // and well inside the field of view: small angle off the gaze axis
    const dist = Math.hypot(toLeader[0]!, toLeader[1]!, toLeader[2]!);
    expect(ahead / dist).toBeGreaterThan(0.9);
  });

  it("look-around turns the gaze but never moves the eye (pause keeps pose)", () => {
    const straight = actorView(follower, { yaw: 0, pitch: 0 });
    const left = actorView(follower, { yaw: Math.PI / 2, pitch: 0 });
    expect(left.eye).toEqual(straight.eye);
    expect(left.forward[0]).toBeCloseTo(-straight.forward[1], 10);
    expect(left.forward[1]).toBeCloseTo(straight.forward[0], 10);
    // repeated calls with the same pose and offset are identical
    expect(actorView(follower, { yaw: Math.PI / 2, pitch: 0 })).toEqual(left);
  });

  it("pitch is clamped short of the poles and forward stays unit length", () => {
    const view = actorView(follower, { yaw: 0.4, pitch: 9 });
    const len = Math.hypot(...view.forward);
    expect(len).toBeCloseTo(1, 12);
    expect(Math.abs(view.forward[2])).toBeLessThan(1);
  });
});

describe("reconcileCamera", () => {
  it("keeps following while the actor is in the scene", () => {
    const mode: CameraMode = { kind: "actor-follow", track: 2 };
    expect(reconcileCamera(mode, poses)).toBe(mode);
  });

  it("exits to orbit when the followed actor leaves", () => {
    const mode: CameraMode = { kind: "actor-follow", track: 99 };
    expect(reconcileCamera(mode, poses)).toEqual({ kind: "orbit" });
  });

  it("leaves non-follow modes alone", () => {
    const orbit: CameraMode = { kind: "orbit" };
    expect(reconcileCamera(orbit, poses)).toBe(orbit);
  });
});

describe("OrbitRig", () => {
  it("looks at its target", () => {
    const rig = new OrbitRig();
    rig.target = [50, 10, 0];
    const view = rig.view();
    const toTarget = [50 - view.eye[0], 10 - view.eye[1], 0 - view.eye[2]];
    const dist = Math.hypot(...toTarget);
    const dot =
      (toTarget[0]! * view.forward[0] +
        toTarget[1]! * view.forward[1] +
        toTarget[2]! * view.forward[2]) /
      dist;
    expect(dot).toBeCloseTo(1, 10);
  });

  it("zoom clamps to sane bounds", () => {
    const rig = new OrbitRig();
    rig.zoomBy(1e-9);
    expect(rig.radius).toBeGreaterThanOrEqual(2);
    rig.zoomBy(1e9);
    expect(rig.radius).toBeLessThanOrEqual(2000);
  });
});

describe("topDownView", () => {
  it("looks straight down with north up", () => {
    const view = topDownView([30, 5], 80);
    expect(view.eye).toEqual([30, 5, 80]);
    expect(view.forward).toEqual([0, 0, -1]);
    expect(view.up).toEqual([0, 1, 0]);
  });
});
