import * as THREE from "three";

import type { LaneMapDoc, Primitive, Rgba, Vec3, VisDocument } from "./types";

// World axes follow the data: x/y is the ground plane, z is up.

function applyColor(
  material: THREE.MeshLambertMaterial | THREE.LineBasicMaterial | THREE.MeshBasicMaterial,
  color: Rgba,
): void {
  material.color.setRGB(color[0], color[1], color[2]);
  if (color[3] < 1) {
    material.transparent = true;
    material.opacity = color[3];
  }
}

function toVector3(p: Vec3): THREE.Vector3 {
  return new THREE.Vector3(p[0], p[1], p[2]);
}

/**
 * One Object3D per served primitive, geometry and color exactly as given.
 * The original primitive rides along in userData so a scene object is always
 * traceable back to the response body it came from.
 */
export function buildPrimitive(prim: Primitive): THREE.Object3D {
  let object: THREE.Object3D;
  switch (prim.type) {
    case "box": {
      const geometry = new THREE.BoxGeometry(prim.extent[0], prim.extent[1], prim.extent[2]);
      const material = new THREE.MeshLambertMaterial();
      applyColor(material, prim.color);
      const mesh = new THREE.Mesh(geometry, material);
      mesh.position.copy(toVector3(prim.center));
      mesh.rotation.z = prim.yaw;
      object = mesh;
      break;
    }
    case "sphere": {
      const geometry = new THREE.SphereGeometry(prim.radius, 24, 16);
      const material = new THREE.MeshLambertMaterial();
      applyColor(material, prim.color);
      const mesh = new THREE.Mesh(geometry, material);
      mesh.position.copy(toVector3(prim.center));
      object = mesh;
      break;
    }
    case "segment": {
      const geometry = new THREE.BufferGeometry().setFromPoints([
        toVector3(prim.a),
        toVector3(prim.b),
      ]);
      const material = new THREE.LineBasicMaterial();
      applyColor(material, prim.color);
      object = new THREE.Line(geometry, material);
      break;
    }
    case "polyline": {
      const geometry = new THREE.BufferGeometry().setFromPoints(
        prim.points.map(toVector3),
      );
      const material = new THREE.LineBasicMaterial();
      applyColor(material, prim.color);
      object = new THREE.Line(geometry, material);
      break;
    }
  }
  object.userData.primitive = prim;
  return object;
}

export function buildDocumentGroup(doc: VisDocument): THREE.Group {
  const group = new THREE.Group();
  group.name = doc.kind;
  for (const prim of doc.primitives) group.add(buildPrimitive(prim));
  return group;
}

export function primitivesOfType(group: THREE.Group, type: Primitive["type"]): THREE.Object3D[] {
  return group.children.filter(
    (child) => (child.userData.primitive as Primitive | undefined)?.type === type,
  );
}

const ROAD_COLOR = new THREE.Color(0.17, 0.18, 0.2);
const CENTERLINE_COLOR = new THREE.Color(0.45, 0.47, 0.5);

/** Flat ribbon per lane plus its centerline, drawn slightly under the actors. */
export function buildLaneGroup(map: LaneMapDoc): THREE.Group {
  const group = new THREE.Group();
  group.name = "lanes";
  for (const lane of map.lanes) {
    const line = lane.centerline;
    if (line.length < 2) continue;

    const half = lane.width / 2;
    const positions: number[] = [];
    for (let i = 0; i < line.length; i++) {
      // vertex normal = mean of adjacent segment normals
      const prev = line[Math.max(0, i - 1)]!;
      const next = line[Math.min(line.length - 1, i + 1)]!;
      const dx = next[0] - prev[0];
      const dy = next[1] - prev[1];
      const len = Math.hypot(dx, dy) || 1;
      const nx = -dy / len;
      const ny = dx / len;
      const [x, y] = line[i]!;
      positions.push(x + nx * half, y + ny * half, -0.02);
      positions.push(x - nx * half, y - ny * half, -0.02);
    }
    const indices: number[] = [];
    for (let i = 0; i + 1 < line.length; i++) {
      const a = 2 * i;
      indices.push(a, a + 1, a + 2, a + 1, a + 3, a + 2);
    }
    const ribbon = new THREE.BufferGeometry();
    ribbon.setAttribute("position", new THREE.Float32BufferAttribute(positions, 3));
    ribbon.setIndex(indices);
    ribbon.computeVertexNormals();
    const roadMesh = new THREE.Mesh(
      ribbon,
      new THREE.MeshLambertMaterial({ color: ROAD_COLOR, side: THREE.DoubleSide }),
    );
    roadMesh.userData.lane = lane.lane_id;
    group.add(roadMesh);

    const center = new THREE.BufferGeometry().setFromPoints(
      line.map(([x, y]) => new THREE.Vector3(x, y, 0.01)),
    );
    const centerLine = new THREE.Line(
      center,
      new THREE.LineBasicMaterial({ color: CENTERLINE_COLOR }),
    );
    centerLine.userData.lane = lane.lane_id;
    group.add(centerLine);
  }
  return group;
}

export interface Bounds {
  min: Vec3;
  max: Vec3;
}

export function documentBounds(doc: VisDocument): Bounds | null {
  let bounds: Bounds | null = null;
  const grow = (p: Vec3) => {
    if (!bounds) {
      bounds = { min: [...p], max: [...p] };
      return;
    }
    for (let axis = 0; axis < 3; axis++) {
      bounds.min[axis] = Math.min(bounds.min[axis]!, p[axis]!);
      bounds.max[axis] = Math.max(bounds.max[axis]!, p[axis]!);
    }
  };
  for (const prim of doc.primitives) {
    switch (prim.type) {
      case "box":
      case "sphere":
        grow(prim.center);
        break;
      case "segment":
        grow(prim.a);
        grow(prim.b);
        break;
      case "polyline":
        for (const p of prim.points) grow(p);
        break;
    }
  }
  return bounds;
}

export function laneBounds(map: LaneMapDoc): Bounds | null {
  let bounds: Bounds | null = null;
  for (const lane of map.lanes) {
    for (const [x, y] of lane.centerline) {
      if (!bounds) bounds = { min: [x, y, 0], max: [x, y, 0] };
      else {
        bounds.min[0] = Math.min(bounds.min[0], x);
        bounds.min[1] = Math.min(bounds.min[1], y);
        bounds.max[0] = Math.max(bounds.max[0], x);
        bounds.max[1] = Math.max(bounds.max[1], y);
      }
    }
  }
  return bounds;
}
