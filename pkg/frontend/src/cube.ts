import * as THREE from "three";

import { buildDocumentGroup, documentBounds } from "./scene";
import type { CubeMeta, VisDocument } from "./types";

/**
 * Space-time cube overlay. The document is drawn exactly as served; the only
 * thing added client-side is a translucent "now" plane whose height follows
 * the current playback timestamp using the document's own time mapping.
 */
export class CubeOverlay {
  readonly group = new THREE.Group();
  private doc: VisDocument | null = null;
  private plane: THREE.Mesh | null = null;

  constructor() {
    this.group.name = "cube-overlay";
  }

  get meta(): CubeMeta | null {
    return this.doc ? (this.doc.meta as unknown as CubeMeta) : null;
  }

  get shown(): boolean {
    return this.doc !== null;
  }

  setDocument(doc: VisDocument | null): void {
    this.group.clear();
    this.plane = null;
    this.doc = doc;
    if (!doc) return;

    this.group.add(buildDocumentGroup(doc));

    const bounds = documentBounds(doc);
    if (bounds) {
      const margin = 4;
      const sizeX = bounds.max[0] - bounds.min[0] + 2 * margin;
      const sizeY = bounds.max[1] - bounds.min[1] + 2 * margin;
      const plane = new THREE.Mesh(
        new THREE.PlaneGeometry(Math.max(1, sizeX), Math.max(1, sizeY)),
        new THREE.MeshBasicMaterial({
          color: 0xdddddd,
          transparent: true,
          opacity: 0.15,
          side: THREE.DoubleSide,
          depthWrite: false,
        }),
      );
      plane.name = "now-plane";
      plane.position.set(
        (bounds.min[0] + bounds.max[0]) / 2,
        (bounds.min[1] + bounds.max[1]) / 2,
        0,
      );
      this.plane = plane;
      this.group.add(plane);
    }
  }

  /** Height of the now plane for timestamp t, in document coordinates. */
  nowZ(t: number): number {
    const meta = this.meta;
    if (!meta) return 0;
    const clamped = Math.min(meta.t1, Math.max(meta.t0, t));
    return ((clamped - meta.t0) * meta.time_scale) / 1000;
  }

  setNow(t: number): void {
    if (this.plane) this.plane.position.z = this.nowZ(t);
  }
}
