import { nearestTimestamp } from "./state";
import type { Interval, TimelineDoc } from "./types";

const PAD = 8; // px inset on both sides of the plot area

/**
 * Timeline panel model: criticality values over time, interval highlight
 * bands, a cursor, and click-to-seek. Drawing goes through draw(); all the
 * coordinate math is exposed so it can be exercised headlessly.
 */
export class TimelinePanel {
  private timeline: TimelineDoc | null = null;
  private intervals: Interval[] = [];
  private timestamps: number[] = [];
  private span: [number, number] = [0, 1];
  cursor = 0;
  threshold = 0;

  setData(timeline: TimelineDoc, intervals: Interval[], timestamps: number[]): void {
    this.timeline = timeline;
    this.intervals = intervals;
    this.timestamps = timestamps;
    if (timestamps.length > 0) {
      this.span = [timestamps[0]!, Math.max(timestamps[timestamps.length - 1]!, timestamps[0]! + 1)];
    }
  }

  setIntervals(intervals: Interval[]): void {
    this.intervals = intervals;
  }

  timeAtX(xPx: number, widthPx: number): number {
    const inner = Math.max(1, widthPx - 2 * PAD);
    const frac = Math.min(1, Math.max(0, (xPx - PAD) / inner));
    return this.span[0] + frac * (this.span[1] - this.span[0]);
  }

  xAtTime(t: number, widthPx: number): number {
    const inner = Math.max(1, widthPx - 2 * PAD);
    const frac = (t - this.span[0]) / (this.span[1] - this.span[0]);
    return PAD + frac * inner;
  }

  /** Served timestamp a click at xPx seeks to; null before data arrives. */
  clickTarget(xPx: number, widthPx: number): number | null {
    if (this.timestamps.length === 0) return null;
    return nearestTimestamp(this.timestamps, this.timeAtX(xPx, widthPx));
  }

  /** Value under the pointer, snapped to the nearest served frame. */
  hoverValue(xPx: number, widthPx: number): { t: number; value: number } | null {
    if (!this.timeline || this.timestamps.length === 0) return null;
    const t = nearestTimestamp(this.timestamps, this.timeAtX(xPx, widthPx));
    const point = this.timeline.points.find(([pt]) => pt === t);
    return point ? { t, value: point[1] } : null;
  }

  /** Peak timestamps for the interval list; clicking one jumps there. */
  peaks(): { t: number; interval: Interval }[] {
    return this.intervals.map((interval) => ({ t: interval.peak_t, interval }));
  }

  draw(ctx: CanvasRenderingContext2D, width: number, height: number): void {
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#14161a";
    ctx.fillRect(0, 0, width, height);
    if (!this.timeline) return;

    const points = this.timeline.points;
    const values = points.map(([, v]) => v);
    const vMax = Math.max(1e-9, ...values, this.threshold * 1.05);
    const yOf = (v: number) => height - PAD - (v / vMax) * (height - 2 * PAD);

    ctx.fillStyle = "rgba(255, 150, 40, 0.18)";
    for (const interval of this.intervals) {
      const x0 = this.xAtTime(interval.t_start, width);
      const x1 = this.xAtTime(interval.t_end, width);
      ctx.fillRect(x0, PAD, Math.max(2, x1 - x0), height - 2 * PAD);
    }

    if (this.threshold > 0) {
      ctx.strokeStyle = "rgba(255, 150, 40, 0.7)";
      ctx.setLineDash([4, 4]);
      ctx.beginPath();
      ctx.moveTo(PAD, yOf(this.threshold));
      ctx.lineTo(width - PAD, yOf(this.threshold));
      ctx.stroke();
      ctx.setLineDash([]);
    }

    ctx.strokeStyle = "#6fc3ff";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    points.forEach(([t, v], i) => {
      const x = this.xAtTime(t, width);
      const y = yOf(v);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();

    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1;
    const cx = this.xAtTime(this.cursor, width);
    ctx.beginPath();
    ctx.moveTo(cx, 2);
    ctx.lineTo(cx, height - 2);
    ctx.stroke();
  }
}
