import { describe, expect, it } from "vitest";

import { TimelinePanel } from "../src/timeline";
import type { Interval, IntervalsDoc, ScenarioDetail, TimelineDoc } from "../src/types";
import { fixture } from "./helpers";

const timeline = fixture<TimelineDoc>("timeline_inv_ttc.json");
const intervals = fixture<IntervalsDoc>("intervals_inv_ttc_0.3.json").intervals;
const detail = fixture<ScenarioDetail>("scenario.json");

function panel(): TimelinePanel {
  const p = new TimelinePanel();
  p.setData(timeline, intervals, detail.timestamps);
  return p;
}

const WIDTH = 800;

describe("TimelinePanel", () => {
  it("click targets are always served timestamps", () => {
    const p = panel();
    for (const x of [0, 57, 211, 400, 633, 799, 800]) {
      const target = p.clickTarget(x, WIDTH);
      expect(detail.timestamps).toContain(target);
    }
  });

  it("clicking maps pixel position to the nearest frame", () => {
    const p = panel();
    // far left is the first frame, far right the last
    expect(p.clickTarget(0, WIDTH)).toBe(detail.timestamps[0]);
    expect(p.clickTarget(WIDTH, WIDTH)).toBe(detail.timestamps[detail.timestamps.length - 1]);
    // the middle of the plot is the middle of the recording
    const mid = p.clickTarget(WIDTH / 2, WIDTH)!;
    expect(Math.abs(mid - 2950)).toBeLessThanOrEqual(50);
  });

  it("x/time mapping round-trips", () => {
    const p = panel();
    for (const t of [0, 1700, 5900]) {
      expect(p.timeAtX(p.xAtTime(t, WIDTH), WIDTH)).toBeCloseTo(t, 6);
    }
  });

  it("clicking an interval peak seeks exactly to the peak frame", () => {
    const p = panel();
    const interval: Interval = intervals[0]!;
    const x = p.xAtTime(interval.peak_t, WIDTH);
    expect(p.clickTarget(x, WIDTH)).toBe(interval.peak_t);
    expect(p.peaks().map((peak) => peak.t)).toEqual([interval.peak_t]);
  });

  it("hover reports the served value at the nearest frame", () => {
    const p = panel();
    const x = p.xAtTime(3000, WIDTH);
    const hover = p.hoverValue(x, WIDTH)!;
    expect(hover.t).toBe(3000);
    const served = timeline.points.find(([t]) => t === 3000)!;
    expect(hover.value).toBe(served[1]);
  });

  it("returns nothing before data arrives", () => {
    const empty = new TimelinePanel();
    expect(empty.clickTarget(100, WIDTH)).toBeNull();
    expect(empty.hoverValue(100, WIDTH)).toBeNull();
  });
});
