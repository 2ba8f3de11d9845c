/**
 * Playback stepping. Frames advance strictly through the served timestamp
 * list (never interpolated) at a real-time multiplier, honoring the actual
 * spacing between frames, which may be irregular.
 */

export interface StepResult {
  t: number; // new current timestamp (a list member)
  leftoverMs: number; // scenario-time budget not yet spent
  ended: boolean; // ran off the end of the list
}

export function advance(
  timestamps: number[],
  t: number,
  budgetMs: number,
  direction: 1 | -1,
): StepResult {
  let index = timestamps.indexOf(t);
  if (index < 0) throw new Error(`timestamp ${t} not in list`);
  let budget = budgetMs;
  for (;;) {
    const nextIndex = index + direction;
    if (nextIndex < 0 || nextIndex >= timestamps.length) {
      return { t: timestamps[index]!, leftoverMs: 0, ended: true };
    }
    const cost = Math.abs(timestamps[nextIndex]! - timestamps[index]!);
    if (cost > budget) return { t: timestamps[index]!, leftoverMs: budget, ended: false };
    budget -= cost;
    index = nextIndex;
  }
}

/** Wall-clock driver around advance(); the ticker owns the leftover budget. */
export class PlaybackTicker {
  private leftoverMs = 0;

  reset(): void {
    this.leftoverMs = 0;
  }

  tick(
    timestamps: number[],
    t: number,
    elapsedRealMs: number,
    speed: number,
    direction: 1 | -1,
  ): StepResult {
    const budget = this.leftoverMs + elapsedRealMs * speed;
    const result = advance(timestamps, t, budget, direction);
    this.leftoverMs = result.ended ? 0 : result.leftoverMs;
    return result;
  }
}
