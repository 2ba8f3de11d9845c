/**
 * Last-write-wins gate for async fetches. Responses apply only when they
 * belong to the newest request issued on their channel, so a slow older
 * fetch can never clobber the state a newer one already produced.
 */
export class LatestWins {
  private counters = new Map<string, number>();

  issue(channel: string): number {
    const next = (this.counters.get(channel) ?? 0) + 1;
    this.counters.set(channel, next);
    return next;
  }

  isCurrent(channel: string, seq: number): boolean {
    return this.counters.get(channel) === seq;
  }
}
