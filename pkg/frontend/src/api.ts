import type {
  FrameGraphDoc,
  FramePoses,
  IntervalsDoc,
  LaneMapDoc,
  ScenarioDetail,
  ScenarioSummary,
  TimelineDoc,
  VisDocument,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    readonly url: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string) => Promise<Response>;

/**
 * Typed client for the scenecrit service. All data on screen comes through
 * here; the fetch function is injectable so tests can record every request
 * and prove the viewer draws only what the server sent.
 */
export class ApiClient {
  constructor(
    readonly base: string,
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string, params?: Record<string, string | number>): Promise<T> {
    let url = `${this.base}${path}`;
    if (params) {
      const search = new URLSearchParams();
      for (const [key, value] of Object.entries(params)) search.set(key, String(value));
      url += `?${search.toString()}`;
    }
    const res = await this.fetchFn(url);
    if (!res.ok) {
      const body = await res.json().catch(() => ({ detail: res.statusText }));
      throw new ApiError(res.status, body.detail ?? res.statusText, url);
    }
    return res.json() as Promise<T>;
  }

  scenarios(): Promise<ScenarioSummary[]> {
    return this.get("/api/scenarios");
  }

  scenario(id: string): Promise<ScenarioDetail> {
    return this.get(`/api/scenarios/${encodeURIComponent(id)}`);
  }

  laneMap(id: string): Promise<LaneMapDoc> {
    return this.get(`/api/scenarios/${encodeURIComponent(id)}/map`);
  }

  timeline(id: string, measure: string): Promise<TimelineDoc> {
    return this.get(`/api/scenarios/${encodeURIComponent(id)}/timeline`, { measure });
  }

  intervals(
    id: string,
    measure: string,
    threshold: number,
    minGap?: number,
  ): Promise<IntervalsDoc> {
    const params: Record<string, string | number> = { measure, threshold };
    if (minGap !== undefined) params.min_gap = minGap;
    return this.get(`/api/scenarios/${encodeURIComponent(id)}/intervals`, params);
  }

  frameGraph(
    id: string,
    t: number,
    measure: string,
    threshold: number,
  ): Promise<FrameGraphDoc> {
    return this.get(`/api/scenarios/${encodeURIComponent(id)}/frames/${t}/graph`, {
      measure,
      threshold,
    });
  }

  cube(id: string, t0: number, t1: number, stride: number): Promise<VisDocument> {
    return this.get(`/api/scenarios/${encodeURIComponent(id)}/cube`, {
      from: t0,
      to: t1,
      stride,
    });
  }

  poses(id: string, t: number): Promise<FramePoses> {
    return this.get(`/api/scenarios/${encodeURIComponent(id)}/frames/${t}/poses`);
  }
}
