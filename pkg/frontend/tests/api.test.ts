import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { apiBase } from "../src/config";
import type { ScenarioSummary, TimelineDoc } from "../src/types";
import { serviceStub } from "./helpers";

const BASE = "http://stub.test";

describe("ApiClient", () => {
  it("lists scenarios from /api/scenarios", async () => {
    const stub = serviceStub();
    const api = new ApiClient(BASE, stub.fetchFn);
    const list: ScenarioSummary[] = await api.scenarios();
    expect(stub.requests).toEqual([`${BASE}/api/scenarios`]);
    expect(list).toHaveLength(1);
    expect(list[0]!.id).toBe("approach");
    expect(list[0]!.measures).toContain("inv_ttc");
  });

  it("passes measure and threshold through as query parameters", async () => {
    const stub = serviceStub();
    const api = new ApiClient(BASE, stub.fetchFn);
    await api.timeline("approach", "inv_ttc");
    await api.intervals("approach", "inv_ttc", 0.3, 5);
    await api.frameGraph("approach", 5900, "inv_ttc", 0.1);
    await api.cube("approach", 0, 5900, 5);
    expect(stub.requests[0]).toContain("/timeline?measure=inv_ttc");
    expect(stub.requests[1]).toContain("threshold=0.3");
    expect(stub.requests[1]).toContain("min_gap=5");
    expect(stub.requests[2]).toContain("/frames/5900/graph?");
    expect(stub.requests[2]).toContain("threshold=0.1");
    expect(stub.requests[3]).toContain("from=0");
    expect(stub.requests[3]).toContain("to=5900");
    expect(stub.requests[3]).toContain("stride=5");
  });

  it("returns the body exactly as served", async () => {
    const stub = serviceStub();
    const api = new ApiClient(BASE, stub.fetchFn);
    const timeline: TimelineDoc = await api.timeline("approach", "inv_ttc");
    expect(timeline).toEqual(stub.served.get(stub.requests[0]!));
  });

  it("raises ApiError with status and server detail on non-2xx", async () => {
    const stub = serviceStub({ failures: new Map([["/timeline", 422]]) });
    const api = new ApiClient(BASE, stub.fetchFn);
    const error = await api.timeline("approach", "inv_ttc").catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(422);
    expect((error as ApiError).message).toContain("stubbed failure");
  });

  it("404s from unknown scenarios propagate", async () => {
    const stub = serviceStub();
    const api = new ApiClient(BASE, stub.fetchFn);
    const error = await api.scenario("missing").catch((e: unknown) => e);
    expect((error as ApiError).status).toBe(404);
  });
});

describe("apiBase", () => {
  it("prefers the ?api= query override and strips trailing slashes", () => {
    expect(apiBase("?api=http://10.0.0.5:9000/")).toBe("http://10.0.0.5:9000");
  });

  it("falls back to the default service address", () => {
    expect(apiBase("")).toBe("http://127.0.0.1:8099");
  });
});
