import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export interface StubOptions {
  /** Per-path-prefix delay gates: the response resolves when the gate does. */
  holds?: Map<string, Promise<void>>;
  /** Paths (substring match) that should fail with this status. */
  failures?: Map<string, number>;
}

export interface ServiceStub {
  fetchFn: FetchLike;
  /** Every URL requested, in order. */
  requests: string[];
  /** Deep copies of every body served, keyed by request URL. */
  served: Map<string, unknown>;
}

const GRAPH_THRESHOLDS = ["0.1", "0.5", "0.8", "10.0"];

function graphFixtureFor(threshold: string): unknown {
  // serve the canned document whose threshold is nearest the request
  const want = Number(threshold);
  let best = GRAPH_THRESHOLDS[0]!;
  for (const have of GRAPH_THRESHOLDS) {
    if (Math.abs(Number(have) - want) < Math.abs(Number(best) - want)) best = have;
  }
  return fixture(`graph_5900_t${best}.json`);
}

function route(url: URL): unknown {
  const path = url.pathname;
  if (path === "/api/scenarios") return fixture("scenarios.json");
  if (path === "/api/scenarios/approach") return fixture("scenario.json");
  if (path === "/api/scenarios/approach/map") return fixture("map.json");
  if (path === "/api/scenarios/approach/timeline") return fixture("timeline_inv_ttc.json");
  if (path === "/api/scenarios/approach/intervals") {
    const doc = fixture<{ threshold: number }>("intervals_inv_ttc_0.3.json");
    doc.threshold = Number(url.searchParams.get("threshold"));
    return doc;
  }
  const graph = path.match(/^\/api\/scenarios\/approach\/frames\/(\d+)\/graph$/);
  if (graph) {
    const doc = graphFixtureFor(url.searchParams.get("threshold") ?? "0") as {
      document: { meta: { t: number } };
      graph: { t: number };
    };
    doc.document.meta.t = Number(graph[1]);
    doc.graph.t = Number(graph[1]);
    return doc;
  }
  const poses = path.match(/^\/api\/scenarios\/approach\/frames\/(\d+)\/poses$/);
  if (poses) {
    const doc = fixture<{ t: number }>("poses_5900.json");
    doc.t = Number(poses[1]);
    return doc;
  }
  if (path === "/api/scenarios/approach/cube") return fixture("cube_0_5900_s5.json");
  return null;
}

/**
 * Fake service backed by the committed fixture files. Records every request
 * and a deep copy of every body it returns, so tests can prove that whatever
 * ends up on screen came from a served response.
 */
export function serviceStub(options: StubOptions = {}): ServiceStub {
  const requests: string[] = [];
  const served = new Map<string, unknown>();

  const fetchFn: FetchLike = async (rawUrl: string) => {
    requests.push(rawUrl);
    const url = new URL(rawUrl);

    for (const [needle, status] of options.failures ?? []) {
      if (rawUrl.includes(needle)) {
        return Response.json({ detail: `stubbed failure for ${needle}` }, { status });
      }
    }
    for (const [needle, gate] of options.holds ?? []) {
      if (rawUrl.includes(needle)) await gate;
    }

    const body = route(url);
    if (body === null) {
      return Response.json({ detail: `no stub route for ${url.pathname}` }, { status: 404 });
    }
    served.set(rawUrl, structuredClone(body));
    return Response.json(body);
  };

  return { fetchFn, requests, served };
}

/** Let queued fetch continuations run. */
export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
