// fetch-backed Transport over the /api endpoints.

import {
  ApiError,
  type FeatureCollection,
  type RouteRequest,
  type ScenarioSummary,
  type Transport,
} from "./types.js";

async function readJson(response: Response): Promise<unknown> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const code = (body as { error?: string }).error ?? "http_error";
    const detail = (body as { detail?: string }).detail;
    throw new ApiError(response.status, code, detail);
  }
  return body;
}

export function httpTransport(base = ""): Transport {
  return {
    async getScenarios(): Promise<ScenarioSummary[]> {
      const body = (await readJson(await fetch(`${base}/api/scenarios`))) as {
        scenarios: ScenarioSummary[];
      };
      return body.scenarios;
    },
    async getNetwork(): Promise<FeatureCollection> {
      return (await readJson(await fetch(`${base}/api/network`))) as FeatureCollection;
    },
    async getWeights(scenario: string): Promise<FeatureCollection> {
      return (await readJson(
        await fetch(`${base}/api/weights/${encodeURIComponent(scenario)}`),
      )) as FeatureCollection;
    },
    async postRoute(request: RouteRequest): Promise<FeatureCollection> {
      return (await readJson(
        await fetch(`${base}/api/route`, {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body: JSON.stringify(request),
        }),
      )) as FeatureCollection;
    },
  };
}
