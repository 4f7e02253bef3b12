// Shapes of the /api documents this client consumes. The UI never computes
// weights or routes itself; everything displayed comes from these responses.

export type Layer = "events" | "traffic" | "weather";
export type LengthModeName = "raw" | "normalized";
export type LatLon = [number, number];

export interface DimensionRange {
  min: number | null;
  max: number | null;
}

export interface ScenarioSummary {
  name: string;
  recorded_at: string;
  station_counts: { weather: number; traffic: number };
  event_count: number;
  dimensions: Record<string, DimensionRange>;
  weather_spread: number | null;
  data_incomplete_segments: number;
}

export interface LineStringFeature {
  type: "Feature";
  geometry: { type: "LineString"; coordinates: [number, number][] }; // (lon, lat)
  properties: Record<string, unknown>;
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: LineStringFeature[];
}

export interface WeightProperties {
  id: string;
  length: number;
  traffic: number;
  weather: number;
  events: number;
  data_incomplete: boolean;
}

export interface RouteProperties {
  nodes: string[];
  segments: string[];
  total_cost: number;
  total_length_m: number;
  breakdown: Record<string, number>;
  start_snap_m: number;
  end_snap_m: number;
  data_incomplete_segments: number;
}

export interface RouteRequest {
  scenario: string;
  from: LatLon;
  to: LatLon;
  profile: string | { ratings: string[] } | { vector: number[] };
  length_mode: LengthModeName;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message?: string,
  ) {
    super(message ?? `${code} (${status})`);
  }
}

export interface Transport {
  getScenarios(): Promise<ScenarioSummary[]>;
  getNetwork(): Promise<FeatureCollection>;
  getWeights(scenario: string): Promise<FeatureCollection>;
  postRoute(request: RouteRequest): Promise<FeatureCollection>;
}
