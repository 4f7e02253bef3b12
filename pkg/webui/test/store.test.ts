import { beforeEach, describe, expect, it } from "vitest";

import { UiStore } from "../src/store.js";
import {
  ApiError,
  type FeatureCollection,
  type RouteRequest,
  type ScenarioSummary,
  type Transport,
} from "../src/types.js";

const NETWORK: FeatureCollection = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      geometry: {
        type: "LineString",
        coordinates: [
          [25.5, 65.0],
          [25.5, 64.97],
        ],
      },
      properties: { id: "s1" },
    },
    {
      type: "Feature",
      geometry: {
        type: "LineString",
        coordinates: [
          [25.5, 64.97],
          [25.5, 64.94],
        ],
      },
      properties: { id: "s2" },
    },
  ],
};

function weightsDoc(weather = 0.8): FeatureCollection {
  return {
    type: "FeatureCollection",
    features: NETWORK.features.map((f, i) => ({
      ...f,
      properties: {
        id: `s${i + 1}`,
        length: 3.3,
        traffic: 0.1 * (i + 1),
        weather,
        events: i === 0 ? 1.0 : 0.0,
        data_incomplete: false,
      },
    })),
  };
}

function routeDoc(tag: string): FeatureCollection {
  return {
    type: "FeatureCollection",
    features: [
      {
        type: "Feature",
        geometry: {
          type: "LineString",
          coordinates: [
            [25.5, 65.0],
            [25.5, 64.97],
            [25.5, 64.94],
          ],
        },
        properties: {
          nodes: ["origin", "mid", "target"],
          segments: ["s1", "s2"],
          total_cost: 1.25,
          total_length_m: 6672.0,
          breakdown: { length: 6.6, traffic: 0.3, weather: 1.6, events: 1.0 },
          start_snap_m: 0,
          end_snap_m: 0,
          data_incomplete_segments: 0,
          tag,
        },
      },
    ],
  };
}

const SUMMARIES: ScenarioSummary[] = [
  {
    name: "base",
    recorded_at: "2024-08-20T12:00:00Z",
    station_counts: { weather: 3, traffic: 1 },
    event_count: 3,
    dimensions: {},
    weather_spread: 0.1,
    data_incomplete_segments: 0,
  },
];

class FakeTransport implements Transport {
  scenarioCalls = 0;
  networkCalls = 0;
  weightsCalls = 0;
  routeCalls = 0;
  routeRequests: RouteRequest[] = [];
  failWeightsWith404 = false;
  failRouteWithNoRoute = false;
  pendingRouteResolvers: ((doc: FeatureCollection) => void)[] = [];
  deferRoutes = false;

  async getScenarios() {
    this.scenarioCalls++;
    return SUMMARIES;
  }

  async getNetwork() {
    this.networkCalls++;
    return NETWORK;
  }

  async getWeights(scenario: string) {
    this.weightsCalls++;
    if (this.failWeightsWith404) throw new ApiError(404, "unknown_scenario", scenario);
    return weightsDoc();
  }

  postRoute(request: RouteRequest): Promise<FeatureCollection> {
    this.routeCalls++;
    this.routeRequests.push(request);
    if (this.failRouteWithNoRoute) {
      return Promise.reject(new ApiError(422, "no_route"));
    }
    if (this.deferRoutes) {
      return new Promise((resolve) => this.pendingRouteResolvers.push(resolve));
    }
    return Promise.resolve(routeDoc(`call-${this.routeCalls}`));
  }
}

describe("presets", () => {
  let transport: FakeTransport;
  let store: UiStore;

  beforeEach(async () => {
    transport = new FakeTransport();
    store = new UiStore(transport);
    await store.init();
  });

  it("tuire produces exactly its reference vector", async () => {
    await store.applyPreset("tuire");
    expect(store.preference()).toEqual([0.03125, 0.03125, 0.46875, 0.46875]);
  });

  it("teemu produces exactly its reference vector", async () => {
    await store.applyPreset("teemu");
    expect(store.preference()).toEqual([0.03125, 0.46875, 0.03125, 0.46875]);
  });

  it("tapio matches its reference vector to 1e-9", async () => {
    await store.applyPreset("tapio");
    const expected = [0.576923077, 0.192307692, 0.038461538, 0.192307692];
    store.preference().forEach((got, i) => {
      expect(Math.abs(got - expected[i]!)).toBeLessThan(1e-9);
    });
  });

  it("unknown preset shows a banner instead of crashing", async () => {
    await store.applyPreset("nobody");
    expect(store.state.banner).toContain("nobody");
  });
});

describe("slider preview", () => {
  it("always sums to 1", async () => {
    const store = new UiStore(new FakeTransport());
    await store.init();
    store.setSliderMode("continuous");
    for (const values of [
      [0.3, 0.3, 0.3, 0.3],
      [0.01, 0.99, 0.5, 0.12],
      [1, 0, 0, 0],
    ] as const) {
      for (let i = 0; i < 4; i++) await store.setSlider(i as 0 | 1 | 2 | 3, values[i]!);
      const sum = store.preference().reduce((a, b) => a + b, 0);
      expect(Math.abs(sum - 1)).toBeLessThan(1e-12);
    }
  });

  it("ratings mode snaps slider values to the four levels", async () => {
    const store = new UiStore(new FakeTransport());
    await store.init();
    await store.setSlider(0, 0.68); // nearest level: very (0.75)
    expect(store.state.sliders[0]).toBe(0.75);
    await store.setSlider(1, 0.1); // nearest level: unimportant (0.05)
    expect(store.state.sliders[1]).toBe(0.05);
  });
});

describe("route requests", () => {
  let transport: FakeTransport;
  let store: UiStore;

  beforeEach(async () => {
    transport = new FakeTransport();
    store = new UiStore(transport);
    await store.init();
  });

  it("no request until both endpoints are picked", async () => {
    expect(transport.routeCalls).toBe(0);
    await store.setOrigin([65.0, 25.5]);
    expect(transport.routeCalls).toBe(0);
    expect(store.state.route).toBeNull();
    await store.setDestination([64.94, 25.5]);
    expect(transport.routeCalls).toBe(1);
    expect(store.state.route).not.toBeNull();
  });

  it("a slider change triggers exactly one new route call", async () => {
    await store.setOrigin([65.0, 25.5]);
    await store.setDestination([64.94, 25.5]);
    const before = transport.routeCalls;
    await store.setSlider(2, 0.75);
    expect(transport.routeCalls).toBe(before + 1);
  });

  it("the stored geometry is the backend response, unmodified", async () => {
    await store.setOrigin([65.0, 25.5]);
    await store.setDestination([64.94, 25.5]);
    const expected = routeDoc(`call-${transport.routeCalls}`);
    expect(store.state.route?.features[0]?.geometry).toEqual(
      expected.features[0]?.geometry,
    );
  });

  it("latest request wins when responses arrive out of order", async () => {
    transport.deferRoutes = true;
    await store.setOrigin([65.0, 25.5]);
    const first = store.setDestination([64.94, 25.5]); // request 1
    const second = store.setSlider(0, 0.75); // request 2 supersedes
    expect(transport.pendingRouteResolvers.length).toBe(2);
    // resolve in reverse order: 2 then 1
    transport.pendingRouteResolvers[1]!(routeDoc("second"));
    transport.pendingRouteResolvers[0]!(routeDoc("first"));
    await Promise.all([first, second]);
    expect(
      (store.state.route?.features[0]?.properties as { tag?: string }).tag,
    ).toBe("second");
  });

  it("no_route keeps the previous overlay and shows a banner", async () => {
    await store.setOrigin([65.0, 25.5]);
    await store.setDestination([64.94, 25.5]);
    const previous = store.state.route;
    expect(previous).not.toBeNull();
    transport.failRouteWithNoRoute = true;
    await store.setSlider(1, 0.75);
    expect(store.state.route).toBe(previous);
    expect(store.state.banner).toContain("No route");
  });

  it("sends the normalized preview as the profile vector", async () => {
    await store.applyPreset("tuire");
    await store.setOrigin([65.0, 25.5]);
    await store.setDestination([64.94, 25.5]);
    const last = transport.routeRequests.at(-1)!;
    expect(last.profile).toEqual({ vector: [0.03125, 0.03125, 0.46875, 0.46875] });
    expect(last.length_mode).toBe("raw");
  });

  it("swapping endpoints issues exactly one new request with reversed points", async () => {
    await store.setOrigin([65.0, 25.5]);
    await store.setDestination([64.94, 25.5]);
    const before = transport.routeCalls;
    await store.swapEndpoints();
    expect(transport.routeCalls).toBe(before + 1);
    const last = transport.routeRequests.at(-1)!;
    expect(last.from).toEqual([64.94, 25.5]);
    expect(last.to).toEqual([65.0, 25.5]);
  });
});

describe("layers and scenarios", () => {
  let transport: FakeTransport;
  let store: UiStore;

  beforeEach(async () => {
    transport = new FakeTransport();
    store = new UiStore(transport);
    await store.init();
  });

  it("layer switch recolors without any refetch", () => {
    const before = {
      network: transport.networkCalls,
      weights: transport.weightsCalls,
      routes: transport.routeCalls,
    };
    const weatherColors = store.segmentColors();
    store.setLayer("events");
    const eventColors = store.segmentColors();
    expect(transport.networkCalls).toBe(before.network);
    expect(transport.weightsCalls).toBe(before.weights);
    expect(transport.routeCalls).toBe(before.routes);
    // s1 has events=1.0 vs weather=0.8: the color actually changes
    expect(eventColors.get("s1")).not.toBe(weatherColors.get("s1"));
  });

  it("colors come from the fixed ramp over the active layer", () => {
    store.setLayer("events");
    const colors = store.segmentColors();
    expect(colors.get("s1")).toBe("rgb(215,25,28)"); // events = 1.0
    expect(colors.get("s2")).toBe("rgb(42,123,182)"); // events = 0.0
  });

  it("uniform weights paint a single color", () => {
    store.setLayer("weather"); // fake weights carry identical weather everywhere
    const colors = store.segmentColors();
    expect(new Set(colors.values()).size).toBe(1);
  });

  it("unknown scenario shows a banner and keeps state", async () => {
    const weightsBefore = store.state.weights;
    transport.failWeightsWith404 = true;
    await store.selectScenario("blizzard");
    expect(store.state.banner).toContain("blizzard");
    expect(store.state.scenario).toBe("base");
    expect(store.state.weights).toBe(weightsBefore);
  });

  it("network is fetched exactly once at init", () => {
    expect(transport.networkCalls).toBe(1);
  });
});
