// Application state machine, independent of the DOM. The renderer subscribes
// and draws whatever is here; every number on screen originates from an API
// response held in this state.

import { PRESETS, RATING_VALUES, normalize, snapToRating, type RatingName } from "./presets.js";
import { rampColor } from "./color.js";
import {
  ApiError,
  type FeatureCollection,
  type LatLon,
  type Layer,
  type LengthModeName,
  type ScenarioSummary,
  type Transport,
  type WeightProperties,
} from "./types.js";

export type SliderMode = "ratings" | "continuous";

export interface UiState {
  scenarios: ScenarioSummary[];
  scenario: string | null;
  network: FeatureCollection | null;
  weights: FeatureCollection | null;
  layer: Layer;
  origin: LatLon | null;
  destination: LatLon | null;
  sliderMode: SliderMode;
  sliders: [number, number, number, number]; // raw values, order: length, traffic, weather, events
  lengthMode: LengthModeName;
  route: FeatureCollection | null;
  banner: string | null;
  routePending: boolean;
}

type Listener = (state: UiState) => void;

export class UiStore {
  state: UiState = {
    scenarios: [],
    scenario: null,
    network: null,
    weights: null,
    layer: "weather",
    origin: null,
    destination: null,
    sliderMode: "ratings",
    sliders: [
      RATING_VALUES.important,
      RATING_VALUES.important,
      RATING_VALUES.important,
      RATING_VALUES.important,
    ],
    lengthMode: "raw",
    route: null,
    banner: null,
    routePending: false,
  };

  private listeners: Listener[] = [];
  private routeToken = 0;

  constructor(private transport: Transport) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  /** Normalized preference preview; always sums to 1. */
  preference(): [number, number, number, number] {
    return normalize(this.state.sliders) as [number, number, number, number];
  }

  /** Per-segment colors for the active layer, from the cached weight map. */
  segmentColors(): Map<string, string> {
    const colors = new Map<string, string>();
    if (!this.state.weights) return colors;
    for (const feature of this.state.weights.features) {
      const props = feature.properties as unknown as WeightProperties;
      colors.set(props.id, rampColor(props[this.state.layer]));
    }
    return colors;
  }

  async init(): Promise<void> {
    this.state.network = await this.transport.getNetwork();
    this.state.scenarios = await this.transport.getScenarios();
    this.emit();
    const first = this.state.scenarios[0];
    if (first) await this.selectScenario(first.name);
  }

  async selectScenario(name: string): Promise<void> {
    try {
      const weights = await this.transport.getWeights(name);
      this.state.scenario = name;
      this.state.weights = weights;
      this.state.banner = null;
      this.emit();
      await this.maybeRequestRoute();
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.state.banner = `Unknown scenario: ${name}`;
        this.emit();
        return;
      }
      throw error;
    }
  }

  /** Recolors only; the cached network and weights stay untouched. */
  setLayer(layer: Layer): void {
    this.state.layer = layer;
    this.emit();
  }

  setLengthMode(mode: LengthModeName): Promise<void> {
    this.state.lengthMode = mode;
    this.emit();
    return this.maybeRequestRoute();
  }

  setOrigin(point: LatLon): Promise<void> {
    this.state.origin = point;
    this.emit();
    return this.maybeRequestRoute();
  }

  setDestination(point: LatLon): Promise<void> {
    this.state.destination = point;
    this.emit();
    return this.maybeRequestRoute();
  }

  swapEndpoints(): Promise<void> {
    const { origin, destination } = this.state;
    this.state.origin = destination;
    this.state.destination = origin;
    this.emit();
    return this.maybeRequestRoute();
  }

  setSliderMode(mode: SliderMode): void {
    if (mode === "ratings") {
      this.state.sliders = this.state.sliders.map(
        (v) => RATING_VALUES[snapToRating(v)],
      ) as UiState["sliders"];
    }
    this.state.sliderMode = mode;
    this.emit();
  }

  /** One slider moved; in ratings mode the value snaps to the nearest level. */
  setSlider(index: 0 | 1 | 2 | 3, value: number): Promise<void> {
    const next = [...this.state.sliders] as UiState["sliders"];
    next[index] = this.state.sliderMode === "ratings" ? RATING_VALUES[snapToRating(value)] : value;
    this.state.sliders = next;
    this.emit();
    return this.maybeRequestRoute();
  }

  setRating(index: 0 | 1 | 2 | 3, rating: RatingName): Promise<void> {
    const next = [...this.state.sliders] as UiState["sliders"];
    next[index] = RATING_VALUES[rating];
    this.state.sliders = next;
    this.emit();
    return this.maybeRequestRoute();
  }

  /** Set the sliders to a shipped preset; the preview then equals its vector. */
  applyPreset(name: string): Promise<void> {
    const ratings = PRESETS[name];
    if (!ratings) {
      this.state.banner = `Unknown preset: ${name}`;
      this.emit();
      return Promise.resolve();
    }
    this.state.sliderMode = "ratings";
    this.state.sliders = ratings.map((r) => RATING_VALUES[r]) as UiState["sliders"];
    this.emit();
    return this.maybeRequestRoute();
  }

  /**
   * Request a route when both endpoints are picked. At most one request is
   * live at a time from the UI's point of view: every change invalidates the
   * previous token, and stale responses are discarded.
   */
  private async maybeRequestRoute(): Promise<void> {
    const { origin, destination, scenario } = this.state;
    if (!origin || !destination || !scenario) return;
    const token = ++this.routeToken;
    this.state.routePending = true;
    this.emit();
    try {
      const route = await this.transport.postRoute({
        scenario,
        from: origin,
        to: destination,
        profile: { vector: this.preference() },
        length_mode: this.state.lengthMode,
      });
      if (token !== this.routeToken) return; // stale response: latest wins
      this.state.route = route;
      this.state.banner = null;
    } catch (error) {
      if (token !== this.routeToken) return;
      if (error instanceof ApiError && error.code === "no_route") {
        this.state.banner = "No route between the picked points; keeping the previous route.";
        // previous overlay is deliberately retained
      } else if (error instanceof ApiError) {
        this.state.banner = `Route request failed: ${error.message}`;
      } else {
        throw error;
      }
    } finally {
      if (token === this.routeToken) {
        this.state.routePending = false;
        this.emit();
      }
    }
  }
}
