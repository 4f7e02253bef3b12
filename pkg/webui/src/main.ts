// DOM wiring: controls on the left, SVG map on the right, breakdown below.

import { httpTransport } from "./api.js";
import { MapRenderer } from "./render.js";
import { UiStore } from "./store.js";
import { PRESET_NAMES, RATING_NAMES, RATING_VALUES } from "./presets.js";
import type { Layer } from "./types.js";

const SLIDER_LABELS = ["length", "traffic", "weather", "events"] as const;
const MAP_WIDTH = 760;
const MAP_HEIGHT = 640;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const store = new UiStore(httpTransport());
  const svg = el<HTMLElement>("map").querySelector("svg") as unknown as SVGSVGElement;
  svg.setAttribute("viewBox", `0 0 ${MAP_WIDTH} ${MAP_HEIGHT}`);
  const renderer = new MapRenderer(svg, MAP_WIDTH, MAP_HEIGHT);

  const scenarioSelect = el<HTMLSelectElement>("scenario");
  const banner = el<HTMLDivElement>("banner");
  const breakdown = el<HTMLDivElement>("breakdown");
  const preview = el<HTMLDivElement>("preference-preview");
  const slidersBox = el<HTMLDivElement>("sliders");
  const presetsBox = el<HTMLDivElement>("presets");
  const pickHint = el<HTMLDivElement>("pick-hint");

  // slider rows
  const sliderInputs: HTMLInputElement[] = [];
  SLIDER_LABELS.forEach((label, index) => {
    const row = document.createElement("label");
    row.className = "slider-row";
    const span = document.createElement("span");
    span.textContent = label;
    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = "1";
    input.step = "0.01";
    input.value = String(store.state.sliders[index]);
    input.addEventListener("change", () => {
      void store.setSlider(index as 0 | 1 | 2 | 3, Number(input.value));
    });
    row.append(span, input);
    slidersBox.append(row);
    sliderInputs.push(input);
  });

  // preset buttons
  for (const name of PRESET_NAMES) {
    const button = document.createElement("button");
    button.textContent = name;
    button.addEventListener("click", () => void store.applyPreset(name));
    presetsBox.append(button);
  }

  // slider mode + length mode + layer controls
  el<HTMLSelectElement>("slider-mode").addEventListener("change", (event) => {
    store.setSliderMode((event.target as HTMLSelectElement).value as "ratings" | "continuous");
  });
  el<HTMLSelectElement>("length-mode").addEventListener("change", (event) => {
    void store.setLengthMode((event.target as HTMLSelectElement).value as "raw" | "normalized");
  });
  for (const layer of ["events", "traffic", "weather"] as Layer[]) {
    el<HTMLButtonElement>(`layer-${layer}`).addEventListener("click", () => store.setLayer(layer));
  }
  el<HTMLButtonElement>("swap").addEventListener("click", () => void store.swapEndpoints());

  scenarioSelect.addEventListener("change", () => {
    void store.selectScenario(scenarioSelect.value);
  });

  // map clicks: first pick sets the origin, second the destination, then alternate
  let nextPick: "origin" | "destination" = "origin";
  svg.addEventListener("click", (event) => {
    const projector = renderer.currentProjector;
    if (!projector) return;
    const rect = svg.getBoundingClientRect();
    const x = ((event.clientX - rect.left) / rect.width) * MAP_WIDTH;
    const y = ((event.clientY - rect.top) / rect.height) * MAP_HEIGHT;
    const [lon, lat] = projector.toLonLat(x, y);
    if (nextPick === "origin") {
      void store.setOrigin([lat, lon]);
      nextPick = "destination";
    } else {
      void store.setDestination([lat, lon]);
      nextPick = "origin";
    }
  });

  store.subscribe((state) => {
    // scenario list
    if (scenarioSelect.options.length !== state.scenarios.length) {
      scenarioSelect.replaceChildren(
        ...state.scenarios.map((s) => new Option(s.name, s.name)),
      );
    }
    if (state.scenario) scenarioSelect.value = state.scenario;

    // banner
    banner.textContent = state.banner ?? "";
    banner.hidden = !state.banner;

    // sliders reflect state (presets move them)
    state.sliders.forEach((value, i) => {
      sliderInputs[i]!.value = String(value);
    });
    const preference = store.preference();
    preview.textContent =
      "preference: [" + preference.map((v) => v.toFixed(5)).join(", ") + "]";

    // layer buttons
    for (const layer of ["events", "traffic", "weather"] as Layer[]) {
      el(`layer-${layer}`).classList.toggle("active", layer === state.layer);
    }

    // route pane stays empty until both endpoints are picked
    pickHint.hidden = Boolean(state.origin && state.destination);
    if (state.route && state.origin && state.destination) {
      const props = state.route.features[0]?.properties as
        | {
            total_cost: number;
            total_length_m: number;
            breakdown: Record<string, number>;
            data_incomplete_segments: number;
          }
        | undefined;
      if (props) {
        const parts = Object.entries(props.breakdown)
          .map(([k, v]) => `${k}: ${v.toFixed(4)}`)
          .join(" · ");
        breakdown.innerHTML =
          `<b>total cost</b> ${props.total_cost.toFixed(5)} · ` +
          `<b>length</b> ${(props.total_length_m / 1000).toFixed(2)} km<br>` +
          `${parts}<br>` +
          `data-incomplete segments: ${props.data_incomplete_segments}` +
          (state.routePending ? " (updating...)" : "");
      }
    } else {
      breakdown.textContent = "";
    }

    renderer.render(state, store.segmentColors());
  });

  void store.init();
}

// rating levels listed for the slider tooltip
document.addEventListener("DOMContentLoaded", () => {
  const legend = document.getElementById("rating-legend");
  if (legend) {
    legend.textContent = RATING_NAMES.map((n) => `${n}=${RATING_VALUES[n]}`).join("  ");
  }
  main();
});
