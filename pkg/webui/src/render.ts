// SVG map renderer: network segments colored by the active layer, the route
// overlay, and the endpoint markers. Path elements are cached per segment so
// a layer switch only restyles, never rebuilds or refetches.

import { makeProjector, routePathPoints, type Projector } from "./project.js";
import type { UiState } from "./store.js";
import type { FeatureCollection } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export class MapRenderer {
  private projector: Projector | null = null;
  private segmentPaths = new Map<string, SVGPathElement>();
  private networkGroup: SVGGElement;
  private routePath: SVGPathElement;
  private markerGroup: SVGGElement;
  private drawnNetwork: FeatureCollection | null = null;

  constructor(
    private svg: SVGSVGElement,
    private width: number,
    private height: number,
  ) {
    this.networkGroup = document.createElementNS(SVG_NS, "g");
    this.routePath = document.createElementNS(SVG_NS, "path");
    this.routePath.setAttribute("class", "route");
    this.routePath.setAttribute("fill", "none");
    this.markerGroup = document.createElementNS(SVG_NS, "g");
    svg.append(this.networkGroup, this.routePath, this.markerGroup);
  }

  get currentProjector(): Projector | null {
    return this.projector;
  }

  render(state: UiState, colors: Map<string, string>): void {
    if (state.network && state.network !== this.drawnNetwork) {
      this.buildNetwork(state.network);
    }
    this.recolor(colors);
    this.drawRoute(state.route);
    this.drawMarkers(state);
  }

  private buildNetwork(network: FeatureCollection): void {
    this.projector = makeProjector(network, this.width, this.height);
    this.networkGroup.replaceChildren();
    this.segmentPaths.clear();
    for (const feature of network.features) {
      const id = String((feature.properties as { id?: unknown }).id ?? "");
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", this.pathData(feature.geometry.coordinates));
      path.setAttribute("class", "segment");
      path.setAttribute("fill", "none");
      path.dataset["segmentId"] = id;
      this.networkGroup.append(path);
      this.segmentPaths.set(id, path);
    }
    this.drawnNetwork = network;
  }

  private recolor(colors: Map<string, string>): void {
    for (const [id, path] of this.segmentPaths) {
      path.setAttribute("stroke", colors.get(id) ?? "#999");
    }
  }

  private drawRoute(route: FeatureCollection | null): void {
    if (!route || !this.projector) {
      this.routePath.setAttribute("d", "");
      return;
    }
    const points = routePathPoints(route, this.projector);
    this.routePath.setAttribute(
      "d",
      points.map(([x, y], i) => `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`).join(" "),
    );
  }

  private drawMarkers(state: UiState): void {
    this.markerGroup.replaceChildren();
    if (!this.projector) return;
    for (const [point, cls] of [
      [state.origin, "origin"],
      [state.destination, "destination"],
    ] as const) {
      if (!point) continue;
      const [x, y] = this.projector.toXY(point[1], point[0]);
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(x));
      circle.setAttribute("cy", String(y));
      circle.setAttribute("r", "6");
      circle.setAttribute("class", `marker ${cls}`);
      this.markerGroup.append(circle);
    }
  }

  private pathData(coordinates: [number, number][]): string {
    if (!this.projector) return "";
    return coordinates
      .map(([lon, lat], i) => {
        const [x, y] = this.projector!.toXY(lon, lat);
        return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
  }
}
