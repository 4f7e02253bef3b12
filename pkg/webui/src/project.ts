// Lon/lat to viewport projection. Pure functions so the geometry that ends up
// on screen can be asserted against the API response in tests.

import type { FeatureCollection } from "./types.js";

export interface Projector {
  toXY(lon: number, lat: number): [number, number];
  toLonLat(x: number, y: number): [number, number];
}

export function makeProjector(
  network: FeatureCollection,
  width: number,
  height: number,
  padding = 20,
): Projector {
  let minLon = Infinity;
  let maxLon = -Infinity;
  let minLat = Infinity;
  let maxLat = -Infinity;
  for (const feature of network.features) {
    for (const [lon, lat] of feature.geometry.coordinates) {
      minLon = Math.min(minLon, lon);
      maxLon = Math.max(maxLon, lon);
      minLat = Math.min(minLat, lat);
      maxLat = Math.max(maxLat, lat);
    }
  }
  // equirectangular with latitude correction so shapes are not squashed
  const midLat = (minLat + maxLat) / 2;
  const lonScale = Math.cos((midLat * Math.PI) / 180);
  const spanX = (maxLon - minLon) * lonScale || 1e-9;
  const spanY = maxLat - minLat || 1e-9;
  const scale = Math.min((width - 2 * padding) / spanX, (height - 2 * padding) / spanY);
  const offsetX = (width - spanX * scale) / 2;
  const offsetY = (height - spanY * scale) / 2;

  return {
    toXY(lon, lat) {
      const x = offsetX + (lon - minLon) * lonScale * scale;
      const y = height - offsetY - (lat - minLat) * scale;
      return [x, y];
    },
    toLonLat(x, y) {
      const lon = (x - offsetX) / (lonScale * scale) + minLon;
      const lat = (height - offsetY - y) / scale + minLat;
      return [lon, lat];
    },
  };
}

/** Projected points of a route document, in traversal order. */
export function routePathPoints(
  route: FeatureCollection,
  projector: Projector,
): [number, number][] {
  const feature = route.features[0];
  if (!feature) return [];
  return feature.geometry.coordinates.map(([lon, lat]) => projector.toXY(lon, lat));
}
