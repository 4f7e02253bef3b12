// Fixed 0 -> 1 color ramp: scenarios stay visually comparable because the
// ramp never rescales to the data.

const STOPS: [number, [number, number, number]][] = [
  [0.0, [42, 123, 182]], // calm blue
  [0.5, [255, 255, 191]], // neutral
  [1.0, [215, 25, 28]], // hazardous red
];

export function rampColor(value: number): string {
  const t = Math.min(1, Math.max(0, value));
  for (let i = 0; i < STOPS.length - 1; i++) {
    const [t0, c0] = STOPS[i]!;
    const [t1, c1] = STOPS[i + 1]!;
    if (t <= t1) {
      const f = t1 === t0 ? 0 : (t - t0) / (t1 - t0);
      const mix = c0.map((channel, k) => Math.round(channel + (c1[k]! - channel) * f));
      return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
    }
  }
  const last = STOPS[STOPS.length - 1]![1];
  return `rgb(${last[0]},${last[1]},${last[2]})`;
}
