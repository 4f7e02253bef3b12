// Importance ratings and the three shipped driver presets. Slider dimension
// order everywhere is (length, traffic, weather, events).

export type RatingName = "unimportant" | "somewhat" | "important" | "very";

export const RATING_VALUES: Record<RatingName, number> = {
  unimportant: 0.05,
  somewhat: 0.25,
  important: 0.5,
  very: 0.75,
};

export const RATING_NAMES: RatingName[] = ["unimportant", "somewhat", "important", "very"];

export const PRESETS: Record<string, RatingName[]> = {
  teemu: ["unimportant", "very", "unimportant", "very"],
  tapio: ["very", "somewhat", "unimportant", "somewhat"],
  tuire: ["unimportant", "unimportant", "very", "very"],
};

export const PRESET_NAMES = Object.keys(PRESETS);

/** Scale raw slider values so they sum to 1 (uniform when all are zero). */
export function normalize(raw: readonly number[]): number[] {
  const total = raw.reduce((acc, v) => acc + v, 0);
  if (total <= 0) {
    return raw.map(() => 1 / raw.length);
  }
  return raw.map((v) => v / total);
}

/** Snap an arbitrary slider position to the nearest rating level. */
export function snapToRating(value: number): RatingName {
  let best: RatingName = RATING_NAMES[0]!;
  for (const name of RATING_NAMES) {
    if (Math.abs(RATING_VALUES[name] - value) < Math.abs(RATING_VALUES[best] - value)) {
      best = name;
    }
  }
  return best;
}
