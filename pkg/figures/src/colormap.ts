/** Fixed perceptually-uniform colormap (viridis anchors, linear interpolation). */

export type Rgb = [number, number, number];

const ANCHORS: Rgb[] = [
  [68, 1, 84],
  [72, 24, 106],
  [71, 45, 123],
  [66, 64, 134],
  [59, 82, 139],
  [51, 99, 141],
  [44, 114, 142],
  [38, 130, 142],
  [33, 145, 140],
  [31, 160, 136],
  [40, 174, 128],
  [63, 188, 115],
  [94, 201, 98],
  [132, 212, 75],
  [173, 220, 48],
  [216, 226, 25],
  [253, 231, 37],
];

/** Map a value in [min, max] to an RGB color; clamps outside the range. */
export function colormap(value: number, min: number, max: number): Rgb {
  const span = max > min ? max - min : 1;
  const t = Math.min(1, Math.max(0, (value - min) / span));
  const scaled = t * (ANCHORS.length - 1);
  const lo = Math.floor(scaled);
  const hi = Math.min(lo + 1, ANCHORS.length - 1);
  const frac = scaled - lo;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  return [
    mix(ANCHORS[lo][0], ANCHORS[hi][0]),
    mix(ANCHORS[lo][1], ANCHORS[hi][1]),
    mix(ANCHORS[lo][2], ANCHORS[hi][2]),
  ];
}

export const MASKED_CELL: Rgb = [128, 128, 128];
export const CLASS_MARKER: Rgb = [227, 26, 28];
export const REFERENCE_STAR: Rgb = [255, 255, 255];
export const TRAJECTORY_CURVE: Rgb = [255, 165, 0];
export const GRAMIAN_ARROW: Rgb = [255, 255, 255];
