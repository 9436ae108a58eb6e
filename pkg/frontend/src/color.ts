/** Color ramps matching the server-side SVG renderer: diverging
 * red/white/blue centered at zero (red = shooting better), and a
 * sequential white-to-blue scale for probabilities. */

const RED: Rgb = [178, 24, 43];
const BLUE: Rgb = [33, 102, 172];
const SEQ_HIGH: Rgb = [8, 81, 156];
const WHITE: Rgb = [255, 255, 255];

type Rgb = [number, number, number];

function mix(lo: Rgb, hi: Rgb, t: number): string {
  const s = Math.min(Math.max(t, 0), 1);
  const channel = (i: number) => Math.round(lo[i] + (hi[i] - lo[i]) * s);
  return `rgb(${channel(0)},${channel(1)},${channel(2)})`;
}

export function divergingColor(value: number, scale: number): string {
  if (scale <= 0) return mix(WHITE, WHITE, 0);
  return value < 0 ? mix(WHITE, RED, -value / scale) : mix(WHITE, BLUE, value / scale);
}

export function sequentialColor(value: number, scale: number): string {
  if (scale <= 0) return mix(WHITE, WHITE, 0);
  return mix(WHITE, SEQ_HIGH, value / scale);
}
