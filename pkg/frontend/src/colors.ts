// Viewer colors and the sequential heatmap colormap.

/** Fixed qualitative palette; viewers are colored by their index in the
 * dataset's viewer list, so colors are stable across a session. */
export const VIEWER_PALETTE: readonly string[] = [
  "#e6194b", "#3cb44b", "#ffe119", "#4363d8",
  "#f58231", "#911eb4", "#46f0f0", "#f032e6",
  "#bcf60c", "#fabebe", "#008080", "#e6beff",
  "#9a6324", "#fffac8", "#800000", "#aaffc3",
];

export function viewerColor(index: number): string {
  const color = VIEWER_PALETTE[((index % 16) + 16) % 16];
  return color as string;
}

// Control points sampled along the parula colormap, dark blue to yellow.
const PARULA_STOPS: ReadonlyArray<readonly [number, number, number]> = [
  [53, 42, 135],
  [15, 92, 221],
  [18, 125, 216],
  [7, 156, 207],
  [21, 177, 180],
  [89, 189, 140],
  [165, 190, 107],
  [225, 185, 82],
  [249, 210, 41],
  [249, 251, 14],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

/** Parula-like sequential colormap over [0, 1]; out-of-range values clamp. */
export function parula(t: number): [number, number, number] {
  const clamped = Math.min(1, Math.max(0, t));
  const scaled = clamped * (PARULA_STOPS.length - 1);
  const lo = Math.min(PARULA_STOPS.length - 2, Math.floor(scaled));
  const frac = scaled - lo;
  const from = PARULA_STOPS[lo] as readonly [number, number, number];
  const to = PARULA_STOPS[lo + 1] as readonly [number, number, number];
  return [
    Math.round(lerp(from[0], to[0], frac)),
    Math.round(lerp(from[1], to[1], frac)),
    Math.round(lerp(from[2], to[2], frac)),
  ];
}

export function parulaCss(t: number): string {
  const [r, g, b] = parula(t);
  return `rgb(${r},${g},${b})`;
}

export function rgbaWithAlpha(hex: string, alpha: number): string {
  const r = parseInt(hex.slice(1, 3), 16);
  const g = parseInt(hex.slice(3, 5), 16);
  const b = parseInt(hex.slice(5, 7), 16);
  return `rgba(${r},${g},${b},${alpha})`;
}
