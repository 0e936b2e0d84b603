// Coordinate and size mappings between tracker screen space and the player.

export interface Size {
  width: number;
  height: number;
}

/** Exact scaling from recording-screen pixels to player pixels:
 * overlay_x = x_px * player_width / screen_width (same for y). */
export function mapToPlayer(
  xPx: number,
  yPx: number,
  screen: Size,
  player: Size,
): { x: number; y: number } {
  return {
    x: (xPx * player.width) / screen.width,
    y: (yPx * player.height) / screen.height,
  };
}

export const DOT_RADIUS_MIN = 4;
export const DOT_RADIUS_MAX = 24;
const DOT_RADIUS_PX_PER_MS = 0.015; // 24 px at a 1.6 s dwell

/** Dot radius grows linearly with the fixation's duration and clamps to
 * [4, 24] display pixels (so 200 ms vs 800 ms draw at 4 vs 12: a 1:3 ratio
 * once the lower clamp engages). */
export function dotRadius(durationMs: number): number {
  const raw = durationMs * DOT_RADIUS_PX_PER_MS;
  return Math.min(DOT_RADIUS_MAX, Math.max(DOT_RADIUS_MIN, raw));
}

/** Trail segments fade out with age: alpha 1 at the playhead, 0 at the far
 * end of the trail window ("colors proportionally getting stronger"). */
export function trailAlpha(ageMs: number, trailWindowMs: number): number {
  if (trailWindowMs <= 0) {
    return 0;
  }
  return Math.min(1, Math.max(0, 1 - ageMs / trailWindowMs));
}

/** Length (in frames, at fps) of the run of samples around `index` that stay
 * within tolPx of the sample at `index`; used as the current dwell time.
 * Masked frames terminate the run. Returns milliseconds. */
export function runDurationMs(
  xs: number[],
  ys: number[],
  mask: boolean[],
  index: number,
  fps: number,
  tolPx = 10,
): number {
  if (index < 0 || index >= xs.length || !mask[index]) {
    return 0;
  }
  const cx = xs[index] as number;
  const cy = ys[index] as number;
  const near = (k: number): boolean => {
    if (!mask[k]) {
      return false;
    }
    const dx = (xs[k] as number) - cx;
    const dy = (ys[k] as number) - cy;
    return Math.sqrt(dx * dx + dy * dy) <= tolPx;
  };
  let lo = index;
  while (lo - 1 >= 0 && near(lo - 1)) {
    lo -= 1;
  }
  let hi = index;
  while (hi + 1 < xs.length && near(hi + 1)) {
    hi += 1;
  }
  return ((hi - lo + 1) / fps) * 1000;
}

/** Frame index whose timestamp is nearest the playhead (ties to earlier). */
export function frameForTime(playheadMs: number, fps: number, nFrames: number): number {
  const k = Math.round((playheadMs * fps) / 1000);
  return Math.min(Math.max(k, 0), nFrames - 1);
}
