// Pair inspector: 2D trail comparison for one viewer pair over the current
// window, colors strengthening linearly along the temporal dimension.

import type { GazePayload } from "./api.js";
import { rgbaWithAlpha } from "./colors.js";
import { mapToPlayer, type Size } from "./geometry.js";

export interface TrailPolyline {
  viewer: string;
  color: string;
  // one entry per consecutive observed pair of frames
  segments: { x1: number; y1: number; x2: number; y2: number; alpha: number }[];
}

/** Intensity of frame k of n: 0 at the window start, 1 at its end. */
export function frameIntensity(k: number, n: number): number {
  return n > 1 ? k / (n - 1) : 0;
}

export function buildTrail(
  payload: GazePayload,
  viewer: string,
  color: string,
  screen: Size,
  canvas: Size,
): TrailPolyline {
  const series = payload.viewers[viewer];
  const segments: TrailPolyline["segments"] = [];
  if (series) {
    const n = series.x.length;
    for (let k = 0; k + 1 < n; k += 1) {
      if (!series.mask[k] || !series.mask[k + 1]) {
        continue; // masked frames draw nothing
      }
      const from = mapToPlayer(
        series.x[k] as number, series.y[k] as number, screen, canvas,
      );
      const to = mapToPlayer(
        series.x[k + 1] as number, series.y[k + 1] as number, screen, canvas,
      );
      segments.push({
        x1: from.x,
        y1: from.y,
        x2: to.x,
        y2: to.y,
        // strengthen toward the end of the window, never fully invisible
        alpha: 0.15 + 0.85 * frameIntensity(k + 1, n),
      });
    }
  }
  return { viewer, color, segments };
}

export function drawTrails(
  ctx: CanvasRenderingContext2D,
  trails: TrailPolyline[],
  canvas: Size,
): void {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#10151d";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  for (const trail of trails) {
    ctx.lineWidth = 1.5;
    for (const seg of trail.segments) {
      ctx.strokeStyle = rgbaWithAlpha(trail.color, seg.alpha);
      ctx.beginPath();
      ctx.moveTo(seg.x1, seg.y1);
      ctx.lineTo(seg.x2, seg.y2);
      ctx.stroke();
    }
  }
}
