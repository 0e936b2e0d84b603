// Similarity heatmap: cell geometry, hit testing and painting. Cell colors
// come straight from the service payload values (no client-side rescaling),
// so what is drawn is exactly what the API returned.

import type { SimilarityPayload } from "./api.js";
import { parulaCss } from "./colors.js";

export interface CellRect {
  x: number;
  y: number;
  size: number;
}

export function cellRect(i: number, j: number, n: number, canvasSize: number): CellRect {
  const size = canvasSize / n;
  return { x: j * size, y: i * size, size };
}

/** Canvas position to (row, column) cell, or null outside the grid. */
export function hitTest(
  px: number,
  py: number,
  n: number,
  canvasSize: number,
): { i: number; j: number } | null {
  if (px < 0 || py < 0 || px >= canvasSize || py >= canvasSize) {
    return null;
  }
  const size = canvasSize / n;
  const j = Math.floor(px / size);
  const i = Math.floor(py / size);
  if (i < 0 || j < 0 || i >= n || j >= n) {
    return null;
  }
  return { i, j };
}

/** Clicking (i,j) and (j,i) inspects the same unordered pair. */
export function canonicalPair(i: number, j: number): [number, number] {
  return i <= j ? [i, j] : [j, i];
}

export function drawHeatmap(
  ctx: CanvasRenderingContext2D,
  payload: SimilarityPayload,
  canvasSize: number,
  marked: [number, number] | null,
): void {
  const n = payload.viewer_ids.length;
  ctx.clearRect(0, 0, canvasSize, canvasSize);
  for (let i = 0; i < n; i += 1) {
    const row = payload.values[i];
    if (!row) {
      continue;
    }
    for (let j = 0; j < n; j += 1) {
      const rect = cellRect(i, j, n, canvasSize);
      ctx.fillStyle = parulaCss(row[j] as number);
      ctx.fillRect(rect.x, rect.y, rect.size + 0.5, rect.size + 0.5);
    }
  }
  if (marked !== null) {
    // mirror the figure style: white dots on both (i,j) and (j,i)
    const [i, j] = marked;
    for (const [a, b] of [[i, j], [j, i]]) {
      const rect = cellRect(a as number, b as number, n, canvasSize);
      ctx.fillStyle = "#ffffff";
      ctx.beginPath();
      ctx.arc(
        rect.x + rect.size / 2,
        rect.y + rect.size / 2,
        Math.max(2, rect.size / 6),
        0,
        2 * Math.PI,
      );
      ctx.fill();
    }
  }
}
