// Typed client for the read-only gazesim service. The UI only ever issues
// GET requests; superseded in-flight requests are aborted so stale payloads
// never land on screen.

export interface Meta {
  video_id: string;
  frame_rate_fps: number;
  n_frames: number;
  duration_ms: number;
  screen: { width_px: number; height_px: number };
  viewers: string[];
  eeg_viewers: string[];
  eeg_channels: string[];
}

export interface GazeSeries {
  x: number[];
  y: number[];
  mask: boolean[];
}

export interface GazePayload {
  from_frame: number;
  frame_rate_fps: number;
  frame_ms: number[];
  viewers: Record<string, GazeSeries>;
}

export interface EegPayload {
  viewer: string;
  sample_rate_hz: number;
  center_ms: number;
  half_window_ms: number;
  start_ms: number;
  channels: Record<string, number[]>;
}

export interface SimilarityPayload {
  viewer_ids: string[];
  values: number[][];
  window: { start_s: number; length_s: number };
  params: { lambda: number; gamma: number };
}

export interface ClustersPayload {
  scale: number;
  seed: number;
  q: number;
  n_communities: number;
  communities: Record<string, number>;
  params: { lambda: number; gamma: number };
}

function query(params: Record<string, string | number | undefined>): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) {
      parts.push(`${encodeURIComponent(key)}=${encodeURIComponent(String(value))}`);
    }
  }
  return parts.join("&");
}

export function metaUrl(base = ""): string {
  return `${base}/api/meta`;
}

export function gazeUrl(
  viewers: string[],
  fromMs: number,
  toMs: number,
  base = "",
): string {
  return `${base}/api/gaze?${query({
    viewers: viewers.join(","),
    from_ms: fromMs,
    to_ms: toMs,
  })}`;
}

export function eegUrl(
  channels: string[],
  centerMs: number,
  halfWindowMs: number,
  base = "",
): string {
  return `${base}/api/eeg?${query({
    channels: channels.join(","),
    center_ms: centerMs,
    half_window_ms: halfWindowMs,
  })}`;
}

export function similarityUrl(
  startS: number,
  lenS: number,
  lambda: number,
  gamma: number,
  base = "",
): string {
  return `${base}/api/similarity?${query({
    start_s: startS,
    len_s: lenS,
    lambda,
    gamma,
  })}`;
}

export function clustersUrl(
  startS: number,
  lenS: number,
  scale: number,
  seed: number,
  lambda: number,
  gamma: number,
  base = "",
): string {
  return `${base}/api/clusters?${query({
    start_s: startS,
    len_s: lenS,
    scale,
    seed,
    lambda,
    gamma,
  })}`;
}

export async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { method: "GET", signal });
  if (!response.ok) {
    throw new Error(`GET ${url} -> ${response.status}`);
  }
  return (await response.json()) as T;
}

/** Serializes a family of requests: issuing a new one aborts the previous
 * in-flight request, so only the latest selection's payload resolves. */
export class LatestOnly {
  private controller: AbortController | null = null;

  async issue<T>(run: (signal: AbortSignal) => Promise<T>): Promise<T | null> {
    if (this.controller !== null) {
      this.controller.abort();
    }
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await run(controller.signal);
    } catch (err) {
      if (controller.signal.aborted) {
        return null; // superseded; caller ignores
      }
      throw err;
    } finally {
      if (this.controller === controller) {
        this.controller = null;
      }
    }
  }
}
