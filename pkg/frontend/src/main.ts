// App wiring: video + overlay + EEG strip + heatmap/cluster views, all fed
// by the read-only service. The video file itself is opened locally by the
// user; the service serves data, not media.

import {
  clustersUrl,
  eegUrl,
  gazeUrl,
  getJson,
  LatestOnly,
  metaUrl,
  similarityUrl,
  type ClustersPayload,
  type EegPayload,
  type GazePayload,
  type Meta,
  type SimilarityPayload,
} from "./api.js";
import { viewerColor } from "./colors.js";
import { drawEegStrip } from "./eeg.js";
import { canonicalPair, drawHeatmap, hitTest } from "./heatmap.js";
import { buildTrail, drawTrails } from "./inspector.js";
import { computeOverlayScene, drawOverlay } from "./overlay.js";
import { EegViewState, OverlayState } from "./state.js";
import { Transport } from "./transport.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function ctx2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new Error("canvas 2d context unavailable");
  }
  return ctx;
}

async function boot(): Promise<void> {
  const meta = await getJson<Meta>(metaUrl());
  const overlayState = new OverlayState(meta.viewers);
  const eegState = new EegViewState(meta.eeg_channels);
  const transport = new Transport(meta.duration_ms);

  const video = el<HTMLVideoElement>("video");
  const overlayCanvas = el<HTMLCanvasElement>("overlay");
  const eegCanvas = el<HTMLCanvasElement>("eeg-strip");
  const heatmapCanvas = el<HTMLCanvasElement>("heatmap");
  const inspectorCanvas = el<HTMLCanvasElement>("inspector");
  const slider = el<HTMLInputElement>("slider");
  const playButton = el<HTMLButtonElement>("play");
  const timeLabel = el<HTMLSpanElement>("time-label");
  const pairLabel = el<HTMLSpanElement>("pair-label");
  const clusterList = el<HTMLDivElement>("cluster-list");

  el<HTMLSpanElement>("dataset-label").textContent =
    `${meta.video_id} — ${meta.viewers.length} viewers, ` +
    `${(meta.duration_ms / 1000).toFixed(1)} s @ ${meta.frame_rate_fps} fps`;
  slider.max = String(meta.duration_ms);

  // --- local video file ------------------------------------------------
  el<HTMLInputElement>("video-file").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (file) {
      video.src = URL.createObjectURL(file);
    }
  });

  // --- selection checkboxes ----------------------------------------------
  const gazeFetcher = new LatestOnly();
  let gazeData: GazePayload | null = null;

  async function refetchGaze(): Promise<void> {
    const selection = overlayState.selection();
    if (selection.length === 0) {
      gazeData = null;
      renderFrame();
      return;
    }
    const payload = await gazeFetcher.issue((signal) =>
      getJson<GazePayload>(gazeUrl(selection, 0, meta.duration_ms), signal),
    );
    if (payload !== null) {
      gazeData = payload;
      renderFrame();
    }
  }

  const viewerBox = el<HTMLDivElement>("viewer-checkboxes");
  meta.viewers.forEach((viewer, index) => {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.addEventListener("change", () => {
      overlayState.toggle(viewer);
      void refetchGaze();
      void refreshClusters();
    });
    label.append(box, ` ${viewer}`);
    label.style.color = viewerColor(index);
    viewerBox.append(label);
  });

  const eegFetcher = new LatestOnly();
  let eegData: EegPayload | null = null;
  let eegFetchCenter = -Infinity;
  const EEG_REFETCH_STEP_MS = 500;
  const EEG_PAD_MS = 2000;

  async function refetchEeg(centerMs: number): Promise<void> {
    const channels = eegState.selection();
    if (channels.length === 0 || meta.eeg_channels.length === 0) {
      eegData = null;
      renderEeg();
      return;
    }
    const snapped =
      Math.round(centerMs / EEG_REFETCH_STEP_MS) * EEG_REFETCH_STEP_MS;
    const clamped = Math.min(Math.max(snapped, 0), meta.duration_ms);
    eegFetchCenter = clamped;
    const payload = await eegFetcher.issue((signal) =>
      getJson<EegPayload>(
        eegUrl(channels, clamped, eegState.halfWindowMs + EEG_PAD_MS),
        signal,
      ),
    );
    if (payload !== null) {
      eegData = payload;
      renderEeg();
    }
  }

  const channelBox = el<HTMLDivElement>("channel-checkboxes");
  meta.eeg_channels.forEach((channel) => {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.addEventListener("change", () => {
      eegState.toggle(channel);
      void refetchEeg(transport.playhead);
    });
    label.append(box, ` ${channel}`);
    channelBox.append(label);
  });

  el<HTMLInputElement>("trail-ms").addEventListener("change", (event) => {
    overlayState.trailWindowMs = Math.max(
      0, Number((event.target as HTMLInputElement).value),
    );
    renderFrame();
  });
  el<HTMLInputElement>("eeg-half-ms").addEventListener("change", (event) => {
    const value = Number((event.target as HTMLInputElement).value);
    if (value > 0) {
      eegState.halfWindowMs = value;
      void refetchEeg(transport.playhead);
    }
  });

  // --- rendering -----------------------------------------------------------
  function playerSize(): { width: number; height: number } {
    const width = video.clientWidth || 640;
    const height = video.clientHeight || 360;
    if (overlayCanvas.width !== width) {
      overlayCanvas.width = width;
    }
    if (overlayCanvas.height !== height) {
      overlayCanvas.height = height;
    }
    return { width, height };
  }

  function renderFrame(): void {
    const player = playerSize();
    const ctx = ctx2d(overlayCanvas);
    if (gazeData === null) {
      ctx.clearRect(0, 0, player.width, player.height);
      return;
    }
    const scene = computeOverlayScene(
      gazeData,
      overlayState,
      { width: meta.screen.width_px, height: meta.screen.height_px },
      player,
      transport.playhead,
    );
    drawOverlay(ctx, scene, player);
  }

  function renderEeg(): void {
    drawEegStrip(
      ctx2d(eegCanvas),
      eegData,
      eegState.selection(),
      transport.playhead,
      eegState.halfWindowMs,
      eegCanvas.width,
      eegCanvas.height,
      viewerColor,
    );
  }

  // --- transport ----------------------------------------------------------
  transport.subscribe((playheadMs, playing) => {
    slider.value = String(Math.round(playheadMs));
    timeLabel.textContent = `${(playheadMs / 1000).toFixed(2)} s`;
    playButton.textContent = playing ? "Pause" : "Play";
    renderFrame();
    renderEeg();
    if (Math.abs(playheadMs - eegFetchCenter) > EEG_REFETCH_STEP_MS) {
      void refetchEeg(playheadMs);
    }
  });

  playButton.addEventListener("click", () => {
    if (transport.isPlaying) {
      transport.pause();
      video.pause();
    } else {
      transport.play();
      void video.play().catch(() => transport.pause());
    }
  });

  slider.addEventListener("input", () => {
    const ms = Number(slider.value);
    video.currentTime = ms / 1000;
    transport.seek(ms);
  });

  function syncLoop(): void {
    transport.tick(video.currentTime * 1000);
    requestAnimationFrame(syncLoop);
  }
  requestAnimationFrame(syncLoop);

  // --- heatmap + clusters --------------------------------------------------
  const windowStart = el<HTMLInputElement>("window-start");
  const windowLen = el<HTMLInputElement>("window-len");
  const lambdaInput = el<HTMLInputElement>("lambda");
  const gammaInput = el<HTMLInputElement>("gamma");
  const scaleInput = el<HTMLInputElement>("scale");
  const seedInput = el<HTMLInputElement>("seed");

  const simFetcher = new LatestOnly();
  let simData: SimilarityPayload | null = null;
  let markedPair: [number, number] | null = null;

  async function refreshSimilarity(): Promise<void> {
    const payload = await simFetcher.issue((signal) =>
      getJson<SimilarityPayload>(
        similarityUrl(
          Number(windowStart.value),
          Number(windowLen.value),
          Number(lambdaInput.value),
          Number(gammaInput.value),
        ),
        signal,
      ),
    );
    if (payload !== null) {
      simData = payload;
      markedPair = null;
      pairLabel.textContent = "click a cell to inspect a pair";
      drawHeatmap(ctx2d(heatmapCanvas), simData, heatmapCanvas.width, markedPair);
    }
  }

  const clusterFetcher = new LatestOnly();

  async function refreshClusters(): Promise<void> {
    const payload = await clusterFetcher.issue((signal) =>
      getJson<ClustersPayload>(
        clustersUrl(
          Number(windowStart.value),
          Number(windowLen.value),
          Number(scaleInput.value),
          Number(seedInput.value),
          Number(lambdaInput.value),
          Number(gammaInput.value),
        ),
        signal,
      ),
    );
    if (payload === null) {
      return;
    }
    clusterList.replaceChildren();
    const groups = new Map<number, string[]>();
    for (const [viewer, community] of Object.entries(payload.communities)) {
      const members = groups.get(community) ?? [];
      members.push(viewer);
      groups.set(community, members);
    }
    const header = document.createElement("div");
    header.textContent =
      `${payload.n_communities} communities, Q = ${payload.q.toFixed(4)} ` +
      `(scale ${payload.scale}, seed ${payload.seed})`;
    clusterList.append(header);
    [...groups.keys()].sort((a, b) => a - b).forEach((community) => {
      const row = document.createElement("div");
      row.className = "cluster-row";
      const members = (groups.get(community) ?? []).sort();
      row.textContent = `community ${community}: `;
      for (const viewer of members) {
        const chip = document.createElement("span");
        chip.textContent = viewer;
        chip.style.color = viewerColor(meta.viewers.indexOf(viewer));
        chip.className = "chip";
        row.append(chip);
      }
      clusterList.append(row);
    });
  }

  const inspectorFetcher = new LatestOnly();

  async function inspectPair(i: number, j: number): Promise<void> {
    if (simData === null) {
      return;
    }
    const [a, b] = canonicalPair(i, j);
    markedPair = [a, b];
    drawHeatmap(ctx2d(heatmapCanvas), simData, heatmapCanvas.width, markedPair);
    const viewerA = simData.viewer_ids[a] as string;
    const viewerB = simData.viewer_ids[b] as string;
    const value = (simData.values[a] as number[])[b] as number;
    pairLabel.textContent =
      `${viewerA} vs ${viewerB}: similarity ${value.toFixed(4)}`;
    const fromMs = Math.round(simData.window.start_s * 1000);
    const toMs = Math.round(
      (simData.window.start_s + simData.window.length_s) * 1000,
    );
    const payload = await inspectorFetcher.issue((signal) =>
      getJson<GazePayload>(gazeUrl([viewerA, viewerB], fromMs, toMs, ""), signal),
    );
    if (payload === null) {
      return;
    }
    const screen = { width: meta.screen.width_px, height: meta.screen.height_px };
    const size = { width: inspectorCanvas.width, height: inspectorCanvas.height };
    drawTrails(
      ctx2d(inspectorCanvas),
      [
        buildTrail(payload, viewerA, viewerColor(meta.viewers.indexOf(viewerA)), screen, size),
        buildTrail(payload, viewerB, viewerColor(meta.viewers.indexOf(viewerB)), screen, size),
      ],
      size,
    );
  }

  heatmapCanvas.addEventListener("click", (event) => {
    if (simData === null) {
      return;
    }
    const rect = heatmapCanvas.getBoundingClientRect();
    const hit = hitTest(
      event.clientX - rect.left,
      event.clientY - rect.top,
      simData.viewer_ids.length,
      heatmapCanvas.width,
    );
    if (hit !== null) {
      void inspectPair(hit.i, hit.j);
    }
  });

  for (const input of [windowStart, windowLen, lambdaInput, gammaInput]) {
    input.addEventListener("change", () => {
      void refreshSimilarity();
      void refreshClusters();
    });
  }
  for (const input of [scaleInput, seedInput]) {
    input.addEventListener("change", () => void refreshClusters());
  }

  transport.seek(0);
  void refreshSimilarity();
  void refreshClusters();
}

boot().catch((err) => {
  const banner = document.getElementById("error-banner");
  if (banner) {
    banner.textContent = `failed to start: ${err}`;
    banner.style.display = "block";
  }
});
