"""Read-only HTTP service over a preprocessed dataset.

Endpoints (all GET, all times integer milliseconds of video time):
  /api/meta                                   dataset header
  /api/gaze?viewers=&from_ms=&to_ms=          frame-indexed samples + mask
  /api/eeg?channels=&center_ms=&half_window_ms=[&viewer=]
  /api/similarity?start_s=&len_s=&lambda=&gamma=
  /api/clusters?start_s=&len_s=&scale=&seed=

Similarity matrices are computed on demand behind a small LRU cache;
identical in-flight requests share one computation. Malformed queries get
400, unknown viewers/channels 404, windows outside the video 422.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .cluster import build_graph, detect_communities
from .errors import WindowOutOfRange
from .models import CohortDataset, SimilarityMatrix, TwedParams, WindowSpec
from .simmatrix import compute_similarity_matrix
from .store import load_preprocessed

DEFAULT_EEG_HALF_WINDOW_MS = 5000


class ComputeCache:
    """LRU cache whose misses are computed once even under concurrency."""

    def __init__(self, maxsize: int = 32):
        self.maxsize = maxsize
        self._lock = threading.Lock()
        self._entries: OrderedDict = OrderedDict()
        self._inflight: dict = {}

    def get_or_compute(self, key, compute: Callable):
        while True:
            with self._lock:
                if key in self._entries:
                    self._entries.move_to_end(key)
                    return self._entries[key]
                event = self._inflight.get(key)
                if event is None:
                    event = threading.Event()
                    self._inflight[key] = event
                    break
            event.wait()
        try:
            value = compute()
        except BaseException:
            with self._lock:
                del self._inflight[key]
            event.set()
            raise
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self.maxsize:
                self._entries.popitem(last=False)
            del self._inflight[key]
        event.set()
        return value


def _similarity_payload(sim: SimilarityMatrix) -> dict:
    return {
        "viewer_ids": sim.viewer_ids,
        "values": [[float(v) for v in row] for row in sim.values],
        "window": {"start_s": sim.window.start_s, "length_s": sim.window.length_s},
        "params": {"lambda": sim.params.lam, "gamma": sim.params.gamma},
    }


def build_app(
    out_dir: Path,
    ui_dir: Path | None = None,
    cache_size: int = 32,
) -> FastAPI:
    cohort: CohortDataset = load_preprocessed(Path(out_dir))
    cache = ComputeCache(maxsize=cache_size)
    duration_ms = int(round(cohort.duration_s * 1000))
    fps = cohort.frame_rate_fps
    eeg = cohort.eeg or {}
    eeg_viewers = sorted(eeg)
    channels = eeg[eeg_viewers[0]].channels if eeg_viewers else []

    app = FastAPI(title="gazesim explorer service")

    @app.exception_handler(RequestValidationError)
    async def malformed_query(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(WindowOutOfRange)
    async def window_out_of_range(request: Request, exc: WindowOutOfRange):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    def cached_similarity(start_s: float, len_s: float, lam: float, gamma: float):
        window = WindowSpec(start_s=start_s, length_s=len_s)
        params = TwedParams(lam=lam, gamma=gamma)
        key = (start_s, len_s, lam, gamma)
        return cache.get_or_compute(
            key, lambda: compute_similarity_matrix(cohort, window, params)
        )

    @app.get("/api/meta")
    def meta():
        return {
            "video_id": cohort.video_id,
            "frame_rate_fps": fps,
            "n_frames": cohort.n_frames,
            "duration_ms": duration_ms,
            "screen": {
                "width_px": cohort.screen.width_px,
                "height_px": cohort.screen.height_px,
            },
            "viewers": sorted(cohort.viewers),
            "eeg_viewers": eeg_viewers,
            "eeg_channels": channels,
        }

    @app.get("/api/gaze")
    def gaze(viewers: str, from_ms: int = 0, to_ms: int | None = None):
        if to_ms is None:
            to_ms = duration_ms
        if to_ms <= from_ms:
            raise HTTPException(status_code=400, detail="to_ms must exceed from_ms")
        ids = [v for v in viewers.split(",") if v]
        if not ids:
            raise HTTPException(status_code=400, detail="no viewers requested")
        for vid in ids:
            if vid not in cohort.viewers:
                raise HTTPException(status_code=404, detail=f"unknown viewer {vid!r}")
        if from_ms >= duration_ms or to_ms <= 0:
            raise WindowOutOfRange(from_ms / 1000.0, (to_ms - from_ms) / 1000.0,
                                   cohort.duration_s)
        k0 = max(0, math.ceil(from_ms * fps / 1000.0))
        k1 = min(cohort.n_frames, math.ceil(to_ms * fps / 1000.0))
        payload = {}
        for vid in ids:
            s = cohort.viewers[vid]
            payload[vid] = {
                "x": [float(v) for v in s.xs[k0:k1]],
                "y": [float(v) for v in s.ys[k0:k1]],
                "mask": [bool(b) for b in s.mask[k0:k1]],
            }
        return {
            "from_frame": k0,
            "frame_rate_fps": fps,
            "frame_ms": [int(round(k * 1000.0 / fps)) for k in range(k0, k1)],
            "viewers": payload,
        }

    @app.get("/api/eeg")
    def eeg_window(
        channels_param: str = Query(alias="channels"),
        center_ms: int = 0,
        half_window_ms: int = DEFAULT_EEG_HALF_WINDOW_MS,
        viewer: str | None = None,
    ):
        if not eeg_viewers:
            raise HTTPException(status_code=404, detail="dataset has no EEG")
        if half_window_ms <= 0:
            raise HTTPException(status_code=400, detail="half_window_ms must be > 0")
        vid = viewer if viewer is not None else eeg_viewers[0]
        if vid not in eeg:
            raise HTTPException(status_code=404, detail=f"unknown EEG viewer {vid!r}")
        rec = eeg[vid]
        wanted = [c for c in channels_param.split(",") if c]
        if not wanted:
            raise HTTPException(status_code=400, detail="no channels requested")
        for c in wanted:
            if c not in rec.channels:
                raise HTTPException(status_code=404, detail=f"unknown channel {c!r}")
        if center_ms < 0 or center_ms > duration_ms:
            raise WindowOutOfRange(center_ms / 1000.0, 0.001, cohort.duration_s)
        lo_ms = center_ms - half_window_ms
        hi_ms = center_ms + half_window_ms
        rate = rec.sample_rate_hz
        s0 = max(0, math.ceil((lo_ms - rec.start_offset_ms) * rate / 1000.0))
        s1 = min(
            rec.n_samples,
            math.floor((hi_ms - rec.start_offset_ms) * rate / 1000.0) + 1,
        )
        s1 = max(s0, s1)
        col = {c: rec.channels.index(c) for c in wanted}
        return {
            "viewer": vid,
            "sample_rate_hz": rate,
            "center_ms": center_ms,
            "half_window_ms": half_window_ms,
            "start_ms": rec.start_offset_ms + s0 * 1000.0 / rate,
            "channels": {
                c: [float(v) for v in rec.samples[s0:s1, col[c]]] for c in wanted
            },
        }

    @app.get("/api/similarity")
    def similarity(
        start_s: float,
        len_s: float,
        lam: float = Query(default=5000.0, alias="lambda"),
        gamma: float = 5000.0,
    ):
        sim = cached_similarity(start_s, len_s, lam, gamma)
        return _similarity_payload(sim)

    @app.get("/api/clusters")
    def clusters(
        start_s: float,
        len_s: float,
        scale: float = 1.0,
        seed: int = 0,
        lam: float = Query(default=5000.0, alias="lambda"),
        gamma: float = 5000.0,
    ):
        sim = cached_similarity(start_s, len_s, lam, gamma)
        graph = build_graph(sim)
        sweep = detect_communities(graph, [scale], seed)
        part = sweep.partitions[0]
        return {
            "scale": scale,
            "seed": seed,
            "q": part.q_value,
            "n_communities": part.n_communities,
            "communities": part.assignment,
            "params": {"lambda": lam, "gamma": gamma},
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
