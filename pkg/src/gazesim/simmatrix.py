"""Per-window pairwise TWED distances normalized into similarity matrices.

Normalization is per window: every cell is divided by that window's largest
distance and subtracted from 1, so the farthest pair lands at similarity 0
and the diagonal at exactly 1. Values are therefore not comparable across
windows; the sidecar metadata written next to each matrix file says so.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .elastic import as_point_series, twed
from .errors import (
    LengthMismatch,
    NegativeDistance,
    TooFewViewers,
    ValidationError,
    WindowOutOfRange,
)
from .keyvalue import dumps as kv_dumps
from .keyvalue import format_float
from .keyvalue import loads as kv_loads
from .models import (
    CohortDataset,
    SimilarityMatrix,
    TwedParams,
    WindowSpec,
)


def pairwise_distance_matrix(
    window_series: dict[str, np.ndarray],
    params: TwedParams,
    n_jobs: int = 1,
) -> np.ndarray:
    """TWED over every unordered viewer pair; symmetric with zero diagonal.

    Cells are independent, so the upper triangle may be computed by several
    threads; sequential and parallel runs produce bit-identical grids.
    """
    ids = list(window_series.keys())
    if len(ids) < 2:
        raise TooFewViewers(len(ids))
    series = [as_point_series(window_series[v]) for v in ids]
    lengths = {len(s) for s in series}
    if len(lengths) > 1:
        raise LengthMismatch(min(lengths), max(lengths))
    n = len(ids)
    grid = np.zeros((n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            values = list(
                pool.map(lambda ij: twed(series[ij[0]], series[ij[1]], params), pairs)
            )
    else:
        values = [twed(series[i], series[j], params) for i, j in pairs]
    for (i, j), value in zip(pairs, values):
        grid[i, j] = value
        grid[j, i] = value
    return grid


def normalize_to_similarity(distances: np.ndarray) -> np.ndarray:
    """Map a distance grid to similarities: s = 1 - d / max(d).

    A degenerate all-zero grid maps to all ones (every viewer identical).
    """
    d = np.asarray(distances, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationError("distance grid must be square")
    if (d < 0).any():
        i, j = np.argwhere(d < 0)[0]
        raise NegativeDistance(int(i), int(j), float(d[i, j]))
    top = d.max() if d.size else 0.0
    if top == 0.0:
        return np.ones_like(d)
    return 1.0 - d / top


def window_frame_range(cohort: CohortDataset, window: WindowSpec) -> tuple[int, int]:
    """Frame slice [lo, hi) for a window; raises when it leaves the video."""
    fps = cohort.frame_rate_fps
    lo = int(round(window.start_s * fps))
    count = int(round(window.length_s * fps))
    if count <= 0 or lo < 0 or lo + count > cohort.n_frames:
        raise WindowOutOfRange(window.start_s, window.length_s, cohort.duration_s)
    return lo, lo + count


def window_points(cohort: CohortDataset, window: WindowSpec) -> dict[str, np.ndarray]:
    lo, hi = window_frame_range(cohort, window)
    return {vid: s.points()[lo:hi] for vid, s in cohort.viewers.items()}


def compute_similarity_matrix(
    cohort: CohortDataset,
    window: WindowSpec,
    params: TwedParams,
    n_jobs: int = 1,
) -> SimilarityMatrix:
    grid = pairwise_distance_matrix(window_points(cohort, window), params, n_jobs)
    return SimilarityMatrix(
        viewer_ids=cohort.viewer_ids(),
        values=normalize_to_similarity(grid),
        window=window,
        params=params,
    )


def compute_window_matrices(
    cohort: CohortDataset,
    windows: list[WindowSpec],
    params: TwedParams,
    n_jobs: int = 1,
    normalization: str = "per-window",
) -> list[SimilarityMatrix]:
    """One matrix per window.

    With normalization="per-window" (the default) each window is scaled by
    its own largest distance; "global" divides every window by the largest
    distance across all of them, trading the exact-zero guarantee for
    cross-window comparability.
    """
    if normalization == "per-window":
        return [compute_similarity_matrix(cohort, w, params, n_jobs) for w in windows]
    if normalization != "global":
        raise ValidationError("normalization must be 'per-window' or 'global'")
    grids = [
        pairwise_distance_matrix(window_points(cohort, w), params, n_jobs)
        for w in windows
    ]
    top = max((g.max() for g in grids), default=0.0)
    out = []
    for w, grid in zip(windows, grids):
        values = np.ones_like(grid) if top == 0.0 else 1.0 - grid / top
        out.append(
            SimilarityMatrix(
                viewer_ids=cohort.viewer_ids(),
                values=values,
                window=w,
                params=params,
            )
        )
    return out


def full_windows(cohort: CohortDataset, window_s: float) -> list[WindowSpec]:
    """Consecutive windows of window_s covering the video; partial tail dropped."""
    if window_s <= 0:
        raise ValidationError("window_s must be positive")
    count = int(cohort.duration_s // window_s)
    return [WindowSpec(start_s=i * window_s, length_s=window_s) for i in range(count)]


# --- file format ------------------------------------------------------------

def matrix_to_csv(sim: SimilarityMatrix) -> str:
    """Viewer-labelled CSV; floats carry full precision and round-trip."""
    lines = ["," + ",".join(sim.viewer_ids)]
    for vid, row in zip(sim.viewer_ids, sim.values):
        lines.append(vid + "," + ",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> tuple[list[str], np.ndarray]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty matrix file")
    ids = lines[0].split(",")[1:]
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        rows.append([float(c) for c in cells[1:]])
    values = np.array(rows)
    if values.shape != (len(ids), len(ids)):
        raise ValidationError("matrix file shape mismatch")
    return ids, values


def matrix_sidecar(
    sim: SimilarityMatrix,
    video_id: str,
    frame_rate_fps: float,
    normalization: str = "per-window-max",
) -> str:
    note = (
        "similarities are normalized by this window's largest distance "
        "and are not comparable across windows"
        if normalization == "per-window-max"
        else "similarities share one normalizing maximum across all windows"
    )
    return kv_dumps(
        {
            "video_id": video_id,
            "frame_rate_fps": frame_rate_fps,
            "window_start_s": sim.window.start_s,
            "window_length_s": sim.window.length_s,
            "lambda": sim.params.lam,
            "gamma": sim.params.gamma,
            "normalization": normalization,
            "note": note,
        }
    )


def matrix_from_files(csv_text: str, sidecar_text: str) -> SimilarityMatrix:
    ids, values = matrix_from_csv(csv_text)
    meta = kv_loads(sidecar_text)
    return SimilarityMatrix(
        viewer_ids=ids,
        values=values,
        window=WindowSpec(
            start_s=float(meta["window_start_s"]),
            length_s=float(meta["window_length_s"]),
        ),
        params=TwedParams(lam=float(meta["lambda"]), gamma=float(meta["gamma"])),
    )


def matrix_filename(params: TwedParams, window: WindowSpec) -> str:
    return (
        f"sim_{params.lam:g}_{params.gamma:g}"
        f"_{window.start_s:g}_{window.length_s:g}.csv"
    )
