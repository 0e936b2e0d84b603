"""Fixation events to fixed-rate, smoothed, gap-handled 2D trajectories.

Pipeline order is rasterize -> triangular_smooth -> exclude_viewers ->
fill_missing -> downsample. Smoothing runs before filling on purpose: the
fill value (0,0) is the top-left screen corner, not data, and must never be
averaged into real positions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllExcluded,
    EmptySeries,
    OverlappingFixations,
    UpsampleRequested,
    ValidationError,
)
from .models import (
    CohortDataset,
    FixationSeries,
    PreprocessConfig,
    RawFixationRecord,
)


def rasterize(
    records: list[RawFixationRecord],
    source_rate_hz: float,
    duration_ms: int,
    viewer_id: str = "",
) -> FixationSeries:
    """Sample fixation events on a fixed grid of source_rate_hz.

    Sample k takes the position of the fixation whose [start, end) interval
    contains k/source_rate_hz; when two fixations overlap by at most one
    sample period the earlier one wins the contested sample. Samples covered
    by no fixation, or by a missing-flagged fixation, get mask=False.
    """
    if source_rate_hz <= 0:
        raise ValidationError("source_rate_hz must be positive")
    records = sorted(records, key=lambda r: r.start_ms)
    period_s = 1.0 / source_rate_hz
    for prev, cur in zip(records, records[1:]):
        overlap_s = prev.end_ms / 1000.0 - cur.start_ms / 1000.0
        if overlap_s > period_s:
            raise OverlappingFixations(prev.end_ms, cur.start_ms)

    n = int(round(duration_ms / 1000.0 * source_rate_hz))
    xs = np.full(n, np.nan)
    ys = np.full(n, np.nan)
    mask = np.zeros(n, dtype=bool)
    if records and n > 0:
        t = np.arange(n) / source_rate_hz
        starts = np.array([r.start_ms for r in records]) / 1000.0
        ends = np.array([r.end_ms for r in records]) / 1000.0
        cand = np.searchsorted(starts, t, side="right") - 1
        # prefer the earlier record on contested samples
        for _ in range(len(records)):
            back = (cand >= 1) & (t < ends[np.maximum(cand - 1, 0)])
            if not back.any():
                break
            cand[back] -= 1
        contained = (cand >= 0) & (t < ends[np.maximum(cand, 0)])
        rec_x = np.array([r.x_px for r in records])
        rec_y = np.array([r.y_px for r in records])
        rec_obs = np.array([not r.missing for r in records])
        idx = cand[contained]
        xs[contained] = rec_x[idx]
        ys[contained] = rec_y[idx]
        mask[contained] = rec_obs[idx]
        xs[~mask] = np.nan
        ys[~mask] = np.nan
    return FixationSeries(
        viewer_id=viewer_id,
        frame_rate_fps=source_rate_hz,
        start_ms=0,
        xs=xs,
        ys=ys,
        mask=mask,
    )


def _kernel_taps(window_ms: float, frame_rate_fps: float) -> int:
    k = int(round(window_ms * frame_rate_fps / 1000.0))
    if k % 2 == 0:
        k -= 1
    return max(k, 1)


def triangular_smooth(series: FixationSeries, window_ms: float) -> FixationSeries:
    """Convolve both coordinates with a triangular kernel.

    The kernel has k taps (window_ms at the series rate, rounded down to odd,
    minimum 1) with weights 1,2,..,peak,..,2,1 normalized to sum 1. Missing
    samples contribute nothing; the remaining weights are renormalized, which
    also handles the boundaries. Masked-out frames stay masked.
    """
    if window_ms < 0:
        raise ValidationError("window_ms must be >= 0")
    k = _kernel_taps(window_ms, series.frame_rate_fps)
    if k == 1 or series.n_frames == 0:
        return FixationSeries(
            viewer_id=series.viewer_id,
            frame_rate_fps=series.frame_rate_fps,
            start_ms=series.start_ms,
            xs=series.xs.copy(),
            ys=series.ys.copy(),
            mask=series.mask.copy(),
        )
    taps = np.arange(1, k + 1, dtype=float)
    weights = np.minimum(taps, taps[::-1])
    obs = series.mask.astype(float)
    den = np.convolve(obs, weights, mode="same")

    def smooth_axis(values: np.ndarray) -> np.ndarray:
        num = np.convolve(np.where(series.mask, values, 0.0), weights, mode="same")
        out = np.full_like(values, np.nan)
        out[series.mask] = num[series.mask] / den[series.mask]
        return out

    return FixationSeries(
        viewer_id=series.viewer_id,
        frame_rate_fps=series.frame_rate_fps,
        start_ms=series.start_ms,
        xs=smooth_axis(series.xs),
        ys=smooth_axis(series.ys),
        mask=series.mask.copy(),
    )


def missing_ratio(series: FixationSeries) -> float:
    """Fraction of frames without an observed position."""
    if series.n_frames == 0:
        raise EmptySeries()
    return float(np.count_nonzero(~series.mask)) / series.n_frames


@dataclass
class ExclusionReport:
    """Who was dropped for excessive missing data, and every viewer's ratio."""

    threshold: float
    removed: list[tuple[str, float]]
    ratios: dict[str, float]


def exclude_viewers(
    cohort: CohortDataset, threshold: float
) -> tuple[CohortDataset, ExclusionReport]:
    """Drop viewers whose missing ratio is strictly above the threshold."""
    if not (0.0 < threshold < 1.0):
        raise ValidationError("threshold must be in (0,1)")
    ratios = {vid: missing_ratio(s) for vid, s in cohort.viewers.items()}
    removed = [(vid, r) for vid, r in ratios.items() if r > threshold]
    removed_ids = {vid for vid, _ in removed}
    kept = {vid: s for vid, s in cohort.viewers.items() if vid not in removed_ids}
    if not kept:
        raise AllExcluded(threshold)
    eeg = None
    if cohort.eeg is not None:
        eeg = {vid: rec for vid, rec in cohort.eeg.items() if vid in kept}
    trimmed = CohortDataset(
        video_id=cohort.video_id,
        frame_rate_fps=cohort.frame_rate_fps,
        screen=cohort.screen,
        viewers=kept,
        eeg=eeg,
        answers=cohort.answers,
    )
    return trimmed, ExclusionReport(threshold=threshold, removed=removed, ratios=ratios)


def fill_missing(series: FixationSeries, fill_value: float) -> FixationSeries:
    """Replace masked-out coordinates with fill_value; the mask is kept for
    provenance."""
    return FixationSeries(
        viewer_id=series.viewer_id,
        frame_rate_fps=series.frame_rate_fps,
        start_ms=series.start_ms,
        xs=np.where(series.mask, series.xs, fill_value),
        ys=np.where(series.mask, series.ys, fill_value),
        mask=series.mask.copy(),
    )


def interpolate_gaps(series: FixationSeries, max_gap_ms: float) -> FixationSeries:
    """Linearly bridge interior gaps of at most max_gap_ms.

    Interpolated frames get plausible coordinates but stay masked, so the
    missing ratio (and the exclusion rule) still see them. Leading/trailing
    gaps are left for the fill step.
    """
    xs, ys = series.xs.copy(), series.ys.copy()
    mask = series.mask
    n = series.n_frames
    max_gap_frames = max_gap_ms * series.frame_rate_fps / 1000.0
    i = 0
    while i < n:
        if mask[i]:
            i += 1
            continue
        j = i
        while j < n and not mask[j]:
            j += 1
        if i > 0 and j < n and (j - i) <= max_gap_frames:
            span = j - (i - 1)
            for k in range(i, j):
                frac = (k - (i - 1)) / span
                xs[k] = xs[i - 1] + frac * (xs[j] - xs[i - 1])
                ys[k] = ys[i - 1] + frac * (ys[j] - ys[i - 1])
        i = j
    return FixationSeries(
        viewer_id=series.viewer_id,
        frame_rate_fps=series.frame_rate_fps,
        start_ms=series.start_ms,
        xs=xs,
        ys=ys,
        mask=mask.copy(),
    )


def downsample(series: FixationSeries, target_fps: float) -> FixationSeries:
    """Decimate to target_fps by nearest-timestamp sample selection.

    Output frame j takes the source sample whose timestamp is nearest
    j/target_fps, ties toward the earlier sample; the mask value travels with
    the chosen sample. Fixations are piecewise constant, so no averaging.
    """
    source_fps = series.frame_rate_fps
    if target_fps > source_fps:
        raise UpsampleRequested(source_fps, target_fps)
    n_src = series.n_frames
    n_out = int(round(n_src * target_fps / source_fps))
    if n_src == 0 or n_out == 0:
        return FixationSeries(
            viewer_id=series.viewer_id,
            frame_rate_fps=target_fps,
            start_ms=series.start_ms,
            xs=np.empty(0),
            ys=np.empty(0),
            mask=np.empty(0, dtype=bool),
        )
    t_src = np.arange(n_src) / source_fps
    t_out = np.arange(n_out) / target_fps
    right = np.searchsorted(t_src, t_out, side="left")
    left = np.clip(right - 1, 0, n_src - 1)
    right = np.clip(right, 0, n_src - 1)
    d_left = t_out - t_src[left]
    d_right = t_src[right] - t_out
    choose_left = d_left <= d_right
    idx = np.where(choose_left, left, right)
    return FixationSeries(
        viewer_id=series.viewer_id,
        frame_rate_fps=target_fps,
        start_ms=series.start_ms,
        xs=series.xs[idx],
        ys=series.ys[idx],
        mask=series.mask[idx],
    )


def preprocess_cohort(
    records_by_viewer: dict[str, list[RawFixationRecord]],
    source_rate_hz: float,
    config: PreprocessConfig,
    *,
    video_id: str,
    screen,
    eeg=None,
    answers=None,
) -> tuple[CohortDataset, ExclusionReport]:
    """Run the full per-viewer pipeline over a cohort.

    All viewers are rasterized to a shared duration (the latest fixation end
    in the cohort) so the resulting series align frame by frame.
    """
    if not records_by_viewer:
        raise EmptySeries("cohort")
    duration_ms = max(
        (r.end_ms for recs in records_by_viewer.values() for r in recs),
        default=0,
    )
    smoothed = {}
    for vid in sorted(records_by_viewer):
        series = rasterize(
            records_by_viewer[vid], source_rate_hz, duration_ms, viewer_id=vid
        )
        smoothed[vid] = triangular_smooth(series, config.smooth_window_ms)
    cohort = CohortDataset(
        video_id=video_id,
        frame_rate_fps=source_rate_hz,
        screen=screen,
        viewers=smoothed,
        eeg=eeg,
        answers=answers,
    )
    cohort, report = exclude_viewers(cohort, config.missing_threshold)
    processed = {}
    for vid, series in cohort.viewers.items():
        if config.fill_mode == "interpolate":
            series = interpolate_gaps(series, config.interp_max_gap_ms)
        series = fill_missing(series, config.fill_value)
        processed[vid] = downsample(series, config.target_fps)
    final = CohortDataset(
        video_id=cohort.video_id,
        frame_rate_fps=config.target_fps,
        screen=cohort.screen,
        viewers=processed,
        eeg=cohort.eeg,
        answers=cohort.answers,
    )
    return final, report


def window_table(window_series: dict[str, FixationSeries]) -> str:
    """Consolidated per-window CSV: rows are frames, columns viewerID_x,
    viewerID_y. Masked frames are exported with their filled values."""
    ids = list(window_series.keys())
    header = ",".join(f"{vid}_{axis}" for vid in ids for axis in ("x", "y"))
    n = next(iter(window_series.values())).n_frames if window_series else 0
    lines = [header]
    for k in range(n):
        cells = []
        for vid in ids:
            s = window_series[vid]
            cells.append(repr(float(s.xs[k])))
            cells.append(repr(float(s.ys[k])))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def axis_table(series: FixationSeries, axis: str) -> str:
    """Single-axis value file for one viewer and one window."""
    values = series.xs if axis == "x" else series.ys
    return "\n".join(repr(float(v)) for v in values) + "\n"
