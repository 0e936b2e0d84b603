"""Hyper-parameter sweeps, answer-correctness correlation and trail export.

The sweep grid defaults to the five penalty/stiffness values [0, 1000, 5000,
10000, 20000] crossed with themselves (25 matrices). Pearson r over the
penalty/similarity scatter is reported with its sample count so thin
evidence stays visible; with zero variance on either axis r is absent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    UnknownQuestion,
    UnknownViewer,
    ValidationError,
    ViewerMismatch,
)
from .keyvalue import format_float
from .models import (
    AnswerSheet,
    CohortDataset,
    PenaltyMatrix,
    SimilarityMatrix,
    SweepGrid,
    TwedParams,
    WindowSpec,
)
from .simmatrix import compute_similarity_matrix, window_frame_range

DEFAULT_SWEEP_VALUES = [0.0, 1000.0, 5000.0, 10000.0, 20000.0]


def parameter_sweep(
    cohort: CohortDataset,
    window: WindowSpec,
    lambda_values: list[float] | None = None,
    gamma_values: list[float] | None = None,
    n_jobs: int = 1,
) -> SweepGrid:
    """One similarity matrix per (lambda, gamma) cell over a single window."""
    lambda_values = list(
        DEFAULT_SWEEP_VALUES if lambda_values is None else lambda_values
    )
    gamma_values = list(
        DEFAULT_SWEEP_VALUES if gamma_values is None else gamma_values
    )
    if not lambda_values or not gamma_values:
        raise ValidationError("sweep grids must be non-empty")
    results = {}
    for lam in lambda_values:
        for gamma in gamma_values:
            params = TwedParams(lam=lam, gamma=gamma)
            results[(lam, gamma)] = compute_similarity_matrix(
                cohort, window, params, n_jobs
            )
    return SweepGrid(
        lambda_values=lambda_values, gamma_values=gamma_values, results=results
    )


def answer_penalty_matrix(
    sheet: AnswerSheet, question_ids: list[str] | None = None
) -> PenaltyMatrix:
    """Count, per viewer pair, the questions both answered correctly.

    A pair where either side is wrong contributes nothing; the diagonal is
    each viewer's own correct count.
    """
    if question_ids is None:
        question_ids = list(sheet.question_ids)
    idx = []
    for q in question_ids:
        if q not in sheet.question_ids:
            raise UnknownQuestion(q)
        idx.append(sheet.question_ids.index(q))
    if not idx:
        raise ValidationError("question set must be non-empty")
    correct = sheet.correctness[:, idx].astype(int)
    counts = correct @ correct.T
    return PenaltyMatrix(viewer_ids=list(sheet.viewer_ids), counts=counts)


def subset_penalty(penalty: PenaltyMatrix, viewer_ids: list[str]) -> PenaltyMatrix:
    idx = [penalty.viewer_ids.index(v) for v in viewer_ids]
    return PenaltyMatrix(
        viewer_ids=list(viewer_ids), counts=penalty.counts[np.ix_(idx, idx)]
    )


def subset_similarity(sim: SimilarityMatrix, viewer_ids: list[str]) -> SimilarityMatrix:
    idx = [sim.viewer_ids.index(v) for v in viewer_ids]
    return SimilarityMatrix(
        viewer_ids=list(viewer_ids),
        values=sim.values[np.ix_(idx, idx)],
        window=sim.window,
        params=sim.params,
    )


@dataclass
class CorrelationResult:
    """Paired penalty/similarity samples over unordered viewer pairs."""

    samples: list[tuple[str, str, int, float]]
    r: float | None

    @property
    def n_samples(self) -> int:
        return len(self.samples)


def correlate(penalty: PenaltyMatrix, sim: SimilarityMatrix) -> CorrelationResult:
    """Pearson correlation between answer agreement and gaze similarity."""
    if penalty.viewer_ids != sim.viewer_ids:
        raise ViewerMismatch()
    n = len(penalty.viewer_ids)
    if n < 3:
        raise ValidationError("need at least 3 viewers to correlate")
    samples = []
    for i in range(n):
        for j in range(i + 1, n):
            samples.append(
                (
                    penalty.viewer_ids[i],
                    penalty.viewer_ids[j],
                    int(penalty.counts[i, j]),
                    float(sim.values[i, j]),
                )
            )
    xs = np.array([s[2] for s in samples], dtype=float)
    ys = np.array([s[3] for s in samples], dtype=float)
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        return CorrelationResult(samples=samples, r=None)
    r = float(np.clip(np.corrcoef(xs, ys)[0, 1], -1.0, 1.0))
    return CorrelationResult(samples=samples, r=r)


def scatter_table(result: CorrelationResult) -> str:
    lines = ["viewer_i,viewer_j,penalty,similarity"]
    for vi, vj, count, sim in result.samples:
        lines.append(f"{vi},{vj},{count},{format_float(sim)}")
    return "\n".join(lines) + "\n"


@dataclass
class TrailData:
    """Aligned trail samples for one viewer pair over a window.

    ``intensity`` grows linearly 0 -> 1 along the window, the drawing weight
    for fade-in trail rendering. Masked frames hold NaN and export as empty
    cells rather than fabricated zeros.
    """

    frames: np.ndarray
    x_a: np.ndarray
    y_a: np.ndarray
    x_b: np.ndarray
    y_b: np.ndarray
    intensity: np.ndarray


def trail_plot_data(
    cohort: CohortDataset,
    viewer_a: str,
    viewer_b: str,
    window: WindowSpec,
) -> TrailData:
    for vid in (viewer_a, viewer_b):
        if vid not in cohort.viewers:
            raise UnknownViewer(vid)
    lo, hi = window_frame_range(cohort, window)
    count = hi - lo

    def axis(vid: str, values: np.ndarray) -> np.ndarray:
        s = cohort.viewers[vid]
        out = values[lo:hi].astype(float).copy()
        out[~s.mask[lo:hi]] = np.nan
        return out

    a, b = cohort.viewers[viewer_a], cohort.viewers[viewer_b]
    if count > 1:
        intensity = np.arange(count) / (count - 1)
    else:
        intensity = np.zeros(count)
    return TrailData(
        frames=np.arange(lo, hi),
        x_a=axis(viewer_a, a.xs),
        y_a=axis(viewer_a, a.ys),
        x_b=axis(viewer_b, b.xs),
        y_b=axis(viewer_b, b.ys),
        intensity=intensity,
    )


def trail_table(data: TrailData) -> str:
    """CSV of frame,x_a,y_a,x_b,y_b,intensity; masked cells are empty."""
    lines = ["frame,x_a,y_a,x_b,y_b,intensity"]

    def cell(v: float) -> str:
        return "" if np.isnan(v) else format_float(v)

    for k in range(len(data.frames)):
        lines.append(
            f"{data.frames[k]},{cell(data.x_a[k])},{cell(data.y_a[k])},"
            f"{cell(data.x_b[k])},{cell(data.y_b[k])},"
            f"{format_float(data.intensity[k])}"
        )
    return "\n".join(lines) + "\n"


def sweep_manifest(grid: SweepGrid, paths: dict[tuple[float, float], str]) -> str:
    lines = ["lambda,gamma,path"]
    for lam in grid.lambda_values:
        for gamma in grid.gamma_values:
            lines.append(f"{lam:g},{gamma:g},{paths[(lam, gamma)]}")
    return "\n".join(lines) + "\n"
