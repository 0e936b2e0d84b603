"""Domain records shared by the pipeline stages.

All records are plain dataclasses around numpy arrays. They are validated on
construction and treated as immutable afterwards (nothing in the toolkit
mutates a record it did not just build).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass
class RawFixationRecord:
    """One fixation event as exported by the tracker.

    Times are integer milliseconds, positions are screen pixels relative to
    the top-left corner. ``missing`` marks rows whose X/Y cells were empty or
    non-numeric; their coordinates are NaN.
    """

    start_ms: int
    end_ms: int
    duration_ms: int
    x_px: float
    y_px: float
    missing: bool = False

    def __post_init__(self):
        if self.start_ms >= self.end_ms:
            raise ValidationError(
                f"fixation start {self.start_ms} not before end {self.end_ms}"
            )
        if self.duration_ms != self.end_ms - self.start_ms:
            raise ValidationError("duration_ms must equal end_ms - start_ms")
        if not self.missing and not (
            math.isfinite(self.x_px) and math.isfinite(self.y_px)
        ):
            raise ValidationError("non-missing fixation has non-finite position")

    def __eq__(self, other):
        if not isinstance(other, RawFixationRecord):
            return NotImplemented
        timing = (self.start_ms, self.end_ms, self.duration_ms, self.missing)
        if timing != (other.start_ms, other.end_ms, other.duration_ms, other.missing):
            return False
        # missing records carry NaN coordinates; they are interchangeable
        return self.missing or (self.x_px, self.y_px) == (other.x_px, other.y_px)


@dataclass
class ScreenGeometry:
    width_px: int
    height_px: int

    def __post_init__(self):
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValidationError("screen dimensions must be positive")


@dataclass
class EegRecording:
    """Multi-channel sampled signal aligned to video time.

    ``samples`` is time-major: rows are samples, columns are channels.
    ``start_offset_ms`` places sample 0 on the video timeline.
    """

    sample_rate_hz: float
    channels: list[str]
    samples: np.ndarray
    start_offset_ms: int = 0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.sample_rate_hz <= 0:
            raise ValidationError("sample_rate_hz must be positive")
        if self.samples.ndim != 2 or self.samples.shape[1] != len(self.channels):
            raise ValidationError(
                "samples must be a 2D matrix with one column per channel"
            )

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def duration_ms(self) -> float:
        return self.n_samples / self.sample_rate_hz * 1000.0


@dataclass
class AnswerSheet:
    viewer_ids: list[str]
    question_ids: list[str]
    correctness: np.ndarray  # bool, shape (viewers, questions)

    def __post_init__(self):
        self.correctness = np.asarray(self.correctness, dtype=bool)
        if self.correctness.shape != (len(self.viewer_ids), len(self.question_ids)):
            raise ValidationError(
                "correctness table shape does not match viewer/question ids"
            )


@dataclass
class FixationSeries:
    """Fixed-rate 2D gaze trajectory for one viewer.

    ``mask[k]`` is True where frame k carries an observed position; masked-out
    frames may hold NaN until a fill step runs. ``start_ms`` is the video time
    of frame 0.
    """

    viewer_id: str
    frame_rate_fps: float
    start_ms: int
    xs: np.ndarray
    ys: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        self.mask = np.asarray(self.mask, dtype=bool)
        if not (len(self.xs) == len(self.ys) == len(self.mask)):
            raise ValidationError("xs, ys, mask must have equal length")
        if self.frame_rate_fps <= 0:
            raise ValidationError("frame_rate_fps must be positive")
        if self.mask.any():
            obs_x = self.xs[self.mask]
            obs_y = self.ys[self.mask]
            if not (np.isfinite(obs_x).all() and np.isfinite(obs_y).all()):
                raise ValidationError("observed samples must be finite")

    @property
    def n_frames(self) -> int:
        return len(self.xs)

    def points(self) -> np.ndarray:
        """Frames as an (n, 2) float array."""
        return np.column_stack([self.xs, self.ys])


@dataclass
class PreprocessConfig:
    """Knobs of the fixation-to-trajectory pipeline.

    ``fill_mode`` selects how masked frames are filled before distance
    computation: "zero" writes ``fill_value`` everywhere, "interpolate"
    first bridges gaps of at most ``interp_max_gap_ms`` linearly and
    zero-fills the rest.
    """

    smooth_window_ms: float = 80.0
    missing_threshold: float = 0.20
    target_fps: float = 32.0
    fill_value: float = 0.0
    fill_mode: str = "zero"
    interp_max_gap_ms: float = 500.0

    def __post_init__(self):
        if not (0.0 < self.missing_threshold < 1.0):
            raise ValidationError("missing_threshold must be in (0,1)")
        if self.smooth_window_ms < 0:
            raise ValidationError("smooth_window_ms must be >= 0")
        if self.fill_mode not in ("zero", "interpolate"):
            raise ValidationError("fill_mode must be 'zero' or 'interpolate'")


@dataclass
class CohortDataset:
    video_id: str
    frame_rate_fps: float
    screen: ScreenGeometry
    viewers: dict[str, FixationSeries]
    eeg: dict[str, EegRecording] | None = None
    answers: AnswerSheet | None = None

    def __post_init__(self):
        lengths = {s.n_frames for s in self.viewers.values()}
        rates = {s.frame_rate_fps for s in self.viewers.values()}
        if len(lengths) > 1 or len(rates) > 1:
            raise ValidationError(
                "all viewer series must share frame rate and frame count"
            )

    @property
    def n_frames(self) -> int:
        if not self.viewers:
            return 0
        return next(iter(self.viewers.values())).n_frames

    @property
    def duration_s(self) -> float:
        return self.n_frames / self.frame_rate_fps

    def viewer_ids(self) -> list[str]:
        return list(self.viewers.keys())


@dataclass
class TwedParams:
    """Deletion penalty and per-frame stiffness, both in pixel units."""

    lam: float
    gamma: float

    def __post_init__(self):
        for name, v in (("lam", self.lam), ("gamma", self.gamma)):
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"{name} must be finite and non-negative")


@dataclass
class WindowSpec:
    start_s: float
    length_s: float

    def __post_init__(self):
        if self.length_s <= 0:
            raise ValidationError("window length must be positive")
        if self.start_s < 0:
            raise ValidationError("window start must be >= 0")


@dataclass
class SimilarityMatrix:
    """Per-window pairwise viewer similarity in [0,1], unit diagonal."""

    viewer_ids: list[str]
    values: np.ndarray
    window: WindowSpec
    params: TwedParams

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.viewer_ids)
        if self.values.shape != (n, n):
            raise ValidationError("similarity grid shape does not match ids")
        if not np.array_equal(self.values, self.values.T):
            raise ValidationError("similarity matrix must be symmetric")
        if not np.all(np.diag(self.values) == 1.0):
            raise ValidationError("similarity diagonal must be all 1")
        if self.values.min() < 0.0 or self.values.max() > 1.0:
            raise ValidationError("similarities must lie in [0,1]")


@dataclass
class CouplingGraph:
    """Weighted undirected graph over viewers; no self-loops."""

    node_ids: list[str]
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        n = len(self.node_ids)
        if self.weights.shape != (n, n):
            raise ValidationError("weight grid shape does not match node ids")
        if not np.array_equal(self.weights, self.weights.T):
            raise ValidationError("weights must be symmetric")
        if (self.weights < 0).any():
            raise ValidationError("weights must be non-negative")
        if np.any(np.diag(self.weights) != 0.0):
            raise ValidationError("diagonal must be zero (no self-loops)")

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)


@dataclass
class Partition:
    """Community assignment with its criterion value at one scale."""

    assignment: dict[str, int]
    q_value: float
    scale: float

    def __post_init__(self):
        ids = sorted(set(self.assignment.values()))
        if ids and ids != list(range(len(ids))):
            raise ValidationError("community ids must be contiguous from 0")

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, c in self.assignment.items():
            out.setdefault(c, []).append(node)
        return out


@dataclass
class ScaleSweep:
    scales: list[float]
    partitions: list[Partition]

    def __post_init__(self):
        if len(self.scales) != len(self.partitions):
            raise ValidationError("one partition per scale required")


@dataclass
class SweepGrid:
    lambda_values: list[float]
    gamma_values: list[float]
    results: dict[tuple[float, float], SimilarityMatrix] = field(default_factory=dict)

    def __post_init__(self):
        expected = {
            (l, g) for l in self.lambda_values for g in self.gamma_values
        }
        if self.results and set(self.results.keys()) != expected:
            raise ValidationError("results must hold exactly |lambda| x |gamma| entries")


@dataclass
class PenaltyMatrix:
    """Per viewer pair, count of questions both answered correctly."""

    viewer_ids: list[str]
    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=int)
        n = len(self.viewer_ids)
        if self.counts.shape != (n, n):
            raise ValidationError("counts shape does not match viewer ids")
        if not np.array_equal(self.counts, self.counts.T):
            raise ValidationError("penalty matrix must be symmetric")
