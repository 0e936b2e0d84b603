"""Command-line driver: preprocess | similarity | cluster | sweep |
correlate | serve.

Options come from an optional plain-text key = value config file plus flag
overrides. Exit codes: 0 success, 2 validation error, 1 I/O error. Every
command writes deterministic bytes, so re-runs over identical inputs are
idempotent.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import keyvalue
from .analysis import (
    DEFAULT_SWEEP_VALUES,
    answer_penalty_matrix,
    correlate,
    parameter_sweep,
    scatter_table,
    subset_penalty,
    subset_similarity,
    sweep_manifest,
)
from .cluster import build_graph, detect_communities, export_gephi, partition_table
from .errors import ValidationError
from .ingest import (
    parse_answer_sheet,
    parse_display_coords,
    parse_eeg,
    parse_fixation_table,
)
from .models import (
    FixationSeries,
    PreprocessConfig,
    ScreenGeometry,
    TwedParams,
    WindowSpec,
)
from .preprocess import axis_table, preprocess_cohort, window_table
from .simmatrix import (
    compute_similarity_matrix,
    compute_window_matrices,
    full_windows,
    matrix_filename,
    window_frame_range,
)
from .store import (
    load_matrix,
    load_preprocessed,
    save_matrix,
    save_preprocessed,
    write_text,
)

DEFAULT_SCREEN = ScreenGeometry(width_px=1024, height_px=768)


@dataclass
class RunConfig:
    fixation_dir: Path | None = None
    asc_file: Path | None = None
    eeg_dir: Path | None = None
    answers_file: Path | None = None
    out_dir: Path = Path("out")
    video_id: str = "video"
    source_rate_hz: float = 120.0
    window_s: float = 30.0
    window_start_s: float = 0.0
    target_fps: float = 32.0
    lam: float = 5000.0
    gamma: float = 5000.0
    scales: list[float] = field(default_factory=lambda: [1.0])
    seed: int = 0
    smooth_window_ms: float = 80.0
    missing_threshold: float = 0.20
    fill_value: float = 0.0
    fill_mode: str = "zero"
    interp_max_gap_ms: float = 500.0
    normalization: str = "per-window"
    lambda_values: list[float] = field(default_factory=lambda: list(DEFAULT_SWEEP_VALUES))
    gamma_values: list[float] = field(default_factory=lambda: list(DEFAULT_SWEEP_VALUES))
    questions: list[str] | None = None
    eeg_sample_rate_hz: float = 256.0
    eeg_start_offset_ms: int = 0
    port: int = 8000
    ui_dir: Path | None = None
    emit_axis_files: bool = False

    def preprocess_config(self) -> PreprocessConfig:
        return PreprocessConfig(
            smooth_window_ms=self.smooth_window_ms,
            missing_threshold=self.missing_threshold,
            target_fps=self.target_fps,
            fill_value=self.fill_value,
            fill_mode=self.fill_mode,
            interp_max_gap_ms=self.interp_max_gap_ms,
        )

    def params(self) -> TwedParams:
        return TwedParams(lam=self.lam, gamma=self.gamma)


_PATH_KEYS = {"fixation_dir", "asc_file", "eeg_dir", "answers_file", "out_dir", "ui_dir"}
_FLOAT_LIST_KEYS = {"scales", "lambda_values", "gamma_values"}
_KEY_ALIASES = {"lambda": "lam"}


def _coerce(key: str, raw: str):
    if key in _PATH_KEYS:
        return Path(raw)
    if key in _FLOAT_LIST_KEYS:
        return [float(v) for v in raw.split(",") if v.strip()]
    if key == "questions":
        return [v.strip() for v in raw.split(",") if v.strip()]
    if key == "emit_axis_files":
        return raw.lower() in ("1", "true", "yes")
    if key in ("seed", "port", "eeg_start_offset_ms"):
        return int(raw)
    if key in ("video_id", "fill_mode", "normalization"):
        return raw
    return float(raw)


def load_config(path: Path | None, overrides: dict) -> RunConfig:
    config = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    if path is not None:
        raw = keyvalue.loads(Path(path).read_text(encoding="utf-8"))
        for key, value in raw.items():
            key = _KEY_ALIASES.get(key, key)
            if key not in known:
                raise ValidationError(f"unknown config key {key!r}")
            setattr(config, key, _coerce(key, value))
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    return config


# --- commands ---------------------------------------------------------------

def cmd_preprocess(config: RunConfig) -> int:
    if config.fixation_dir is None:
        raise ValidationError("fixation_dir is required for preprocess")
    fix_dir = Path(config.fixation_dir)
    if not fix_dir.is_dir():
        raise FileNotFoundError(f"fixation dir not found: {fix_dir}")
    records_by_viewer = {}
    for path in sorted(list(fix_dir.glob("*.csv")) + list(fix_dir.glob("*.tsv"))):
        viewer_id = path.stem.split("_")[0]
        if viewer_id in records_by_viewer:
            raise ValidationError(f"duplicate viewer id {viewer_id!r} in {fix_dir}")
        records_by_viewer[viewer_id] = parse_fixation_table(
            path.read_text(encoding="utf-8"), viewer_id
        )
    if not records_by_viewer:
        raise ValidationError(f"no fixation tables (*.csv, *.tsv) in {fix_dir}")

    screen = DEFAULT_SCREEN
    if config.asc_file is not None:
        screen = parse_display_coords(Path(config.asc_file).read_text(encoding="utf-8"))

    eeg = None
    if config.eeg_dir is not None:
        eeg_dir = Path(config.eeg_dir)
        if not eeg_dir.is_dir():
            raise FileNotFoundError(f"eeg dir not found: {eeg_dir}")
        eeg = {}
        for path in sorted(list(eeg_dir.glob("*.csv")) + list(eeg_dir.glob("*.txt"))):
            eeg[path.stem.split("_")[0]] = parse_eeg(
                path.read_text(encoding="utf-8"),
                config.eeg_sample_rate_hz,
                config.eeg_start_offset_ms,
            )

    answers = None
    if config.answers_file is not None:
        answers = parse_answer_sheet(
            Path(config.answers_file).read_text(encoding="utf-8")
        )

    cohort, report = preprocess_cohort(
        records_by_viewer,
        config.source_rate_hz,
        config.preprocess_config(),
        video_id=config.video_id,
        screen=screen,
        eeg=eeg,
        answers=answers,
    )
    save_preprocessed(cohort, report, Path(config.out_dir))

    windows_dir = Path(config.out_dir) / "preprocessed" / "windows"
    for window in full_windows(cohort, config.window_s):
        lo, hi = window_frame_range(cohort, window)
        sliced = {
            vid: _slice_series(cohort.viewers[vid], lo, hi)
            for vid in sorted(cohort.viewers)
        }
        name = f"{window.start_s:g}_{window.length_s:g}"
        write_text(windows_dir / f"{name}.csv", window_table(sliced))
        if config.emit_axis_files:
            for vid, series in sliced.items():
                for axis in ("x", "y"):
                    write_text(
                        windows_dir / "axis" / f"{vid}_{name}_{axis}.txt",
                        axis_table(series, axis),
                    )

    for vid, ratio in report.removed:
        print(f"excluded {vid}: missing ratio {ratio:.4f} > {report.threshold}")
    print(
        f"preprocessed {len(cohort.viewers)} viewers "
        f"({len(report.removed)} excluded) -> {config.out_dir}"
    )
    return 0


def _slice_series(series, lo: int, hi: int) -> FixationSeries:
    return FixationSeries(
        viewer_id=series.viewer_id,
        frame_rate_fps=series.frame_rate_fps,
        start_ms=series.start_ms + int(round(lo / series.frame_rate_fps * 1000.0)),
        xs=series.xs[lo:hi],
        ys=series.ys[lo:hi],
        mask=series.mask[lo:hi],
    )


def cmd_similarity(config: RunConfig) -> int:
    cohort = load_preprocessed(Path(config.out_dir))
    windows = full_windows(cohort, config.window_s)
    if not windows:
        raise ValidationError(
            f"window_s {config.window_s} longer than the {cohort.duration_s:g}s video"
        )
    normalization_tag = (
        "per-window-max" if config.normalization == "per-window" else "global-max"
    )
    matrices = compute_window_matrices(
        cohort, windows, config.params(), normalization=config.normalization
    )
    out = Path(config.out_dir) / "matrices"
    for sim in matrices:
        save_matrix(
            sim,
            out,
            matrix_filename(sim.params, sim.window),
            cohort.video_id,
            cohort.frame_rate_fps,
            normalization_tag,
        )
    print(f"wrote {len(matrices)} similarity matrices -> {out}")
    return 0


def cmd_cluster(config: RunConfig) -> int:
    matrices_dir = Path(config.out_dir) / "matrices"
    paths = sorted(matrices_dir.glob("*.csv"))
    if not paths:
        raise ValidationError(
            f"no matrices in {matrices_dir}; run 'gazesim similarity' first"
        )
    clusters_dir = Path(config.out_dir) / "clusters"
    for path in paths:
        sim = load_matrix(path)
        graph = build_graph(sim)
        sweep = detect_communities(graph, config.scales, config.seed)
        window_dir = clusters_dir / f"{sim.window.start_s:g}_{sim.window.length_s:g}"
        write_text(window_dir / "partitions.csv", partition_table(sweep))
        edges_csv = None
        for scale, part in zip(sweep.scales, sweep.partitions):
            nodes_csv, edges_csv = export_gephi(graph, part)
            write_text(window_dir / f"nodes_{scale:g}.csv", nodes_csv)
        if edges_csv is not None:  # edges are partition-independent
            write_text(window_dir / "edges.csv", edges_csv)
    print(f"clustered {len(paths)} windows -> {clusters_dir}")
    return 0


def cmd_sweep(config: RunConfig) -> int:
    cohort = load_preprocessed(Path(config.out_dir))
    window = WindowSpec(start_s=config.window_start_s, length_s=config.window_s)
    grid = parameter_sweep(cohort, window, config.lambda_values, config.gamma_values)
    sweep_dir = Path(config.out_dir) / "sweep"
    paths = {}
    for key in sorted(grid.results):
        sim = grid.results[key]
        filename = matrix_filename(sim.params, sim.window)
        save_matrix(sim, sweep_dir, filename, cohort.video_id, cohort.frame_rate_fps)
        paths[key] = filename
    write_text(sweep_dir / "manifest.csv", sweep_manifest(grid, paths))
    print(f"swept {len(grid.results)} parameter cells -> {sweep_dir}")
    return 0


def cmd_correlate(config: RunConfig) -> int:
    cohort = load_preprocessed(Path(config.out_dir))
    answers = cohort.answers
    if answers is None and config.answers_file is not None:
        answers = parse_answer_sheet(
            Path(config.answers_file).read_text(encoding="utf-8")
        )
    if answers is None:
        raise ValidationError("no answer sheet: pass answers_file or rerun preprocess")
    if config.questions is not None and not config.questions:
        raise ValidationError("question set must be non-empty")
    window = WindowSpec(start_s=config.window_start_s, length_s=config.window_s)
    sim = compute_similarity_matrix(cohort, window, config.params())
    penalty = answer_penalty_matrix(answers, config.questions)
    common = [v for v in sim.viewer_ids if v in set(penalty.viewer_ids)]
    if len(common) < 3:
        raise ValidationError(
            "fewer than 3 viewers shared between answers and cohort"
        )
    result = correlate(subset_penalty(penalty, common), subset_similarity(sim, common))
    corr_dir = Path(config.out_dir) / "correlate"
    write_text(corr_dir / "scatter.csv", scatter_table(result))
    write_text(
        corr_dir / "stats.txt",
        keyvalue.dumps(
            {
                "n_samples": result.n_samples,
                "pearson_r": "absent" if result.r is None else result.r,
                "lambda": config.lam,
                "gamma": config.gamma,
                "window_start_s": window.start_s,
                "window_length_s": window.length_s,
                "questions": ",".join(config.questions or answers.question_ids),
            }
        ),
    )
    r_text = "absent (zero variance)" if result.r is None else f"{result.r:.4f}"
    print(f"{result.n_samples} pairs, Pearson r = {r_text} -> {corr_dir}")
    return 0


def cmd_serve(config: RunConfig) -> int:
    import uvicorn

    from .server import build_app

    app = build_app(Path(config.out_dir), ui_dir=config.ui_dir)
    uvicorn.run(app, host="127.0.0.1", port=config.port, log_level="warning")
    return 0


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazesim",
        description="Eye-movement similarity, clustering and exploration toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "preprocess": "parse + rasterize + smooth + exclude + fill + downsample",
        "similarity": "per-window TWED similarity matrices",
        "cluster": "multi-scale community detection over saved matrices",
        "sweep": "lambda/gamma grid over one window",
        "correlate": "answer-penalty vs similarity scatter",
        "serve": "read-only HTTP service for the explorer UI",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, default=None, help="key = value file")
        p.add_argument("--out", dest="out_dir", type=Path, default=None)
        p.add_argument("--fixations", dest="fixation_dir", type=Path, default=None)
        p.add_argument("--asc", dest="asc_file", type=Path, default=None)
        p.add_argument("--eeg", dest="eeg_dir", type=Path, default=None)
        p.add_argument("--answers", dest="answers_file", type=Path, default=None)
        p.add_argument("--video-id", dest="video_id", default=None)
        p.add_argument("--window-s", dest="window_s", type=float, default=None)
        p.add_argument(
            "--window-start", dest="window_start_s", type=float, default=None
        )
        p.add_argument("--fps", dest="target_fps", type=float, default=None)
        p.add_argument(
            "--source-rate", dest="source_rate_hz", type=float, default=None
        )
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--gamma", dest="gamma", type=float, default=None)
        p.add_argument("--scales", dest="scales", default=None,
                       help="comma-separated scale values")
        p.add_argument("--seed", dest="seed", type=int, default=None)
        p.add_argument("--port", dest="port", type=int, default=None)
        p.add_argument("--questions", dest="questions", default=None,
                       help="comma-separated question ids")
        p.add_argument("--ui-dir", dest="ui_dir", type=Path, default=None)
        p.add_argument(
            "--emit-axis-files",
            dest="emit_axis_files",
            action="store_const",
            const=True,
            default=None,
        )
    return parser


_COMMANDS = {
    "preprocess": cmd_preprocess,
    "similarity": cmd_similarity,
    "cluster": cmd_cluster,
    "sweep": cmd_sweep,
    "correlate": cmd_correlate,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "config")
    }
    if overrides.get("scales") is not None:
        overrides["scales"] = [float(v) for v in overrides["scales"].split(",")]
    if overrides.get("questions") is not None:
        overrides["questions"] = [
            v.strip() for v in overrides["questions"].split(",") if v.strip()
        ]
    try:
        config = load_config(args.config, overrides)
        return _COMMANDS[args.command](config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
