"""On-disk layout of a preprocessed dataset.

    out/
      preprocessed/meta.txt           key = value dataset header
      preprocessed/exclusions.csv     viewer_id,missing_ratio,excluded
      preprocessed/gaze/{viewer}.csv  frame,x,y,observed
      preprocessed/windows/*.csv      consolidated per-window frame tables
      eeg/{viewer}.csv + .meta        optional EEG matrices
      answers.csv                     optional normalized answer sheet
      matrices/, clusters/, sweep/, correlate/   stage outputs

Writers are deterministic: sorted orders, repr floats, "\n" newlines, so a
re-run over identical inputs is byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import keyvalue
from .errors import ValidationError
from .keyvalue import format_float
from .models import (
    AnswerSheet,
    CohortDataset,
    EegRecording,
    FixationSeries,
    ScreenGeometry,
    SimilarityMatrix,
)
from .preprocess import ExclusionReport
from .simmatrix import matrix_from_files, matrix_sidecar, matrix_to_csv


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def gaze_table(series: FixationSeries) -> str:
    lines = ["frame,x,y,observed"]
    for k in range(series.n_frames):
        lines.append(
            f"{k},{format_float(series.xs[k])},{format_float(series.ys[k])},"
            f"{1 if series.mask[k] else 0}"
        )
    return "\n".join(lines) + "\n"


def gaze_from_table(text: str, viewer_id: str, fps: float) -> FixationSeries:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    xs, ys, mask = [], [], []
    for line in lines[1:]:
        _, x, y, obs = line.split(",")
        xs.append(float(x))
        ys.append(float(y))
        mask.append(obs == "1")
    return FixationSeries(
        viewer_id=viewer_id,
        frame_rate_fps=fps,
        start_ms=0,
        xs=np.array(xs),
        ys=np.array(ys),
        mask=np.array(mask, dtype=bool),
    )


def save_preprocessed(
    cohort: CohortDataset, report: ExclusionReport, out_dir: Path
) -> None:
    base = out_dir / "preprocessed"
    meta = {
        "video_id": cohort.video_id,
        "frame_rate_fps": cohort.frame_rate_fps,
        "n_frames": cohort.n_frames,
        "width_px": cohort.screen.width_px,
        "height_px": cohort.screen.height_px,
        "viewers": ",".join(sorted(cohort.viewers)),
        "missing_threshold": report.threshold,
    }
    _write(base / "meta.txt", keyvalue.dumps(meta))
    lines = ["viewer_id,missing_ratio,excluded"]
    removed = {vid for vid, _ in report.removed}
    for vid in sorted(report.ratios):
        lines.append(
            f"{vid},{format_float(report.ratios[vid])},"
            f"{1 if vid in removed else 0}"
        )
    _write(base / "exclusions.csv", "\n".join(lines) + "\n")
    for vid in sorted(cohort.viewers):
        _write(base / "gaze" / f"{vid}.csv", gaze_table(cohort.viewers[vid]))
    if cohort.eeg:
        for vid in sorted(cohort.eeg):
            rec = cohort.eeg[vid]
            save_eeg(rec, out_dir / "eeg" / f"{vid}.csv")
    if cohort.answers is not None:
        _write(out_dir / "answers.csv", answers_table(cohort.answers))


def save_eeg(rec: EegRecording, csv_path: Path) -> None:
    lines = [",".join(rec.channels)]
    for row in rec.samples:
        lines.append(",".join(format_float(v) for v in row))
    _write(csv_path, "\n".join(lines) + "\n")
    _write(
        csv_path.with_suffix(".meta"),
        keyvalue.dumps(
            {
                "sample_rate_hz": rec.sample_rate_hz,
                "start_offset_ms": rec.start_offset_ms,
            }
        ),
    )


def load_eeg(csv_path: Path) -> EegRecording:
    meta = keyvalue.loads(csv_path.with_suffix(".meta").read_text(encoding="utf-8"))
    lines = [ln for ln in csv_path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    channels = lines[0].split(",")
    samples = [[float(c) for c in line.split(",")] for line in lines[1:]]
    return EegRecording(
        sample_rate_hz=float(meta["sample_rate_hz"]),
        channels=channels,
        samples=np.array(samples) if samples else np.zeros((0, len(channels))),
        start_offset_ms=int(meta["start_offset_ms"]),
    )


def answers_table(sheet: AnswerSheet) -> str:
    lines = ["viewer," + ",".join(sheet.question_ids)]
    for vid, row in zip(sheet.viewer_ids, sheet.correctness):
        lines.append(vid + "," + ",".join("1" if c else "0" for c in row))
    return "\n".join(lines) + "\n"


def load_preprocessed(out_dir: Path) -> CohortDataset:
    base = Path(out_dir) / "preprocessed"
    meta_path = base / "meta.txt"
    if not meta_path.exists():
        raise FileNotFoundError(f"no preprocessed dataset at {out_dir}")
    meta = keyvalue.loads(meta_path.read_text(encoding="utf-8"))
    fps = float(meta["frame_rate_fps"])
    viewer_ids = [v for v in meta["viewers"].split(",") if v]
    viewers = {}
    for vid in viewer_ids:
        text = (base / "gaze" / f"{vid}.csv").read_text(encoding="utf-8")
        viewers[vid] = gaze_from_table(text, vid, fps)
    eeg = {}
    eeg_dir = Path(out_dir) / "eeg"
    if eeg_dir.is_dir():
        for path in sorted(eeg_dir.glob("*.csv")):
            eeg[path.stem] = load_eeg(path)
    answers = None
    answers_path = Path(out_dir) / "answers.csv"
    if answers_path.exists():
        from .ingest import parse_answer_sheet

        answers = parse_answer_sheet(answers_path.read_text(encoding="utf-8"))
    return CohortDataset(
        video_id=meta["video_id"],
        frame_rate_fps=fps,
        screen=ScreenGeometry(
            width_px=int(meta["width_px"]), height_px=int(meta["height_px"])
        ),
        viewers=viewers,
        eeg=eeg or None,
        answers=answers,
    )


def save_matrix(
    sim: SimilarityMatrix,
    directory: Path,
    filename: str,
    video_id: str,
    frame_rate_fps: float,
    normalization: str = "per-window-max",
) -> Path:
    path = directory / filename
    _write(path, matrix_to_csv(sim))
    _write(
        path.with_suffix(".meta"),
        matrix_sidecar(sim, video_id, frame_rate_fps, normalization),
    )
    return path


def load_matrix(path: Path) -> SimilarityMatrix:
    sidecar = path.with_suffix(".meta")
    if not sidecar.exists():
        raise ValidationError(f"matrix sidecar missing for {path.name}")
    return matrix_from_files(
        path.read_text(encoding="utf-8"), sidecar.read_text(encoding="utf-8")
    )


def write_text(path: Path, text: str) -> None:
    _write(path, text)
