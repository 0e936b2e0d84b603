"""Parsers for fixation exports, screen geometry, EEG dumps and answer
sheets, plus window segmentation.

All parsers are pure text-in / records-out; errors are the typed classes
from :mod:`gazesim.errors`, never bare crashes.
"""

from __future__ import annotations

import math
import re
import warnings

import numpy as np

from .errors import (
    EmptyInput,
    GeometryNotFound,
    MalformedRow,
    MissingColumn,
    NonBooleanCell,
    RaggedRows,
)
from .models import (
    AnswerSheet,
    EegRecording,
    FixationSeries,
    RawFixationRecord,
    ScreenGeometry,
)

FIXATION_COLUMNS = (
    "CURRENT_FIX_START",
    "CURRENT_FIX_END",
    "CURRENT_FIX_DURATION",
    "CURRENT_FIX_X",
    "CURRENT_FIX_Y",
)

_DISPLAY_COORDS_RE = re.compile(
    r"DISPLAY_COORDS\s+0\s+0\s+(\d+)\s+(\d+)"
)


def _sniff_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def _parse_number(cell: str) -> float | None:
    cell = cell.strip()
    if not cell:
        return None
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def parse_fixation_table(text: str, viewer_id: str) -> list[RawFixationRecord]:
    """Parse a CSV/TSV fixation export for one viewer.

    The header must contain the five CURRENT_FIX_* columns; any other columns
    (the export carries a couple hundred, mostly empty) are ignored. Rows with
    empty or non-numeric X/Y come back flagged missing. A duration that
    disagrees with end - start is recomputed with a warning.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise EmptyInput("fixation table")
    delim = _sniff_delimiter(lines[0])
    header = [h.strip() for h in lines[0].split(delim)]
    col_index: dict[str, int] = {}
    for name in FIXATION_COLUMNS:
        if name not in header:
            raise MissingColumn(name)
        col_index[name] = header.index(name)

    records: list[RawFixationRecord] = []
    for line_no, line in enumerate(lines[1:], start=2):
        fields = line.split(delim)
        if len(fields) != len(header):
            raise MalformedRow(line_no)
        start = _parse_number(fields[col_index["CURRENT_FIX_START"]])
        end = _parse_number(fields[col_index["CURRENT_FIX_END"]])
        duration = _parse_number(fields[col_index["CURRENT_FIX_DURATION"]])
        if start is None or end is None or duration is None:
            raise MalformedRow(line_no, "non-numeric timing field")
        start_ms, end_ms = int(round(start)), int(round(end))
        if int(round(duration)) != end_ms - start_ms:
            warnings.warn(
                f"{viewer_id}: line {line_no} duration {duration:g} != "
                f"end - start; recomputed",
                stacklevel=2,
            )
        x = _parse_number(fields[col_index["CURRENT_FIX_X"]])
        y = _parse_number(fields[col_index["CURRENT_FIX_Y"]])
        missing = x is None or y is None
        records.append(
            RawFixationRecord(
                start_ms=start_ms,
                end_ms=end_ms,
                duration_ms=end_ms - start_ms,
                x_px=float("nan") if missing else x,
                y_px=float("nan") if missing else y,
                missing=missing,
            )
        )
    records.sort(key=lambda r: r.start_ms)
    return records


def fixation_table_from_records(records: list[RawFixationRecord]) -> str:
    """Serialize records back to the canonical CSV (round-trips exactly)."""
    lines = [",".join(FIXATION_COLUMNS)]
    for r in records:
        x = "" if r.missing else repr(r.x_px)
        y = "" if r.missing else repr(r.y_px)
        lines.append(f"{r.start_ms},{r.end_ms},{r.duration_ms},{x},{y}")
    return "\n".join(lines) + "\n"


def parse_display_coords(asc_text: str) -> ScreenGeometry:
    """Extract the screen size from an .asc dump.

    The tracker reports inclusive pixel maxima ("... 0 0 1023 767" means a
    1024x768 display), so +1 is applied to both values. The first matching
    line wins.
    """
    for line in asc_text.splitlines():
        if "DISPLAY_COORDS" not in line:
            continue
        m = _DISPLAY_COORDS_RE.search(line)
        if m:
            return ScreenGeometry(
                width_px=int(m.group(1)) + 1,
                height_px=int(m.group(2)) + 1,
            )
    raise GeometryNotFound()


def parse_eeg(
    text: str, sample_rate_hz: float, start_offset_ms: int = 0
) -> EegRecording:
    """Parse a whitespace- or comma-delimited numeric matrix.

    An optional first row of channel labels is detected by being non-numeric;
    otherwise channels are labeled ch01..chNN.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise EmptyInput("EEG table")

    def split(line: str) -> list[str]:
        return line.split(",") if "," in line else line.split()

    first = [c.strip() for c in split(lines[0])]
    has_header = any(_parse_number(c) is None for c in first)
    if has_header:
        channels = first
        data_lines = lines[1:]
        first_data_line_no = 2
    else:
        channels = None
        data_lines = lines
        first_data_line_no = 1
    if not data_lines:
        raise EmptyInput("EEG samples")

    rows: list[list[float]] = []
    width = None
    for offset, line in enumerate(data_lines):
        cells = [c.strip() for c in split(line)]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise RaggedRows(first_data_line_no + offset, width, len(cells))
        row = []
        for cell in cells:
            value = _parse_number(cell)
            if value is None:
                raise MalformedRow(first_data_line_no + offset, f"non-numeric cell {cell!r}")
            row.append(value)
        rows.append(row)

    if channels is None:
        pad = max(2, len(str(width)))
        channels = [f"ch{i + 1:0{pad}d}" for i in range(width)]
    elif len(channels) != width:
        raise RaggedRows(1, width, len(channels))
    return EegRecording(
        sample_rate_hz=sample_rate_hz,
        channels=channels,
        samples=np.array(rows, dtype=float),
        start_offset_ms=start_offset_ms,
    )


_TRUE_CELLS = {"1", "true", "t", "yes"}
_FALSE_CELLS = {"0", "false", "f", "no"}


def parse_answer_sheet(text: str) -> AnswerSheet:
    """Parse a question-correctness table.

    Header row carries the question ids (first cell is the viewer-id column
    label and is ignored); each data row is a viewer id followed by 0/1 or
    true/false cells.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise EmptyInput("answer sheet")
    delim = _sniff_delimiter(lines[0])
    header = [h.strip() for h in lines[0].split(delim)]
    question_ids = header[1:]
    if not question_ids:
        raise EmptyInput("question columns")

    viewer_ids: list[str] = []
    table: list[list[bool]] = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(delim)]
        if len(cells) != len(header):
            raise MalformedRow(line_no)
        viewer_ids.append(cells[0])
        row = []
        for col, cell in enumerate(cells[1:], start=1):
            low = cell.lower()
            if low in _TRUE_CELLS:
                row.append(True)
            elif low in _FALSE_CELLS:
                row.append(False)
            else:
                raise NonBooleanCell(line_no, col, cell)
        table.append(row)
    if not viewer_ids:
        raise EmptyInput("answer rows")
    return AnswerSheet(
        viewer_ids=viewer_ids,
        question_ids=question_ids,
        correctness=np.array(table, dtype=bool),
    )


def segment_windows(
    series: FixationSeries, window_s: float, frame_rate_fps: float
) -> list[FixationSeries]:
    """Cut a series into consecutive non-overlapping windows.

    Window length is round(window_s * frame_rate_fps) frames; a trailing
    partial window is dropped. Each output carries the video time of its
    first frame.
    """
    if window_s <= 0:
        raise ValueError("window_s must be positive")
    frames_per_window = int(round(window_s * frame_rate_fps))
    if frames_per_window <= 0 or series.n_frames < frames_per_window:
        return []
    out = []
    for w in range(series.n_frames // frames_per_window):
        lo = w * frames_per_window
        hi = lo + frames_per_window
        start_ms = series.start_ms + int(round(lo / frame_rate_fps * 1000.0))
        out.append(
            FixationSeries(
                viewer_id=series.viewer_id,
                frame_rate_fps=series.frame_rate_fps,
                start_ms=start_ms,
                xs=series.xs[lo:hi].copy(),
                ys=series.ys[lo:hi].copy(),
                mask=series.mask[lo:hi].copy(),
            )
        )
    return out
