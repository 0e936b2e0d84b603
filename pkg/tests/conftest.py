import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

FIXATION_HEADER = (
    "CURRENT_FIX_START,CURRENT_FIX_END,CURRENT_FIX_DURATION,"
    "CURRENT_FIX_X,CURRENT_FIX_Y"
)


def _fixation_rows(spans, rng):
    """spans: list of (start_ms, end_ms) observed stretches, cut into 250 ms
    fixations at jittered positions."""
    rows = []
    for start, end in spans:
        t = start
        while t < end:
            stop = min(t + 250, end)
            x = rng.uniform(100, 900)
            y = rng.uniform(100, 700)
            rows.append(f"{t},{stop},{stop - t},{x:.1f},{y:.1f}")
            t = stop
    return rows


def build_input_tree(root: Path, seed: int = 100) -> dict:
    """Fixture cohort: viewer a has 21% missing, b exactly 20%, c/d/e full.

    10 s of video; gaps sit in [5000, 7100) and [5000, 7000) so that at any
    integer source rate the missing ratios are exactly 0.21 and 0.20.
    """
    rng = np.random.default_rng(seed)
    fixations = root / "fixations"
    fixations.mkdir(parents=True)
    spans = {
        "a": [(0, 5000), (7100, 10000)],
        "b": [(0, 5000), (7000, 10000)],
        "c": [(0, 10000)],
        "d": [(0, 10000)],
        "e": [(0, 10000)],
    }
    for vid, vid_spans in spans.items():
        rows = _fixation_rows(vid_spans, rng)
        (fixations / f"{vid}_carol.csv").write_text(
            FIXATION_HEADER + "\n" + "\n".join(rows) + "\n", encoding="utf-8"
        )

    asc = root / "carol.asc"
    asc.write_text(
        "MSG 0 RECCFG CR 1000\nMSG 0 DISPLAY_COORDS 0 0 1023 767\n",
        encoding="utf-8",
    )

    eeg_dir = root / "eeg"
    eeg_dir.mkdir()
    samples = rng.normal(0, 40, size=(1000, 4))
    lines = ["Fp1,Fp2,Cz,Oz"]
    for row in samples:
        lines.append(",".join(f"{v:.3f}" for v in row))
    (eeg_dir / "c_carol.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    answers = root / "answers.csv"
    table = ["viewer,q1,q2,q3,q4,q5"]
    for vid in spans:
        cells = rng.integers(0, 2, size=5)
        table.append(vid + "," + ",".join(str(c) for c in cells))
    answers.write_text("\n".join(table) + "\n", encoding="utf-8")

    config = root / "run.cfg"
    config.write_text(
        "\n".join(
            [
                f"fixation_dir = {fixations}",
                f"asc_file = {asc}",
                f"eeg_dir = {eeg_dir}",
                f"answers_file = {answers}",
                f"out_dir = {root / 'out'}",
                "video_id = carol",
                "source_rate_hz = 100",
                "eeg_sample_rate_hz = 100",
                "window_s = 2",
                "target_fps = 32",
                "lambda = 5000",
                "gamma = 5000",
                "scales = 1",
                "seed = 7",
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    return {
        "config": config,
        "out": root / "out",
        "fixations": fixations,
        "answers": answers,
    }


def snapshot_tree(root: Path) -> dict:
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            out[str(path.relative_to(root))] = path.read_bytes()
    return out


@pytest.fixture(scope="session")
def cli_workspace(tmp_path_factory):
    """Input tree plus a fully preprocessed out/ directory, built once."""
    from gazesim.cli import main

    root = tmp_path_factory.mktemp("cohort")
    paths = build_input_tree(root)
    assert main(["preprocess", "--config", str(paths["config"])]) == 0
    return paths
