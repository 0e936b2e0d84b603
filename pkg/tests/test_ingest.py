import math

import numpy as np
import pytest

from gazesim.errors import (
    EmptyInput,
    GeometryNotFound,
    MalformedRow,
    MissingColumn,
    NonBooleanCell,
    RaggedRows,
)
from gazesim.ingest import (
    FIXATION_COLUMNS,
    fixation_table_from_records,
    parse_answer_sheet,
    parse_display_coords,
    parse_eeg,
    parse_fixation_table,
    segment_windows,
)
from gazesim.models import FixationSeries

HEADER = "CURRENT_FIX_START,CURRENT_FIX_END,CURRENT_FIX_DURATION,CURRENT_FIX_X,CURRENT_FIX_Y"


def make_series(n, fps=32.0, start_ms=0):
    return FixationSeries(
        viewer_id="v",
        frame_rate_fps=fps,
        start_ms=start_ms,
        xs=np.arange(n, dtype=float),
        ys=np.arange(n, dtype=float) * 2,
        mask=np.ones(n, dtype=bool),
    )


def test_parse_single_row():
    records = parse_fixation_table(HEADER + "\n900,1100,200,512.3,400.0", "v1")
    assert len(records) == 1
    r = records[0]
    assert (r.start_ms, r.end_ms, r.duration_ms) == (900, 1100, 200)
    assert (r.x_px, r.y_px) == (512.3, 400.0)
    assert not r.missing


def test_parse_missing_column():
    bad = HEADER.replace(",CURRENT_FIX_Y", "")
    with pytest.raises(MissingColumn) as err:
        parse_fixation_table(bad + "\n1,2,1,3,", "v1")
    assert err.value.name == "CURRENT_FIX_Y"


def test_parse_extra_columns_ignored_and_tabs():
    text = (
        "TRIAL\tCURRENT_FIX_START\tCURRENT_FIX_END\tCURRENT_FIX_DURATION"
        "\tCURRENT_FIX_X\tCURRENT_FIX_Y\tCURRENT_FIX_BUTTON_0_PRESS\n"
        "1\t0\t100\t100\t5.0\t6.0\t\n"
    )
    records = parse_fixation_table(text, "v1")
    assert len(records) == 1
    assert records[0].x_px == 5.0


def test_parse_bad_duration_recomputed_with_warning():
    # 3-row fixture checked by hand: row 2 carries a wrong duration
    text = (
        HEADER + "\n0,100,100,1.0,1.0\n100,300,150,2.0,2.0\n300,400,100,3.0,3.0"
    )
    with pytest.warns(UserWarning):
        records = parse_fixation_table(text, "v1")
    assert [r.duration_ms for r in records] == [100, 200, 100]


def test_parse_empty_xy_flagged_missing():
    records = parse_fixation_table(HEADER + "\n0,100,100,,\n100,200,100,n/a,4", "v1")
    assert all(r.missing for r in records)
    assert all(math.isnan(r.x_px) for r in records)


def test_parse_inconsistent_field_count():
    with pytest.raises(MalformedRow) as err:
        parse_fixation_table(HEADER + "\n0,100,100,1.0", "v1")
    assert err.value.line_no == 2


def test_parse_rows_sorted_by_start():
    text = HEADER + "\n200,300,100,2,2\n0,100,100,1,1"
    records = parse_fixation_table(text, "v1")
    assert [r.start_ms for r in records] == [0, 200]


def test_fixation_round_trip():
    text = (
        HEADER + "\n0,100,100,1.5,2.25\n100,300,200,,\n300,400,100,512.3,400.0"
    )
    records = parse_fixation_table(text, "v1")
    again = parse_fixation_table(fixation_table_from_records(records), "v1")
    assert again == records


def test_display_coords_inclusive_maxima():
    geom = parse_display_coords("MSG 0 DISPLAY_COORDS 0 0 1023 767")
    assert (geom.width_px, geom.height_px) == (1024, 768)


def test_display_coords_not_found():
    with pytest.raises(GeometryNotFound):
        parse_display_coords("MSG 0 something else\nMSG 1 RECCFG")


def test_display_coords_first_occurrence_wins():
    text = (
        "MSG 0 DISPLAY_COORDS 0 0 1023 767\n"
        "MSG 9 DISPLAY_COORDS 0 0 1919 1079\n"
    )
    geom = parse_display_coords(text)
    assert (geom.width_px, geom.height_px) == (1024, 768)


def test_parse_eeg_headerless():
    rec = parse_eeg("1 2 3 4\n5 6 7 8\n9 10 11 12", sample_rate_hz=100.0)
    assert rec.channels == ["ch01", "ch02", "ch03", "ch04"]
    assert rec.samples.shape == (3, 4)


def test_parse_eeg_with_header():
    rec = parse_eeg("Fp1,Fp2\n0.5,1.5\n2.5,3.5", sample_rate_hz=100.0)
    assert rec.channels == ["Fp1", "Fp2"]
    assert rec.samples.shape == (2, 2)
    assert rec.samples[1, 0] == 2.5


def test_parse_eeg_ragged():
    with pytest.raises(RaggedRows):
        parse_eeg("1 2 3\n4 5 6 7", sample_rate_hz=100.0)


def test_parse_eeg_empty():
    with pytest.raises(EmptyInput):
        parse_eeg("   \n", sample_rate_hz=100.0)


def test_parse_answers_all_correct():
    sheet = parse_answer_sheet("viewer,q1,q2\na,1,1\nb,1,1")
    assert sheet.viewer_ids == ["a", "b"]
    assert sheet.question_ids == ["q1", "q2"]
    assert sheet.correctness.all()


def test_parse_answers_non_boolean():
    with pytest.raises(NonBooleanCell):
        parse_answer_sheet("viewer,q1\na,2")


def test_parse_answers_fixture_shape():
    lines = ["viewer," + ",".join(f"q{i}" for i in range(5))]
    rng = np.random.default_rng(123)
    for v in range(11):
        cells = rng.integers(0, 2, size=5)
        lines.append(f"v{v:02d}," + ",".join(str(c) for c in cells))
    sheet = parse_answer_sheet("\n".join(lines))
    assert sheet.correctness.shape == (11, 5)


def test_segment_windows_30s_at_32fps():
    series = make_series(300 * 32, fps=32.0)
    windows = segment_windows(series, 30.0, 32.0)
    assert len(windows) == 10
    assert all(w.n_frames == 960 for w in windows)


def test_segment_windows_drops_partial_tail():
    series = make_series(35 * 32, fps=32.0)
    windows = segment_windows(series, 30.0, 32.0)
    assert len(windows) == 1


def test_segment_windows_5s_over_33s():
    series = make_series(33 * 32, fps=32.0)
    assert len(segment_windows(series, 5.0, 32.0)) == 6


def test_segment_windows_disjoint_ordered_prefix():
    series = make_series(100, fps=10.0)
    windows = segment_windows(series, 3.0, 10.0)
    concat = np.concatenate([w.xs for w in windows])
    assert np.array_equal(concat, series.xs[: len(concat)])
    starts = [w.start_ms for w in windows]
    assert starts == sorted(starts)
    assert starts == [i * 3000 for i in range(len(windows))]


def test_segment_windows_empty_input():
    assert segment_windows(make_series(0), 30.0, 32.0) == []


def test_fixation_required_columns():
    assert set(FIXATION_COLUMNS) == {
        "CURRENT_FIX_START",
        "CURRENT_FIX_END",
        "CURRENT_FIX_DURATION",
        "CURRENT_FIX_X",
        "CURRENT_FIX_Y",
    }
