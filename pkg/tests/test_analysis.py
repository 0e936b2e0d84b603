import numpy as np
import pytest

from gazesim.analysis import (
    DEFAULT_SWEEP_VALUES,
    CorrelationResult,
    answer_penalty_matrix,
    correlate,
    parameter_sweep,
    scatter_table,
    subset_penalty,
    subset_similarity,
    sweep_manifest,
    trail_plot_data,
    trail_table,
)
from gazesim.errors import UnknownQuestion, UnknownViewer, ValidationError, ViewerMismatch
from gazesim.models import (
    AnswerSheet,
    CohortDataset,
    FixationSeries,
    PenaltyMatrix,
    ScreenGeometry,
    SimilarityMatrix,
    TwedParams,
    WindowSpec,
)
from gazesim.simmatrix import compute_similarity_matrix

from oracles import pearson_textbook, penalty_counts_loops


def make_cohort(n_viewers=4, n_frames=320, fps=32.0, seed=1, with_gaps=False):
    rng = np.random.default_rng(seed)
    viewers = {}
    for i in range(n_viewers):
        mask = np.ones(n_frames, dtype=bool)
        if with_gaps:
            mask[rng.uniform(size=n_frames) < 0.1] = False
        xs = np.where(mask, rng.uniform(0, 1024, n_frames), 0.0)
        ys = np.where(mask, rng.uniform(0, 768, n_frames), 0.0)
        vid = f"v{i:02d}"
        viewers[vid] = FixationSeries(
            viewer_id=vid, frame_rate_fps=fps, start_ms=0, xs=xs, ys=ys, mask=mask
        )
    return CohortDataset(
        video_id="vid", frame_rate_fps=fps,
        screen=ScreenGeometry(width_px=1024, height_px=768), viewers=viewers,
    )


def make_sheet(rng, n_viewers=11, n_questions=5):
    return AnswerSheet(
        viewer_ids=[f"v{i:02d}" for i in range(n_viewers)],
        question_ids=[f"q{i}" for i in range(n_questions)],
        correctness=rng.integers(0, 2, size=(n_viewers, n_questions)).astype(bool),
    )


# --- parameter sweep -----------------------------------------------------------

def test_default_grid_has_25_cells():
    cohort = make_cohort(n_viewers=3, n_frames=64)
    grid = parameter_sweep(cohort, WindowSpec(0.0, 2.0))
    assert DEFAULT_SWEEP_VALUES == [0.0, 1000.0, 5000.0, 10000.0, 20000.0]
    assert len(grid.results) == 25


def test_sweep_contains_zero_zero_cell():
    cohort = make_cohort(n_viewers=3, n_frames=64)
    grid = parameter_sweep(cohort, WindowSpec(0.0, 2.0), [0.0, 5000.0], [0.0])
    assert (0.0, 0.0) in grid.results
    sim = grid.results[(0.0, 0.0)]
    assert sim.params == TwedParams(lam=0.0, gamma=0.0)


def test_sweep_cell_matches_standalone_bitwise():
    cohort = make_cohort(n_viewers=4, n_frames=96)
    window = WindowSpec(0.0, 3.0)
    grid = parameter_sweep(cohort, window, [5000.0], [1000.0])
    standalone = compute_similarity_matrix(
        cohort, window, TwedParams(lam=5000.0, gamma=1000.0)
    )
    assert np.array_equal(grid.results[(5000.0, 1000.0)].values, standalone.values)


def test_sweep_rejects_empty_grid():
    cohort = make_cohort(n_viewers=3, n_frames=64)
    with pytest.raises(ValidationError):
        parameter_sweep(cohort, WindowSpec(0.0, 2.0), [], [1.0])


def test_sweep_manifest_lists_all_cells():
    cohort = make_cohort(n_viewers=3, n_frames=64)
    grid = parameter_sweep(cohort, WindowSpec(0.0, 2.0), [0.0, 1.0], [2.0, 3.0])
    paths = {key: f"{key[0]:g}_{key[1]:g}.csv" for key in grid.results}
    manifest = sweep_manifest(grid, paths)
    lines = manifest.strip().splitlines()
    assert lines[0] == "lambda,gamma,path"
    assert len(lines) == 5


# --- answer penalty -------------------------------------------------------------

def test_penalty_both_correct_counts():
    sheet = AnswerSheet(
        viewer_ids=["a", "b"],
        question_ids=["q1", "q2", "q3", "q4", "q5"],
        correctness=np.array(
            [[1, 1, 1, 0, 1], [1, 1, 1, 1, 0]], dtype=bool
        ),
    )
    penalty = answer_penalty_matrix(sheet)
    assert penalty.counts[0, 1] == 3


def test_penalty_all_incorrect_viewer_zero_row():
    sheet = AnswerSheet(
        viewer_ids=["a", "b", "c"],
        question_ids=["q1", "q2"],
        correctness=np.array([[0, 0], [1, 1], [1, 0]], dtype=bool),
    )
    penalty = answer_penalty_matrix(sheet)
    assert penalty.counts[0, 1] == 0 and penalty.counts[0, 2] == 0
    assert penalty.counts[0, 0] == 0  # diagonal: own correct count


def test_penalty_matches_nested_loop_oracle():
    rng = np.random.default_rng(71)
    sheet = make_sheet(rng)
    penalty = answer_penalty_matrix(sheet)
    expected = penalty_counts_loops(sheet.correctness.tolist(), range(5))
    assert np.array_equal(penalty.counts, np.array(expected))


def test_penalty_subset_and_unknown_question():
    rng = np.random.default_rng(72)
    sheet = make_sheet(rng)
    sub = answer_penalty_matrix(sheet, ["q1", "q3"])
    expected = penalty_counts_loops(sheet.correctness.tolist(), [1, 3])
    assert np.array_equal(sub.counts, np.array(expected))
    with pytest.raises(UnknownQuestion):
        answer_penalty_matrix(sheet, ["q9"])


def test_penalty_symmetry_and_bounds():
    rng = np.random.default_rng(73)
    sheet = make_sheet(rng)
    penalty = answer_penalty_matrix(sheet)
    assert np.array_equal(penalty.counts, penalty.counts.T)
    assert penalty.counts.min() >= 0 and penalty.counts.max() <= 5
    for i in range(11):
        assert penalty.counts[i, i] == int(sheet.correctness[i].sum())


# --- correlate -------------------------------------------------------------------

def _aligned_penalty_and_sim(seed=5, n=11):
    rng = np.random.default_rng(seed)
    cohort = make_cohort(n_viewers=n, n_frames=64, seed=seed)
    sim = compute_similarity_matrix(
        cohort, WindowSpec(0.0, 2.0), TwedParams(lam=5000, gamma=5000)
    )
    sheet = AnswerSheet(
        viewer_ids=list(cohort.viewers),
        question_ids=[f"q{i}" for i in range(5)],
        correctness=rng.integers(0, 2, size=(n, 5)).astype(bool),
    )
    return answer_penalty_matrix(sheet), sim


def test_correlate_sample_count():
    penalty, sim = _aligned_penalty_and_sim()
    result = correlate(penalty, sim)
    assert result.n_samples == 11 * 10 // 2


def test_correlate_zero_variance_absent():
    penalty, sim = _aligned_penalty_and_sim()
    flat = PenaltyMatrix(
        viewer_ids=penalty.viewer_ids,
        counts=np.full_like(penalty.counts, 2),
    )
    result = correlate(flat, sim)
    assert result.r is None


def test_correlate_matches_textbook_formula():
    # hand-built 4-viewer case
    ids = ["a", "b", "c", "d"]
    counts = np.array(
        [[3, 2, 1, 0], [2, 3, 2, 1], [1, 2, 3, 2], [0, 1, 2, 3]]
    )
    values = np.array(
        [
            [1.0, 0.9, 0.4, 0.1],
            [0.9, 1.0, 0.6, 0.3],
            [0.4, 0.6, 1.0, 0.8],
            [0.1, 0.3, 0.8, 1.0],
        ]
    )
    penalty = PenaltyMatrix(viewer_ids=ids, counts=counts)
    sim = SimilarityMatrix(
        viewer_ids=ids, values=values,
        window=WindowSpec(0.0, 1.0), params=TwedParams(lam=1, gamma=1),
    )
    result = correlate(penalty, sim)
    xs = [2, 1, 0, 2, 1, 2]
    ys = [0.9, 0.4, 0.1, 0.6, 0.3, 0.8]
    assert result.r == pytest.approx(pearson_textbook(xs, ys), abs=1e-12)


def test_correlate_r_in_range():
    for seed in range(5):
        penalty, sim = _aligned_penalty_and_sim(seed=seed)
        result = correlate(penalty, sim)
        if result.r is not None:
            assert -1.0 <= result.r <= 1.0


def test_correlate_viewer_mismatch():
    penalty, sim = _aligned_penalty_and_sim()
    reordered = PenaltyMatrix(
        viewer_ids=list(reversed(penalty.viewer_ids)),
        counts=penalty.counts[::-1, ::-1].copy(),
    )
    with pytest.raises(ViewerMismatch):
        correlate(reordered, sim)


def test_correlate_requires_three_viewers():
    penalty, sim = _aligned_penalty_and_sim()
    with pytest.raises(ValidationError):
        correlate(
            subset_penalty(penalty, ["v00", "v01"]),
            subset_similarity(sim, ["v00", "v01"]),
        )


def test_scatter_table_shape():
    penalty, sim = _aligned_penalty_and_sim()
    table = scatter_table(correlate(penalty, sim))
    lines = table.strip().splitlines()
    assert lines[0] == "viewer_i,viewer_j,penalty,similarity"
    assert len(lines) == 1 + 55


# --- trail plot data --------------------------------------------------------------

def test_trail_rows_for_5s_window():
    cohort = make_cohort(n_viewers=3, n_frames=320)
    data = trail_plot_data(cohort, "v00", "v01", WindowSpec(0.0, 5.0))
    assert len(data.frames) == 160
    table = trail_table(data)
    assert len(table.strip().splitlines()) == 161


def test_trail_intensity_linear():
    cohort = make_cohort(n_viewers=2, n_frames=320)
    data = trail_plot_data(cohort, "v00", "v01", WindowSpec(0.0, 5.0))
    assert data.intensity[0] == 0.0
    assert data.intensity[-1] == 1.0
    diffs = np.diff(data.intensity)
    assert np.allclose(diffs, diffs[0])


def test_trail_masked_frames_export_empty():
    cohort = make_cohort(n_viewers=2, n_frames=64, with_gaps=True, seed=9)
    data = trail_plot_data(cohort, "v00", "v01", WindowSpec(0.0, 2.0))
    mask_a = cohort.viewers["v00"].mask[:64]
    assert np.isnan(data.x_a[~mask_a]).all()
    table = trail_table(data)
    line = table.splitlines()[1 + int(np.flatnonzero(~mask_a)[0])]
    cells = line.split(",")
    assert cells[1] == "" and cells[2] == ""


def test_trail_unknown_viewer():
    cohort = make_cohort(n_viewers=2, n_frames=64)
    with pytest.raises(UnknownViewer):
        trail_plot_data(cohort, "v00", "nope", WindowSpec(0.0, 2.0))


def test_trail_absolute_frame_indices():
    cohort = make_cohort(n_viewers=2, n_frames=320)
    data = trail_plot_data(cohort, "v00", "v01", WindowSpec(5.0, 2.0))
    assert data.frames[0] == 160
    assert data.frames[-1] == 160 + 64 - 1
