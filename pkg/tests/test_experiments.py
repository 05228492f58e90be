import json

import numpy as np
import pytest

from arraycal import (
    SceneConfig,
    histogram,
    make_rng,
    run_monte_carlo,
    run_trial,
    trial_f_values,
)
from arraycal.experiments import write_histogram_csv

SMALL = SceneConfig(num_mics=6, num_srcs=5, seed=123)


def test_run_trial_is_pure():
    a = run_trial(SMALL, 7)
    b = run_trial(SMALL, 7)
    assert a == b
    assert a.trial_index == 7
    assert a.f_min <= a.f_max


def test_trials_differ_across_indices():
    assert run_trial(SMALL, 0) != run_trial(SMALL, 1)


def test_single_trial_single_point_is_exactly_zero():
    report = run_monte_carlo(SceneConfig(num_mics=1, num_srcs=1, seed=1), 1, 1e-12)
    assert report.passed
    assert report.data_points == 1
    assert report.max_abs_residual_toa_tdoa == 0.0
    assert report.max_abs_residual_vs_closed_form == 0.0
    assert report.max_abs_column_mean == 0.0
    assert report.f_min == 0.0 and report.f_max == 0.0


def test_monte_carlo_passes_and_counts():
    report = run_monte_carlo(SMALL, 20, 1e-12)
    assert report.passed
    assert report.num_trials == 20
    assert report.data_points == 20 * 6 * 5
    assert report.max_abs_residual_toa_tdoa < 1e-12
    assert -report.f_bound <= report.f_min <= report.f_max <= report.f_bound


def test_worker_count_does_not_change_report():
    serial = run_monte_carlo(SMALL, 16, 1e-12, workers=1)
    threaded = run_monte_carlo(SMALL, 16, 1e-12, workers=4)
    assert serial.to_json() == threaded.to_json()


def test_more_trials_never_shrink_maxima():
    short = run_monte_carlo(SMALL, 10, 1e-12)
    long = run_monte_carlo(SMALL, 20, 1e-12)
    assert long.max_abs_residual_toa_tdoa >= short.max_abs_residual_toa_tdoa
    assert long.max_abs_residual_vs_closed_form >= short.max_abs_residual_vs_closed_form
    assert long.max_abs_column_mean >= short.max_abs_column_mean
    assert long.f_min <= short.f_min
    assert long.f_max >= short.f_max


def test_report_json_is_loadable():
    report = run_monte_carlo(SMALL, 3, 1e-12)
    data = json.loads(report.to_json())
    assert data == report.to_dict()
    assert data["config"]["num_mics"] == 6
    assert data["passed"] is True


def test_trial_f_values_match_trial_extremes():
    values = trial_f_values(SMALL, 4)
    result = run_trial(SMALL, 4)
    assert values.shape == (6, 5)
    # TOA-route extremes can only be at least as tight as the two-route ones
    assert result.f_min <= values.min() <= values.max() <= result.f_max


def test_monte_carlo_argument_validation():
    with pytest.raises(ValueError):
        run_monte_carlo(SMALL, 0, 1e-12)
    with pytest.raises(ValueError):
        run_monte_carlo(SMALL, 1, 0.0)


def test_histogram_hand_case():
    rows = histogram([0.1, 0.1, 0.9], 2, (0.0, 1.0))
    assert rows == [(0.0, 0.5, 2), (0.5, 1.0, 1)]


def test_histogram_empty_input():
    rows = histogram([], 4, (0.0, 1.0))
    assert [count for _, _, count in rows] == [0, 0, 0, 0]


def test_histogram_conservation():
    values = make_rng(5).normal(0.0, 0.05, 4000)
    rows = histogram(values, 37, (-0.1, 0.1))
    in_range = int(np.count_nonzero((values >= -0.1) & (values <= 0.1)))
    assert sum(count for _, _, count in rows) == in_range


def test_histogram_uniform_edges():
    rows = histogram([0.5], 5, (0.0, 1.0))
    widths = [right - left for left, right, _ in rows]
    assert np.allclose(widths, 0.2)
    assert rows[0][0] == 0.0 and rows[-1][1] == 1.0


def test_histogram_validation():
    with pytest.raises(ValueError):
        histogram([1.0], 0, (0.0, 1.0))
    with pytest.raises(ValueError):
        histogram([1.0], 3, (1.0, 1.0))


def test_histogram_csv_format(tmp_path):
    path = tmp_path / "h.csv"
    write_histogram_csv(histogram([0.1, 0.9], 2, (0.0, 1.0)), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "bin_left,bin_right,count"
    assert lines[1].split(",")[2] == "1"
    assert len(lines) == 3
