import math

import pandas as pd
import pytest

from foragesim.core.agent import DayResult
from foragesim.results.stats import AGGREGATES, RunStats, records_from_results


def test_aggregates_on_small_matrix():
    summary = RunStats.from_matrix([[1, 9], [2, 4]]).summary()
    assert list(summary) == AGGREGATES
    assert summary["mean_mean"] == 4
    assert summary["med_mean"] == 4
    assert summary["med_med"] == 4
    assert summary["max_mean"] == 6.5
    assert summary["max_max"] == 9


def test_mean_mean_is_mean_of_environment_means():
    stats = RunStats.from_matrix([[10, 10, 10], [20, 20, 20]])
    assert stats.mean_mean == 15
    assert stats.env_count == 2


def test_even_median_takes_middle_pair():
    stats = RunStats.from_matrix([[1, 2, 3, 10]])
    assert stats.summary()["med_med"] == 2.5


def test_warmup_days_are_dropped():
    stats = RunStats.from_matrix([[100, 100, 4, 6]], warmup_days=2)
    assert list(stats.steps_matrix().columns) == [3, 4]
    assert stats.mean_mean == 5
    # the day-by-day view keeps every day
    assert stats.daily_means().tolist() == [100, 100, 4, 6]


def _records(rows):
    return [
        {"env_index": e, "day": d, "steps": s, "plannings": 0, "gave_up": g}
        for e, d, s, g in rows
    ]


def test_gave_up_days_count_at_cap_unless_excluded():
    rows = [(0, 1, 50, True), (0, 2, 10, False), (1, 1, 20, False), (1, 2, 30, False)]
    kept = RunStats.from_records(_records(rows))
    assert kept.mean_mean == pytest.approx((30 + 25) / 2)
    assert kept.gave_up_count() == 1

    dropped = RunStats.from_records(_records(rows), exclude_gave_up=True)
    assert dropped.mean_mean == pytest.approx((10 + 25) / 2)
    assert dropped.summary()["max_max"] == 30


def test_empty_run_gives_nan_aggregates():
    summary = RunStats.from_records([]).summary()
    assert all(math.isnan(v) for v in summary.values())


def test_mean_over_days():
    stats = RunStats.from_matrix([[8, 6, 4, 2], [8, 6, 4, 2]])
    assert stats.mean_over_days(1, 2) == 7
    assert stats.mean_over_days(3, 4) == 3


def test_day_windows_honour_gave_up_exclusion():
    rows = [(0, 1, 50, True), (0, 2, 10, False), (1, 1, 20, False), (1, 2, 30, False)]
    kept = RunStats.from_records(_records(rows))
    dropped = RunStats.from_records(_records(rows), exclude_gave_up=True)
    assert kept.mean_over_days(1, 1) == 35
    assert dropped.mean_over_days(1, 1) == 20
    assert dropped.mean_over_days(1, 2) == 20
    assert dropped.daily_means().tolist() == [20, 20]


def test_memory_stats_from_day_results():
    results = [
        DayResult(day=1, steps=40, plannings=0, memory_size=30, visited_cells=25),
        DayResult(day=2, steps=14, plannings=1, memory_size=45, visited_cells=15),
        DayResult(day=3, steps=14, plannings=3, memory_size=50, visited_cells=15),
    ]
    stats = RunStats.from_records(records_from_results(0, results) + records_from_results(1, results))
    memory = stats.memory_stats()
    assert memory["median_plannings"] == 2
    assert memory["mean_memory_size_last_day"] == 50
    assert memory["mean_visited_day1"] == 25
    assert memory["mean_visited_day2"] == 15


def test_memory_stats_without_visit_counts():
    results = [DayResult(day=1, steps=5), DayResult(day=2, steps=3)]
    memory = RunStats.from_records(records_from_results(0, results)).memory_stats()
    assert memory["mean_visited_day1"] is None
    assert memory["median_plannings"] == 0


def test_records_are_sorted_by_env_and_day():
    rows = [(1, 2, 3, False), (0, 2, 1, False), (1, 1, 2, False), (0, 1, 4, False)]
    frame = RunStats.from_records(_records(rows)).days
    assert isinstance(frame, pd.DataFrame)
    assert frame[["env_index", "day"]].values.tolist() == [[0, 1], [0, 2], [1, 1], [1, 2]]
