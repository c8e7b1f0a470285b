"""Aggregate statistics over the (environment, day) steps matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional

import numpy as np
import pandas as pd

DAY_COLUMNS = ["env_index", "day", "steps", "plannings", "gave_up"]
MEMORY_COLUMNS = ["env_index", "day", "memory_size", "visited_cells"]
AGGREGATES = ["mean_mean", "med_mean", "med_med", "max_mean", "max_max"]


@dataclass
class RunStats:
    """Per-(environment, day) records of one run plus the derived aggregates.

    ``warmup_days`` drops the first days from every aggregate;
    ``exclude_gave_up`` drops capped days (they count at the step cap
    otherwise). Medians follow numpy: the mean of the middle pair for even
    lengths.
    """

    days: pd.DataFrame
    label: str = ""
    warmup_days: int = 0
    exclude_gave_up: bool = False
    skipped_envs: int = 0

    @classmethod
    def from_records(cls, records: Iterable[Mapping], **kwargs) -> "RunStats":
        columns = DAY_COLUMNS + MEMORY_COLUMNS[2:]
        frame = pd.DataFrame(list(records), columns=columns)
        if not frame.empty:
            frame = frame.sort_values(["env_index", "day"]).reset_index(drop=True)
        frame["gave_up"] = frame["gave_up"].astype(bool)
        return cls(days=frame, **kwargs)

    @classmethod
    def from_matrix(cls, matrix, **kwargs) -> "RunStats":
        """Build from a plain env x day steps matrix (days numbered from 1)."""
        records = [
            {"env_index": i, "day": d + 1, "steps": int(s), "plannings": 0, "gave_up": False}
            for i, row in enumerate(matrix)
            for d, s in enumerate(row)
        ]
        return cls.from_records(records, **kwargs)

    @property
    def env_count(self) -> int:
        return int(self.days["env_index"].nunique())

    def steps_matrix(self) -> pd.DataFrame:
        """Steps pivoted to environments x days, after warmup/gave-up filtering."""
        frame = self.days[self.days["day"] > self.warmup_days]
        if self.exclude_gave_up:
            frame = frame[~frame["gave_up"]]
        return frame.pivot(index="env_index", columns="day", values="steps").astype(float)

    def summary(self) -> Dict[str, float]:
        matrix = self.steps_matrix()
        if matrix.empty:
            return {name: float("nan") for name in AGGREGATES}
        per_env_mean = matrix.mean(axis=1, skipna=True)
        per_env_median = matrix.median(axis=1, skipna=True)
        per_env_max = matrix.max(axis=1, skipna=True)
        return {
            "mean_mean": float(per_env_mean.mean()),
            "med_mean": float(per_env_median.mean()),
            "med_med": float(np.median(per_env_median.dropna())),
            "max_mean": float(per_env_max.mean()),
            "max_max": float(np.nanmax(matrix.to_numpy())),
        }

    @property
    def mean_mean(self) -> float:
        return self.summary()["mean_mean"]

    def _completed(self, frame: pd.DataFrame) -> pd.DataFrame:
        return frame[~frame["gave_up"]] if self.exclude_gave_up else frame

    def daily_means(self) -> pd.Series:
        """Mean steps per day across environments (no warmup filtering)."""
        return self._completed(self.days).groupby("day")["steps"].mean()

    def mean_over_days(self, first: int, last: int) -> float:
        frame = self._completed(self.days)
        frame = frame[(frame["day"] >= first) & (frame["day"] <= last)]
        return float(frame["steps"].mean())

    def gave_up_count(self) -> int:
        return int(self.days["gave_up"].sum())

    def memory_stats(self) -> Dict[str, Optional[float]]:
        """Planning and memory-consumption statistics."""
        days = self.days

        def _mean(series: pd.Series) -> Optional[float]:
            series = series.dropna()
            return float(series.mean()) if len(series) else None

        later = days[days["day"] >= 2]["plannings"]
        last_day = days["day"].max() if len(days) else None
        return {
            "median_plannings": float(later.median()) if len(later) else None,
            "mean_memory_size_last_day": _mean(days[days["day"] == last_day]["memory_size"]) if last_day else None,
            "mean_visited_day1": _mean(days[days["day"] == 1]["visited_cells"]),
            "mean_visited_day2": _mean(days[days["day"] == 2]["visited_cells"]),
        }


def records_from_results(env_index: int, results) -> List[Dict]:
    """Flatten :class:`~foragesim.core.agent.DayResult` objects into table rows."""
    return [
        {
            "env_index": env_index,
            "day": r.day,
            "steps": r.steps,
            "plannings": r.plannings,
            "gave_up": r.gave_up,
            "memory_size": r.memory_size,
            "visited_cells": r.visited_cells,
        }
        for r in results
    ]
