from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import IO, Optional

import pandas as pd

from ..core.agent import TraceRecord
from .stats import DAY_COLUMNS, MEMORY_COLUMNS, RunStats

logger = logging.getLogger(__name__)

DAYS_FILE = "days.csv"
SUMMARY_FILE = "summary.csv"
MEMORY_FILE = "memory_stats.csv"
MEMORY_DAYS_FILE = "memory_days.csv"
CONFIG_FILE = "config.json"
TRACE_FILE = "trace.txt"
SWEEP_FILE = "sweep.csv"
RATIOS_FILE = "ratios.csv"
FLOAT_FORMAT = "%.6f"


def _statistic_frame(values: dict) -> pd.DataFrame:
    return pd.DataFrame({"statistic": list(values), "value": list(values.values())})


class Reporter:
    """Writes the files of a run directory.

    Filesystem errors are not caught; they surface to the caller unchanged.
    """

    def __init__(self, store):
        self.store = store

    def report_config(self, config) -> Path:
        """Echo the resolved configuration in the sectioned form (reloadable with ``--config``)."""
        path = self.store.path(CONFIG_FILE)
        path.write_text(json.dumps(config.to_nested(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    def report_days(self, stats: RunStats) -> Path:
        """One row per (environment, day): env_index, day, steps, plannings, gave_up."""
        path = self.store.path(DAYS_FILE)
        frame = stats.days[DAY_COLUMNS].copy()
        frame["gave_up"] = frame["gave_up"].astype(int)
        frame.to_csv(path, index=False, lineterminator="\n")
        return path

    def report_summary(self, stats: RunStats) -> Path:
        path = self.store.path(SUMMARY_FILE)
        _statistic_frame(stats.summary()).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return path

    def report_memory_stats(self, stats: RunStats) -> Path:
        path = self.store.path(MEMORY_FILE)
        frame = stats.days[MEMORY_COLUMNS].copy()
        extra = _statistic_frame(stats.memory_stats())
        extra.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        frame.to_csv(self.store.path(MEMORY_DAYS_FILE), index=False, float_format=FLOAT_FORMAT,
                     lineterminator="\n")
        return path

    def report_run(self, stats: RunStats, config=None) -> None:
        if config is not None:
            self.report_config(config)
        self.report_days(stats)
        self.report_summary(stats)
        self.report_memory_stats(stats)
        logger.info("Run results written to %s", self.store.root)

    def report_sweep(self, long_table: pd.DataFrame, ratios: Optional[pd.DataFrame] = None) -> Path:
        path = self.store.path(SWEEP_FILE)
        long_table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        if ratios is not None:
            ratios.to_csv(self.store.path(RATIOS_FILE), index=False, float_format=FLOAT_FORMAT,
                          lineterminator="\n")
        logger.info("Sweep results written to %s", self.store.root)
        return path

    def open_trace(self) -> "TraceWriter":
        return TraceWriter(self.store.path(TRACE_FILE).open("w", encoding="utf-8"))


class TraceWriter:
    """Line-oriented per-tick trace: env day tick strategy estimate position action bypass."""

    def __init__(self, stream: IO[str]):
        self.stream = stream
        self.stream.write("env day tick strategy est_x est_y x y action bypass\n")

    def for_env(self, env_index: int):
        def write(record: TraceRecord) -> None:
            self.stream.write(
                f"{env_index} {record.day} {record.tick} {record.strategy} "
                f"{record.estimate[0]} {record.estimate[1]} {record.position[0]} {record.position[1]} "
                f"{record.action.name} {int(record.bypass)}\n"
            )

        return write

    def close(self) -> None:
        self.stream.close()

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
