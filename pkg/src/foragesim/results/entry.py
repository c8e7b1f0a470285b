from __future__ import annotations

from pathlib import Path
from typing import Union

from .getters import Getter
from .reporters import Reporter


class ResultStore:
    """Single entry point to a run directory.

    It creates the directory and instantiates the reporter (writes) and the
    getter (reads), exposing their useful methods as aliases.
    """

    def __init__(self, root: Union[Path, str]):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

        self.reporter = Reporter(store=self)
        self.getter = Getter(store=self)

        self.report_run = self.reporter.report_run
        self.report_config = self.reporter.report_config
        self.report_days = self.reporter.report_days
        self.report_summary = self.reporter.report_summary
        self.report_memory_stats = self.reporter.report_memory_stats
        self.report_sweep = self.reporter.report_sweep
        self.open_trace = self.reporter.open_trace

        self.get_days = self.getter.get_days
        self.get_summary = self.getter.get_summary
        self.get_memory_stats = self.getter.get_memory_stats
        self.get_config = self.getter.get_config
        self.get_sweep = self.getter.get_sweep
        self.get_ratios = self.getter.get_ratios

    def path(self, name: str) -> Path:
        return self.root / name

    def exists(self, name: str) -> bool:
        return self.path(name).exists()
