"""Programmatic entry point: run one configured experiment and store its results."""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

from .default import ensure_runtime_dirs, resolve_runs_dir
from .harness import run_experiment
from .models import ExperimentConfig
from .results import ResultStore, RunStats

logger = logging.getLogger(__name__)


def main(config: ExperimentConfig, out: Optional[Union[Path, str]] = None) -> RunStats:
    """Run ``config`` and write config echo, days, summary and memory CSVs.

    Args:
        config: Validated experiment configuration.
        out: Run directory. Defaults to a timestamped folder under the
            configured runs directory.

    Returns:
        RunStats: The aggregated results.
    """
    if out is None:
        ensure_runtime_dirs()
        stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
        base = resolve_runs_dir(config.runs_dir)
        out = base / f"run-{config.agent_label}-seed{config.master_seed}-{stamp}"
    store = ResultStore(out)
    store.report_config(config)
    if config.trace:
        with store.open_trace() as trace_writer:
            stats = run_experiment(config, trace_writer)
    else:
        stats = run_experiment(config)
    store.report_run(stats)
    return stats
