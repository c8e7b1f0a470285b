"""foragesim: daily foraging agents in changing grid worlds."""

from __future__ import annotations

from .default import ConfigError, get_default_config, resolve_config
from .harness import run_experiment, sweep
from .models import ExperimentConfig

__all__ = ["ConfigError", "ExperimentConfig", "get_default_config", "resolve_config", "run_experiment", "sweep"]
