"""Default configuration values for foragesim.

This module centralizes every tunable of an experiment. Use
:func:`get_default_config` to obtain a fresh copy before applying
user-supplied overrides, and :func:`resolve_config` to turn a (partial)
sectioned mapping into a validated :class:`~foragesim.models.ExperimentConfig`.
"""

from __future__ import annotations

import logging
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import ValidationError

from .models import ExperimentConfig

logger = logging.getLogger(__name__)

# Project location helpers.
PACKAGE_ROOT = Path(__file__).resolve().parent
PROJECT_ROOT = PACKAGE_ROOT.parent if PACKAGE_ROOT.parent.name != "src" else PACKAGE_ROOT.parent.parent

# Runtime paths (no config-file dependency).
RUNTIME_ROOT = PROJECT_ROOT if (PROJECT_ROOT / "pyproject.toml").exists() else Path.home() / ".foragesim"
RUNS_DIR = RUNTIME_ROOT / "runs"
LOG_FILE = RUNTIME_ROOT / "foragesim.log"


class ConfigError(ValueError):
    """Raised when a configuration value is missing or invalid."""


def ensure_runtime_dirs() -> None:
    """Create expected runtime directories."""
    for path in [RUNTIME_ROOT, RUNS_DIR, LOG_FILE.parent]:
        path.mkdir(parents=True, exist_ok=True)


DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "grid": {"n": 15, "barrier_proportion": 0.3},
    "change": {"change_rate": 0.1},
    "noise": {"p": 0.02, "p2": 0.5},
    "agent": {"strategies": "probmap:5,least_visited:5", "budget_multiplier": 2},
    "probmap": {
        "memory_horizon": 5,
        "food_memory_horizon": None,
        "within_day_window": 10,
        "daily_window": 5,
        "plan_iterations": 5,
        "food_threshold": 0.01,
        "plan_margin": 2,
    },
    "experiment": {
        "k1": 50,
        "k2": 20,
        "step_cap": 200_000,
        "master_seed": 0,
        "food_pattern": "fixed",
        "corners": 1,
        "freeze_after_day": None,
        "warmup_days": 0,
        "exclude_gave_up": False,
    },
    "output": {"runs_dir": str(RUNS_DIR), "trace": False},
}


def get_default_config() -> dict:
    """Return a deep copy of the default configuration mapping."""
    return deepcopy(DEFAULT_CONFIG)


def merge_config(base: dict, overrides: Optional[Mapping]) -> dict:
    """Overlay a sectioned mapping on ``base`` (in place) and return it.

    Unknown sections are ignored with a warning; unknown keys inside a known
    section raise :class:`ConfigError`.
    """
    for section, values in (overrides or {}).items():
        if section not in base:
            logger.warning("Ignoring unknown configuration section '%s'", section)
            continue
        if not isinstance(values, Mapping):
            raise ConfigError(f"section '{section}' must be a mapping, got {type(values).__name__}")
        for key, value in values.items():
            if key not in base[section]:
                raise ConfigError(f"unknown configuration key '{section}.{key}'")
            base[section][key] = value
    return base


def resolve_config(config: Optional[Mapping] = None) -> ExperimentConfig:
    """Validate and normalize external configuration.

    Args:
        config: Sectioned mapping (same shape as ``DEFAULT_CONFIG``), possibly
            partial. Missing values take their defaults.

    Returns:
        ExperimentConfig: The validated configuration.

    Raises:
        ConfigError: If a value is invalid.
    """
    merged = merge_config(get_default_config(), config)
    exp = merged["experiment"]
    try:
        return ExperimentConfig(
            n=merged["grid"]["n"],
            barrier_proportion=merged["grid"]["barrier_proportion"],
            change_rate=merged["change"]["change_rate"],
            noise=merged["noise"],
            strategies=merged["agent"]["strategies"],
            budget_multiplier=merged["agent"]["budget_multiplier"],
            probmap=merged["probmap"],
            k1=exp["k1"],
            k2=exp["k2"],
            step_cap=exp["step_cap"],
            master_seed=exp["master_seed"],
            food_pattern={"kind": exp["food_pattern"], "corners": exp["corners"]},
            freeze_after_day=exp["freeze_after_day"],
            warmup_days=exp["warmup_days"],
            exclude_gave_up=exp["exclude_gave_up"],
            runs_dir=merged["output"]["runs_dir"],
            trace=merged["output"]["trace"],
        )
    except (ValidationError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def resolve_runs_dir(raw: Optional[str]) -> Path:
    """Turn a configured runs directory (possibly relative) into an absolute path."""
    if not raw:
        return RUNS_DIR
    path = Path(str(raw)).expanduser()
    if not path.is_absolute():
        path = (PROJECT_ROOT / path).resolve()
    return path
