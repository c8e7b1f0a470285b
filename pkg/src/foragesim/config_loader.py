"""Helpers to load configuration files and command-line overrides."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Union

from .default import DEFAULT_CONFIG, PROJECT_ROOT, ConfigError, get_default_config, merge_config, resolve_config
from .models import ExperimentConfig

logger = logging.getLogger(__name__)


def parse_value(text: str) -> Any:
    """``"0.02"`` -> 0.02, ``"true"`` -> True, ``"none"`` -> None, anything else stays a string."""
    text = text.strip()
    lowered = text.lower()
    if lowered in ("none", "null", ""):
        return None
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return json.loads(text)
    except ValueError:
        return text


def _section_of(key: str) -> str:
    owners = [section for section, values in DEFAULT_CONFIG.items() if key in values]
    if len(owners) != 1:
        raise ConfigError(f"unknown configuration key '{key}' (use section.key)")
    return owners[0]


def set_dotted(config: dict, key: str, value: Any) -> dict:
    """Set ``section.key`` (or a bare key that belongs to exactly one section)."""
    section, _, name = key.strip().rpartition(".")
    if not section:
        section = _section_of(name)
    config.setdefault(section, {})[name] = value
    return config


def parse_key_values(lines: Iterable[str]) -> Dict[str, Dict[str, Any]]:
    """Parse line-oriented ``key=value`` text into a sectioned mapping.

    Blank lines and ``#`` comments are skipped.
    """
    config: Dict[str, Dict[str, Any]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        set_dotted(config, key, parse_value(value))
    return config


def apply_overrides(raw: Optional[Mapping], overrides: Mapping[str, Any]) -> dict:
    """Overlay dotted-key overrides (CLI flags) onto a sectioned mapping."""
    config = merge_config(get_default_config(), raw)
    for key, value in overrides.items():
        if value is not None:
            set_dotted(config, key, value)
    return config


def read_config_file(path: Union[Path, str, None] = None) -> dict:
    """Read a config file into a sectioned mapping without validating it.

    A missing or unreadable file logs and yields an empty mapping, so the
    defaults apply.
    """
    config_path = Path(path) if path else PROJECT_ROOT / "config.json"
    if not config_path.exists():
        logger.warning("Configuration file %s not found; using defaults", config_path)
        return {}
    try:
        text = config_path.read_text(encoding="utf-8")
        if config_path.suffix == ".json":
            raw = json.loads(text)
        else:
            raw = parse_key_values(text.splitlines())
        logger.info("Configuration loaded successfully from %s", config_path)
    except ConfigError:
        raise
    except Exception as exc:  # noqa: BLE001
        logger.error("Failed to read configuration %s: %s. Falling back to defaults.", config_path, exc)
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{config_path}: top level must be a mapping of sections")
    return raw


def load_config_file(path: Union[Path, str, None] = None) -> ExperimentConfig:
    """Load a config file (if present), merge with defaults and validate.

    Args:
        path: Optional explicit path. Defaults to ``PROJECT_ROOT / "config.json"``.

    Returns:
        ExperimentConfig: A validated configuration.

    Raises:
        ConfigError: If the file holds invalid values.
    """
    resolved = resolve_config(read_config_file(path))
    logger.info("Configuration validated and normalized")
    return resolved


def load_and_run(main_callable, path: Union[Path, str, None] = None):
    """Utility runner to load config then invoke the provided main callable."""
    config = load_config_file(path)
    return main_callable(config)
