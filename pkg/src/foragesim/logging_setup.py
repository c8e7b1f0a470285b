"""Logging configuration for foragesim runs.

Run-level events (configuration problems, skipped environments, capped days,
freezing) go through :mod:`logging`. Scheduler switches, planning sessions
and food candidates are logged at DEBUG by the modules that make them; they
are per-tick and flood a console, so :func:`setup_logging` can lower the
level of a few named loggers only. The per-tick movement record of a run is
not a log: it is ``trace.txt`` in the run directory
(:class:`~foragesim.results.reporters.TraceWriter`).
"""

from __future__ import annotations

import json
import logging
import logging.config
from pathlib import Path
from typing import Iterable, Literal, Optional

from .default import LOG_FILE, PROJECT_ROOT, RUNTIME_ROOT, ensure_runtime_dirs

DEFAULT_FORMAT = "%(asctime)s | %(levelname).1s | %(name)s | %(message)s"
DEFAULT_DATEFMT = "%Y-%m-%d %H:%M:%S"
DEFAULT_LEVEL = "INFO"
CONFIG_FILENAME = "logging.config.json"

Level = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def _dict_config_from_file(path: Path) -> Optional[dict]:
    try:
        return json.loads(path.read_text())
    except Exception:
        return None


def _anchor_log_files(cfg: dict) -> dict:
    """Resolve relative handler filenames against the runtime root, not the cwd."""
    for handler in cfg.get("handlers", {}).values():
        filename = handler.get("filename")
        if filename and not Path(filename).expanduser().is_absolute():
            handler["filename"] = str(RUNTIME_ROOT / filename)
    return cfg


def _default_dict_config(level: str) -> dict:
    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "level": level,
            "formatter": "default",
        },
        "file": {
            "class": "logging.handlers.RotatingFileHandler",
            "level": level,
            "formatter": "default",
            "filename": str(LOG_FILE),
            "maxBytes": 5 * 1024 * 1024,
            "backupCount": 3,
            "encoding": "utf-8",
        },
    }
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {"format": DEFAULT_FORMAT, "datefmt": DEFAULT_DATEFMT},
        },
        "handlers": handlers,
        "root": {"level": level, "handlers": list(handlers.keys())},
    }


def setup_logging(
    level: Level = DEFAULT_LEVEL,
    config_path: Optional[Path] = None,
    debug_modules: Iterable[str] = (),
) -> None:
    """Configure root logging.

    Priority:
    1) dictConfig from ``logging.config.json`` (if valid). An explicit
       ``level`` other than the default still overrides the root level.
    2) Minimal rotating file + console handlers.

    Args:
        level: Root level.
        config_path: Alternative dictConfig JSON file.
        debug_modules: Logger names (e.g. ``foragesim.strategies.probmap``)
            switched to DEBUG while the root keeps ``level``.
    """
    ensure_runtime_dirs()
    cfg_path = config_path or (PROJECT_ROOT / CONFIG_FILENAME)
    cfg = _dict_config_from_file(cfg_path) if cfg_path.exists() else None

    if cfg:
        logging.config.dictConfig(_anchor_log_files(cfg))
        if level != DEFAULT_LEVEL:
            root = logging.getLogger()
            root.setLevel(level)
            for handler in root.handlers:
                handler.setLevel(level)
    else:
        logging.config.dictConfig(_default_dict_config(level))

    modules = list(debug_modules)
    if modules:
        root = logging.getLogger()
        for handler in root.handlers:
            handler.setLevel(logging.DEBUG)
        for name in modules:
            logging.getLogger(name).setLevel(logging.DEBUG)
