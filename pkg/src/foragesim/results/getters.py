from __future__ import annotations

import json
from typing import Dict, Optional

import pandas as pd

from .reporters import CONFIG_FILE, DAYS_FILE, MEMORY_FILE, RATIOS_FILE, SUMMARY_FILE, SWEEP_FILE


class Getter:
    """Reads a run directory back into DataFrames."""

    def __init__(self, store):
        self.store = store

    def get_days(self) -> pd.DataFrame:
        """Per-(environment, day) rows; ``gave_up`` converted back to bool."""
        frame = pd.read_csv(self.store.path(DAYS_FILE))
        frame["gave_up"] = frame["gave_up"].astype(bool)
        return frame

    def _statistics(self, name: str) -> Dict[str, Optional[float]]:
        frame = pd.read_csv(self.store.path(name))
        return {
            row.statistic: (None if pd.isna(row.value) else float(row.value))
            for row in frame.itertuples(index=False)
        }

    def get_summary(self) -> Dict[str, Optional[float]]:
        return self._statistics(SUMMARY_FILE)

    def get_memory_stats(self) -> Dict[str, Optional[float]]:
        return self._statistics(MEMORY_FILE)

    def get_config(self) -> dict:
        return json.loads(self.store.path(CONFIG_FILE).read_text(encoding="utf-8"))

    def get_sweep(self) -> pd.DataFrame:
        return pd.read_csv(self.store.path(SWEEP_FILE))

    def get_ratios(self) -> pd.DataFrame:
        return pd.read_csv(self.store.path(RATIOS_FILE))
