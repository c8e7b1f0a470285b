from .entry import ResultStore
from .stats import AGGREGATES, RunStats, records_from_results

__all__ = ["ResultStore", "RunStats", "AGGREGATES", "records_from_results"]
