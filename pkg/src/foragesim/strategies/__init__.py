from .base_strategy import BaseStrategy
from .memoryless import BiasedRandomStrategy, GreedyStrategy, MemoryGreedyStrategy, RandomStrategy
from .oracle import OracleStrategy
from .probmap import ProbMapStrategy
from .visits_path import LeastVisitedStrategy, PathMemoryStrategy

ALL_STRATEGIES = [
    RandomStrategy,
    BiasedRandomStrategy,
    GreedyStrategy,
    MemoryGreedyStrategy,
    LeastVisitedStrategy,
    PathMemoryStrategy,
    ProbMapStrategy,
    OracleStrategy,
]

STRATEGIES_BY_ID = {cls.STRATEGY_TYPE_ID: cls for cls in ALL_STRATEGIES}


class UnknownStrategy(KeyError):
    """Raised when a strategy name is not in the registry."""


def strategy_class(name: str):
    try:
        return STRATEGIES_BY_ID[name]
    except KeyError:
        known = ", ".join(sorted(STRATEGIES_BY_ID))
        raise UnknownStrategy(f"unknown strategy '{name}' (known: {known})") from None


def strategy_from_name(name: str, rng=None, **options) -> BaseStrategy:
    return strategy_class(name)(rng=rng, **options)
