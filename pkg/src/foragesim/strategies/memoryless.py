"""Strategies with little or no memory: random, biased random, greedy, memory-greedy."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Optional

from ..core.grid_env import ACTIONS, Action, greedy_actions
from ..core.localization import LocationEstimate
from .base_strategy import BaseStrategy

if TYPE_CHECKING:  # pragma: no cover
    from ..core.agent import StrategyContext

logger = logging.getLogger(__name__)


def _requires(localization=False, smell=False, within_day=False, multi_day=False, planning=False) -> dict:
    return {
        "localization": localization,
        "smell": smell,
        "within_day_memory": within_day,
        "multi_day_memory": multi_day,
        "planning": planning,
    }


def _ordered(actions) -> list:
    return [a for a in ACTIONS if a in actions]


class RandomStrategy(BaseStrategy):
    STRATEGY_TYPE_ID = "random"
    NEVER_FAILS = True

    @staticmethod
    def get_strategy_def():
        return {
            "id": "random",
            "name": "Random",
            "description": "Uniformly random legal move.",
            "requires": _requires(),
            "options": [],
        }

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        legal = _ordered(ctx.sense.legal)
        return self.choice(legal) if legal else None


class BiasedRandomStrategy(BaseStrategy):
    """Random walk that does not step back unless it has to."""

    STRATEGY_TYPE_ID = "biased_random"
    NEVER_FAILS = True

    def __init__(self, rng=None, **kwargs):
        super().__init__(rng=rng, **kwargs)
        self.last_action: Optional[Action] = None

    @staticmethod
    def get_strategy_def():
        return {
            "id": "biased_random",
            "name": "Biased random",
            "description": "Random legal move, never reversing the last executed action when avoidable.",
            "requires": _requires(),
            "options": [],
        }

    def new_day(self, ctx):
        self.last_action = None

    def pre_action(self, ctx):
        self.last_action = ctx.last_executed_action

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        legal = _ordered(ctx.sense.legal)
        if not legal:
            return None
        if self.last_action is not None and len(legal) > 1:
            back = self.last_action.reverse
            legal = [a for a in legal if a != back]
        return self.choice(legal)


class GreedyStrategy(BaseStrategy):
    """Follows the smell gradient; fails when barriers block it."""

    STRATEGY_TYPE_ID = "greedy"

    @staticmethod
    def get_strategy_def():
        return {
            "id": "greedy",
            "name": "Greedy (smell)",
            "description": "Random pick among the legal moves that reduce distance to food.",
            "requires": _requires(smell=True),
            "options": [],
        }

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        options = _ordered(ctx.sense.greedy & ctx.sense.legal)
        return self.choice(options) if options else None


class MemoryGreedyStrategy(BaseStrategy):
    """Greedy towards yesterday's food location, using the location estimate."""

    STRATEGY_TYPE_ID = "memory_greedy"

    def __init__(self, rng=None, **kwargs):
        super().__init__(rng=rng, **kwargs)
        self.remembered_food: Optional[LocationEstimate] = None

    @staticmethod
    def get_strategy_def():
        return {
            "id": "memory_greedy",
            "name": "Memory greedy",
            "description": "Greedy moves towards the remembered food location (no smell needed).",
            "requires": _requires(localization=True, multi_day=True),
            "options": [],
        }

    def upon_reward(self, ctx):
        if not self.frozen:
            self.remembered_food = ctx.estimate

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        if self.remembered_food is None:
            return None
        options = _ordered(greedy_actions(ctx.estimate, self.remembered_food) & ctx.sense.legal)
        return self.choice(options) if options else None
