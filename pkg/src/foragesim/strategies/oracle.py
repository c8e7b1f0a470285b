"""Reference strategy with the true map and the true position."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Optional

from ..core.grid_env import Action, Environment, Position
from .base_strategy import BaseStrategy
from .memoryless import _requires
from .probmap.planner import astar
from .visits_path import PlanMap

if TYPE_CHECKING:  # pragma: no cover
    from ..core.agent import StrategyContext

logger = logging.getLogger(__name__)


class OracleStrategy(BaseStrategy):
    STRATEGY_TYPE_ID = "oracle"
    NEVER_FAILS = True
    REQUIRES_WORLD = True

    def __init__(self, rng=None, **kwargs):
        super().__init__(rng=rng, **kwargs)
        self.env: Optional[Environment] = None
        self.position: Optional[Position] = None
        self.plan: Optional[PlanMap] = None
        self._planning_count = 0

    @staticmethod
    def get_strategy_def():
        return {
            "id": "oracle",
            "name": "Oracle",
            "description": "Shortest path over the true, up-to-date map from the true position.",
            "requires": _requires(planning=True),
            "options": [],
        }

    def new_day(self, ctx):
        self.plan = None

    def sync_world(self, env: Environment, position: Position) -> None:
        if self.env is not env:
            self.plan = None
        self.env, self.position = env, position

    def _replan(self) -> None:
        env = self.env
        self._planning_count += 1
        self.plan = astar(self.position, env.food, env.barriers, env.n * env.n, box=(0, 0, env.n - 1, env.n - 1))
        if self.plan is None:
            logger.error("Oracle: no path from %s to food %s on day %d", self.position, env.food, env.day)

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        if self.env is None:
            raise RuntimeError("oracle selected before sync_world")
        if self.plan is None or self.position not in self.plan:
            self._replan()
        if self.plan is None:
            return None
        action = self.plan.get(self.position)
        if action is None or action not in ctx.sense.legal:
            self._replan()
            action = self.plan.get(self.position) if self.plan else None
        return action

    @property
    def planning_count(self) -> int:
        return self._planning_count
