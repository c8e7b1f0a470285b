"""Least-visited exploration (a day's memory) and path memory (yesterday's path)."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Dict, Optional

from ..core.grid_env import ACTIONS, Action
from ..core.localization import LocationEstimate, integrate
from .base_strategy import BaseStrategy
from .memoryless import _requires

if TYPE_CHECKING:  # pragma: no cover
    from ..core.agent import StrategyContext

logger = logging.getLogger(__name__)

PlanMap = Dict[LocationEstimate, Action]


class LeastVisitedStrategy(BaseStrategy):
    """Moves to the neighbouring estimate with the lowest visit count today."""

    STRATEGY_TYPE_ID = "least_visited"
    NEVER_FAILS = True

    def __init__(self, rng=None, **kwargs):
        super().__init__(rng=rng, **kwargs)
        self.counts: Dict[LocationEstimate, int] = {}

    @staticmethod
    def get_strategy_def():
        return {
            "id": "least_visited",
            "name": "Least visited",
            "description": "Move to the adjacent location visited least today (random tie-break).",
            "requires": _requires(localization=True, within_day=True),
            "options": [],
        }

    def new_day(self, ctx):
        self.counts = {}

    def pre_action(self, ctx):
        self.counts[ctx.estimate] = self.counts.get(ctx.estimate, 0) + 1

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        best, best_count = [], None
        for action in ACTIONS:
            if action not in ctx.sense.legal:
                continue
            count = self.counts.get(integrate(ctx.estimate, action), 0)
            if best_count is None or count < best_count:
                best, best_count = [action], count
            elif count == best_count:
                best.append(action)
        return self.choice(best) if best else None

    def day_statistics(self):
        return {"visited_cells": len(self.counts)}


class PathMemoryStrategy(BaseStrategy):
    """Replays yesterday's location -> action recording.

    Every executed action (whichever strategy chose it, bypass included) is
    recorded against the estimate it was taken from; later visits overwrite.
    At the start of a day the recording becomes the replay map.
    """

    STRATEGY_TYPE_ID = "path_memory"

    def __init__(self, rng=None, **kwargs):
        super().__init__(rng=rng, **kwargs)
        self.replay: PlanMap = {}
        self.replay_goal: Optional[LocationEstimate] = None
        self.recording: PlanMap = {}
        self.recording_goal: Optional[LocationEstimate] = None

    @staticmethod
    def get_strategy_def():
        return {
            "id": "path_memory",
            "name": "Path memory",
            "description": "Follow the location-to-action map recorded on the previous day.",
            "requires": _requires(localization=True, within_day=True, multi_day=True),
            "options": [],
        }

    def new_day(self, ctx):
        if self.frozen:
            return
        if self.recording:
            self.replay, self.replay_goal = self.recording, self.recording_goal
        self.recording, self.recording_goal = {}, None

    def post_action(self, ctx):
        if not self.frozen and ctx.action is not None:
            self.recording[ctx.estimate] = ctx.action

    def upon_reward(self, ctx):
        if not self.frozen:
            self.recording_goal = ctx.estimate

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        if self.replay_goal is not None and ctx.estimate == self.replay_goal:
            logger.debug("Path memory: remembered goal %s reached but no food", ctx.estimate)
            return None
        action = self.replay.get(ctx.estimate)
        if action is None or action not in ctx.sense.legal:
            return None
        return action

    def memory_size(self) -> int:
        return len(self.replay) + len(self.recording)
