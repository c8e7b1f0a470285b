from __future__ import annotations

import logging
from typing import TYPE_CHECKING, List, NamedTuple, Optional, Set, Tuple

import numpy as np

from ...core.grid_env import ACTIONS, Action, CellState
from ...core.localization import LocationEstimate
from ..base_strategy import BaseStrategy
from ..memoryless import _requires
from ..visits_path import PlanMap
from .memory import DAILY_WINDOW, WITHIN_DAY_WINDOW, EpisodicMemory, EpisodicStore, PredictorBank, memory_type_of
from .planner import Box, astar, bounding_box, box_perimeter

if TYPE_CHECKING:  # pragma: no cover
    from ...core.agent import StrategyContext

logger = logging.getLogger(__name__)


class BarrierOdds(NamedTuple):
    locations: List[LocationEstimate]
    low: np.ndarray
    high: np.ndarray


DEFAULT_OPTIONS = {
    "memory_horizon": 5,
    "food_memory_horizon": None,
    "within_day_window": WITHIN_DAY_WINDOW,
    "daily_window": DAILY_WINDOW,
    "plan_iterations": 5,
    "food_threshold": 0.01,
    "plan_margin": 2,
}


class ProbMapStrategy(BaseStrategy):
    """Plans towards probable food over a sampled barrier map.

    Every tick the four adjacent observations score and update the
    predictors of the memories held for those locations, then become today's
    episodic memories. Planning samples a goal among the food candidates and
    a barrier map from the best predictor of each remembered location, then
    runs bounded A*; unknown locations count as empty. The plan is followed
    until an execution failure, which triggers one replanning per tick.
    """

    STRATEGY_TYPE_ID = "probmap"

    def __init__(self, rng=None, **kwargs):
        options = {**DEFAULT_OPTIONS, **kwargs}
        super().__init__(rng=rng, **options)
        self.memory_horizon = int(options["memory_horizon"])
        self.plan_iterations = int(options["plan_iterations"])
        self.food_threshold = float(options["food_threshold"])
        self.plan_margin = int(options["plan_margin"])
        self.store = EpisodicStore(self.memory_horizon, options["food_memory_horizon"])
        self.bank = PredictorBank(int(options["within_day_window"]), int(options["daily_window"]))
        self.today = 0
        self.current_plan: Optional[PlanMap] = None
        self.plan_goal: Optional[LocationEstimate] = None
        self._planning_count = 0
        self._last_plan_tick: Optional[Tuple[int, int]] = None

    @staticmethod
    def get_strategy_def():
        return {
            "id": "probmap",
            "name": "Probabilistic map",
            "description": "Predicts cell contents from episodic memories and plans to likely food with A*.",
            "requires": _requires(localization=True, within_day=True, multi_day=True, planning=True),
            "options": [
                {"key": "memory_horizon", "type": "int", "default": 5, "help": "Days an episodic memory is kept"},
                {"key": "food_memory_horizon", "type": "int", "default": None,
                 "help": "Days a food memory is kept (defaults to memory_horizon)"},
                {"key": "within_day_window", "type": "int", "default": WITHIN_DAY_WINDOW,
                 "help": "Window size of within-day predictors"},
                {"key": "daily_window", "type": "int", "default": DAILY_WINDOW,
                 "help": "Window size of daily predictors"},
                {"key": "plan_iterations", "type": "int", "default": 5, "help": "A* attempts per planning session"},
                {"key": "food_threshold", "type": "float", "default": 0.01,
                 "help": "Minimum food probability for a goal candidate"},
                {"key": "plan_margin", "type": "int", "default": 2,
                 "help": "Cells added around the explored area for the search box"},
            ],
        }

    # ---------- Day lifecycle ----------

    def new_day(self, ctx: "StrategyContext") -> None:
        # a frozen map stays as of the last learning day, memory ages included
        if not self.frozen:
            self.today = ctx.day
            self.store.prune(self.today)
        self.current_plan = None
        self.plan_goal = None
        self._last_plan_tick = None
        self.bank.begin_day()
        if logger.isEnabledFor(logging.DEBUG):
            candidates = self.food_candidates()
            listed = [(str(loc.absolute(ctx.home)), f"{p:.2f}") for loc, p in candidates]
            logger.debug("today: %d  food_probs: %d %s", self.today, len(candidates), listed)

    def pre_action(self, ctx: "StrategyContext") -> None:
        if not self.frozen:
            self.observe_and_update(ctx)

    def upon_reward(self, ctx: "StrategyContext") -> None:
        if self.frozen:
            return
        self.store.store(EpisodicMemory(ctx.estimate, CellState.FOOD, self.today, ctx.tick))
        self.bank.end_day()

    def on_activation(self, budget: int) -> None:
        self.current_plan = None
        self.plan_goal = None

    # ---------- Memory ----------

    def observe_and_update(self, ctx: "StrategyContext") -> None:
        for action in ACTIONS:
            location = ctx.estimate.offset(action)
            observed = ctx.sense.adjacent[action]
            for mem in self.store.memories(location, self.today):
                mt = memory_type_of(mem, self.today)
                self.bank.score(mt, observed)
                self.bank.update(mt, observed)
            self.store.store(EpisodicMemory(location, observed, self.today, ctx.tick))

    def food_candidates(self) -> List[Tuple[LocationEstimate, float]]:
        candidates = []
        for location in self.store.locations():
            memories = self.store.memories(location, self.today)
            if not any(m.object == CellState.FOOD for m in memories):
                continue
            prob = max(
                float(self.bank.predict(memory_type_of(m, self.today))[CellState.FOOD]) for m in memories
            )
            if prob > self.food_threshold:
                candidates.append((location, prob))
        return candidates

    def barrier_odds(self) -> BarrierOdds:
        """Per remembered location, the Barrier slice of its best prediction.

        Outcomes are ordered Empty, Barrier, Food, so a uniform draw ``u``
        samples Barrier exactly when ``low <= u < high``.
        """
        locations, low, high = [], [], []
        for location in self.store.locations():
            memories = self.store.memories(location, self.today)
            if not memories:
                continue
            best = self.bank.best_type({memory_type_of(m, self.today) for m in memories})
            dist = self.bank.predict(best)
            locations.append(location)
            low.append(dist[CellState.EMPTY])
            high.append(dist[CellState.EMPTY] + dist[CellState.BARRIER])
        return BarrierOdds(locations, np.asarray(low), np.asarray(high))

    def sample_barrier_map(self, rng, odds: Optional[BarrierOdds] = None) -> Set[LocationEstimate]:
        if odds is None:
            odds = self.barrier_odds()
        draws = rng.random(len(odds.locations))
        hits = np.flatnonzero((draws >= odds.low) & (draws < odds.high))
        return {odds.locations[i] for i in hits}

    # ---------- Planning ----------

    @staticmethod
    def plan_bound(ctx: "StrategyContext", box: Box) -> int:
        """Longest plan worth searching: the ticks left in this activation's
        budget, or the perimeter of the search box when unbudgeted."""
        if ctx.budget_left is not None:
            return ctx.budget_left
        return box_perimeter(box)

    def make_plan(self, ctx: "StrategyContext") -> Optional[PlanMap]:
        start = ctx.estimate
        candidates = [(loc, p) for loc, p in self.food_candidates() if loc != start]
        self._last_plan_tick = (ctx.day, ctx.tick)
        if not candidates:
            logger.debug("Day %d tick %d: no food candidates, planning skipped", ctx.day, ctx.tick)
            return None

        self._planning_count += 1
        locations = [loc for loc, _ in candidates]
        weights = [p for _, p in candidates]
        total = sum(weights)
        probs = [w / total for w in weights]
        box = bounding_box(self.store.locations() + locations + [start], self.plan_margin)
        max_len = self.plan_bound(ctx, box)
        odds = self.barrier_odds()

        for iteration in range(1, self.plan_iterations + 1):
            goal = locations[int(self.rng.choice(len(locations), p=probs))]
            barriers = self.sample_barrier_map(self.rng, odds)
            plan = astar(start, goal, barriers, max_len, box)
            if plan is not None:
                logger.debug(
                    "Day %d tick %d: planned %d steps to %s (iteration %d)",
                    ctx.day, ctx.tick, len(plan), tuple(goal), iteration,
                )
                self.current_plan, self.plan_goal = plan, goal
                return plan
        logger.debug("Day %d tick %d: planning failed after %d iterations", ctx.day, ctx.tick, self.plan_iterations)
        self.current_plan, self.plan_goal = None, None
        return None

    def _plan_action(self, ctx: "StrategyContext") -> Optional[Action]:
        if self.current_plan is None:
            return None
        if self.plan_goal is not None and ctx.estimate == self.plan_goal:
            return None
        action = self.current_plan.get(ctx.estimate)
        if action is None or action not in ctx.sense.legal:
            return None
        return action

    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        if self.current_plan is None:
            if self.make_plan(ctx) is None:
                return None
        action = self._plan_action(ctx)
        if action is not None:
            return action
        if self._last_plan_tick == (ctx.day, ctx.tick):
            self.current_plan = None
            return None
        logger.debug("Day %d tick %d: execution failure at %s, replanning", ctx.day, ctx.tick, tuple(ctx.estimate))
        if self.make_plan(ctx) is None:
            return None
        action = self._plan_action(ctx)
        if action is None:
            self.current_plan = None
        return action

    # ---------- Bookkeeping ----------

    @property
    def planning_count(self) -> int:
        return self._planning_count

    def memory_size(self) -> int:
        return self.store.size()
