"""Composite agent: daily control loop, round-robin scheduling and bypass.

One day of activity follows the same order every tick::

    sense -> pre_action (all) -> bypass or active select_action
          -> post_action (all) -> execute -> tick += 1, integrate estimate

The scheduler keeps the active strategy until it fails or its budget runs
out, then moves to the next slot (wrapping around). A reactivated slot gets
its budget multiplied (doubled by default) for the rest of the day.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .grid_env import Action, CellState, Environment, NoiseParams, Position, SenseData, execute_action, sense
from .localization import HOME, LocationEstimate, integrate

if TYPE_CHECKING:  # pragma: no cover
    from ..strategies.base_strategy import BaseStrategy

logger = logging.getLogger(__name__)

DEFAULT_STEP_CAP = 200_000


class AllStrategiesFailed(RuntimeError):
    """Every slot failed in a row within a single round-robin cycle."""


class SwitchReason(Enum):
    FAILURE = "failure"
    TIMES_UP = "times_up"


@dataclass(frozen=True)
class StrategyContext:
    """Common information handed to every strategy callback.

    ``action``/``bypass`` describe the action chosen this tick and are only
    filled for ``post_action``. ``budget_left`` is only filled for
    ``select_action``: the ticks left in the active slot's current budget,
    ``None`` when that slot is unlimited. ``home`` is given for reporting
    absolute coordinates; no strategy navigates with it.
    """

    day: int
    tick: int
    estimate: LocationEstimate
    sense: SenseData
    last_executed_action: Optional[Action] = None
    last_action_was_bypass: bool = False
    step_cap: int = DEFAULT_STEP_CAP
    home: Position = (0, 0)
    action: Optional[Action] = None
    bypass: bool = False
    budget_left: Optional[int] = None


@dataclass
class StrategySlot:
    """A strategy together with its time budget (0 = unlimited)."""

    strategy: "BaseStrategy"
    initial_budget: int = 5
    multiplier: int = 2
    current_budget: int = field(init=False)
    ticks_used: int = 0
    activations: int = 0

    def __post_init__(self):
        if self.initial_budget < 0:
            raise ValueError(f"initial budget must be >= 0, got {self.initial_budget}")
        if self.multiplier < 1:
            raise ValueError(f"budget multiplier must be >= 1, got {self.multiplier}")
        self.current_budget = self.initial_budget

    @property
    def strategy_id(self) -> str:
        return self.strategy.name

    @property
    def unlimited(self) -> bool:
        return self.initial_budget == 0

    @property
    def times_up(self) -> bool:
        return not self.unlimited and self.ticks_used >= self.current_budget

    @property
    def budget_left(self) -> Optional[int]:
        if self.unlimited:
            return None
        return max(0, self.current_budget - self.ticks_used)


class Scheduler:
    """Round-robin over strategy slots with progressive budgets."""

    def __init__(self, slots: Sequence[StrategySlot]):
        if not slots:
            raise ValueError("an agent needs at least one strategy")
        self.slots: List[StrategySlot] = list(slots)
        self.active_index = 0

    @property
    def active(self) -> StrategySlot:
        return self.slots[self.active_index]

    def start_day(self) -> None:
        for slot in self.slots:
            slot.current_budget = slot.initial_budget
            slot.ticks_used = 0
            slot.activations = 0
        self.active_index = 0
        self._activate(0)

    def _activate(self, index: int) -> None:
        slot = self.slots[index]
        if slot.activations > 0 and not slot.unlimited:
            slot.current_budget *= slot.multiplier
        slot.activations += 1
        slot.ticks_used = 0
        self.active_index = index
        slot.strategy.on_activation(0 if slot.unlimited else slot.current_budget)

    def advance(self, reason: SwitchReason) -> str:
        """Activate the next slot and return its strategy id."""
        previous = self.active.strategy_id
        self._activate((self.active_index + 1) % len(self.slots))
        logger.debug(
            "Scheduler: %s -> %s (%s, budget=%s)",
            previous,
            self.active.strategy_id,
            reason.value,
            self.active.current_budget or "unlimited",
        )
        return self.active.strategy_id

    def charge_tick(self) -> None:
        self.active.ticks_used += 1

    def activation_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for slot in self.slots:
            counts[slot.strategy_id] = counts.get(slot.strategy_id, 0) + slot.activations
        return counts


@dataclass
class DayResult:
    day: int
    steps: int
    plannings: int = 0
    activations: Dict[str, int] = field(default_factory=dict)
    gave_up: bool = False
    memory_size: int = 0
    visited_cells: Optional[int] = None


class TraceRecord(NamedTuple):
    day: int
    tick: int
    strategy: str
    estimate: LocationEstimate
    position: Position
    action: Action
    bypass: bool


def bypass_check(sense_data: SenseData) -> Optional[Action]:
    """The action stepping onto visible adjacent food, if any."""
    for action, state in sense_data.adjacent.items():
        if state == CellState.FOOD:
            return action
    return None


class Agent:
    """A composite agent driving its strategies through daily trips."""

    def __init__(self, scheduler: Scheduler, trace: Optional[Callable[[TraceRecord], None]] = None):
        self.scheduler = scheduler
        self.trace = trace
        self.frozen = False

    @classmethod
    def from_strategies(
        cls,
        strategies: Sequence[Tuple["BaseStrategy", int]],
        multiplier: int = 2,
        trace: Optional[Callable[[TraceRecord], None]] = None,
    ) -> "Agent":
        slots = [StrategySlot(strategy=s, initial_budget=b, multiplier=multiplier) for s, b in strategies]
        return cls(Scheduler(slots), trace=trace)

    @property
    def strategies(self) -> List["BaseStrategy"]:
        return [slot.strategy for slot in self.scheduler.slots]

    def freeze(self) -> None:
        """Stop all memory updates; action selection stays live."""
        if not self.frozen:
            logger.info("Agent memories frozen")
        self.frozen = True
        for strategy in self.strategies:
            strategy.freeze()

    def _select(self, ctx: StrategyContext, env: Environment, position: Position) -> Action:
        failures = 0
        sched = self.scheduler
        while True:
            slot = sched.active
            if slot.times_up:
                sched.advance(SwitchReason.TIMES_UP)
                continue
            strategy = slot.strategy
            if strategy.REQUIRES_WORLD:
                strategy.sync_world(env, position)
            action = strategy.select_action(replace(ctx, budget_left=slot.budget_left))
            if action is not None and action in ctx.sense.legal:
                return action
            if action is not None:
                logger.debug("%s proposed illegal %s at %s", strategy.name, action.name, ctx.estimate)
            failures += 1
            if failures >= len(sched.slots):
                raise AllStrategiesFailed(
                    f"all {len(sched.slots)} strategies failed at day {ctx.day}, tick {ctx.tick}"
                )
            sched.advance(SwitchReason.FAILURE)

    def run_day(
        self,
        env: Environment,
        rng: np.random.Generator,
        noise: NoiseParams = NoiseParams(),
        step_cap: int = DEFAULT_STEP_CAP,
    ) -> DayResult:
        """Walk from home until the food cell (or ``step_cap`` ticks)."""
        strategies = self.strategies
        plannings_before = sum(s.planning_count for s in strategies)

        position = env.home
        estimate = HOME
        tick = 0
        last_action: Optional[Action] = None
        last_bypass = False

        ctx = StrategyContext(day=env.day, tick=0, estimate=estimate, sense=sense(env, position),
                              step_cap=step_cap, home=env.home)
        for s in strategies:
            s.new_day(ctx)
        self.scheduler.start_day()

        while position != env.food and tick < step_cap:
            ctx = StrategyContext(
                day=env.day,
                tick=tick,
                estimate=estimate,
                sense=sense(env, position),
                last_executed_action=last_action,
                last_action_was_bypass=last_bypass,
                step_cap=step_cap,
                home=env.home,
            )
            for s in strategies:
                s.pre_action(ctx)

            action = bypass_check(ctx.sense)
            bypass = action is not None
            if not bypass:
                action = self._select(ctx, env, position)

            ctx = replace(ctx, action=action, bypass=bypass)
            for s in strategies:
                s.post_action(ctx)

            if self.trace is not None:
                self.trace(TraceRecord(env.day, tick, self.scheduler.active.strategy_id,
                                       estimate, position, action, bypass))

            position = execute_action(env, position, action, noise, rng)
            tick += 1
            estimate = integrate(estimate, action)
            self.scheduler.charge_tick()
            last_action, last_bypass = action, bypass

        gave_up = position != env.food
        if gave_up:
            logger.warning("Day %d: step cap %d reached without food", env.day, step_cap)
        else:
            final = StrategyContext(
                day=env.day,
                tick=tick,
                estimate=estimate,
                sense=sense(env, position),
                last_executed_action=last_action,
                last_action_was_bypass=last_bypass,
                step_cap=step_cap,
                home=env.home,
            )
            for s in strategies:
                s.upon_reward(final)

        stats: Dict[str, int] = {}
        for s in strategies:
            stats.update(s.day_statistics())
        return DayResult(
            day=env.day,
            steps=tick,
            plannings=sum(s.planning_count for s in strategies) - plannings_before,
            activations=self.scheduler.activation_counts(),
            gave_up=gave_up,
            memory_size=sum(s.memory_size() for s in strategies),
            visited_cells=stats.get("visited_cells"),
        )
