import logging
from dataclasses import replace

import numpy as np
import pytest

from foragesim.core.agent import Agent
from foragesim.core.grid_env import Action, CellState, daily_change, generate
from foragesim.core.localization import LocationEstimate
from foragesim.strategies import LeastVisitedStrategy, ProbMapStrategy
from foragesim.strategies.probmap import strategy as probmap_strategy
from foragesim.strategies.probmap.memory import EpisodicMemory, MemoryType
from foragesim.strategies.probmap.planner import box_perimeter
from tests.helpers import make_ctx

E, B, F = CellState.EMPTY, CellState.BARRIER, CellState.FOOD


def _remember(strategy, x, y, obj, day):
    strategy.store.store(EpisodicMemory(LocationEstimate(x, y), obj, day))


def _probmap_agent(rng, strategy=None):
    strategy = strategy or ProbMapStrategy(rng=rng)
    return strategy, Agent.from_strategies([(strategy, 0), (LeastVisitedStrategy(rng=rng), 1)])


def test_first_day_fails_without_planning(rng):
    strategy = ProbMapStrategy(rng=rng)
    ctx = make_ctx(day=1)
    strategy.new_day(ctx)
    strategy.pre_action(ctx)
    assert strategy.select_action(ctx) is None
    assert strategy.planning_count == 0
    # the four neighbours became today's memories
    assert strategy.memory_size() == 4


def test_second_day_plans_once_and_follows_the_plan(empty15, rng):
    strategy, agent = _probmap_agent(rng)
    day1 = agent.run_day(empty15, rng)
    assert day1.plannings == 0
    assert not day1.gave_up

    day2 = agent.run_day(replace(empty15, day=2), rng)
    assert day2.steps == 14
    assert day2.plannings == 1
    assert day2.activations["least_visited"] == 0


def test_learning_days_keep_planning_once_on_static_grid(empty15, rng):
    strategy, agent = _probmap_agent(rng)
    agent.run_day(empty15, rng)
    for day in range(2, 7):
        result = agent.run_day(replace(empty15, day=day), rng)
        assert result.plannings == 1
        assert result.steps == 14


def test_execution_failure_triggers_replanning(rng):
    strategy = ProbMapStrategy(rng=rng)
    _remember(strategy, 3, 0, F, day=1)
    ctx = make_ctx(day=2, legal={Action.UP, Action.DOWN, Action.LEFT})
    strategy.new_day(ctx)
    strategy.pre_action(ctx)
    strategy.current_plan = {(0, 0): Action.RIGHT, (1, 0): Action.RIGHT, (2, 0): Action.RIGHT}
    strategy.plan_goal = LocationEstimate(3, 0)

    action = strategy.select_action(ctx)
    assert action in (Action.UP, Action.DOWN)
    assert strategy.planning_count == 1
    assert LocationEstimate(1, 0) not in strategy.current_plan


def test_at_most_one_planning_per_tick(rng):
    strategy = ProbMapStrategy(rng=rng)
    _remember(strategy, 3, 0, F, day=1)
    ctx = make_ctx(day=2, tick=4, legal={Action.LEFT})
    strategy.new_day(ctx)
    strategy.current_plan = {(0, 0): Action.RIGHT}
    strategy._last_plan_tick = (2, 4)
    assert strategy.select_action(ctx) is None
    assert strategy.current_plan is None
    assert strategy.planning_count == 0


def test_plan_goal_reached_without_food_fails(rng):
    strategy = ProbMapStrategy(rng=rng)
    strategy.current_plan = {(0, 0): Action.RIGHT}
    strategy.plan_goal = LocationEstimate(1, 0)
    assert strategy._plan_action(make_ctx(estimate=(1, 0))) is None


def test_barrier_sampling_follows_prediction(rng):
    strategy = ProbMapStrategy(rng=rng)
    strategy.today = 2
    _remember(strategy, 2, 2, B, day=1)
    mt = MemoryType(1, B)
    for observed in [B] * 9 + [E]:
        strategy.bank.update(mt, observed)

    hits = sum(LocationEstimate(2, 2) in strategy.sample_barrier_map(rng) for _ in range(4_000))
    assert hits / 4_000 == pytest.approx(0.9, abs=0.02)


def test_food_candidates_use_best_food_probability(rng):
    strategy = ProbMapStrategy(rng=rng)
    strategy.today = 3
    _remember(strategy, 4, 4, F, day=2)
    _remember(strategy, 6, 1, F, day=1)
    _remember(strategy, 1, 1, E, day=2)
    strategy.bank.update(MemoryType(1, F), F)
    strategy.bank.update(MemoryType(1, F), E)
    strategy.bank.update(MemoryType(2, F), E)

    candidates = strategy.food_candidates()
    assert candidates == [(LocationEstimate(4, 4), pytest.approx(0.5))]


def test_current_cell_is_never_a_goal(rng):
    strategy = ProbMapStrategy(rng=rng)
    _remember(strategy, 0, 0, F, day=1)
    ctx = make_ctx(day=2)
    strategy.new_day(ctx)
    assert strategy.make_plan(ctx) is None
    assert strategy.planning_count == 0


def test_frozen_map_stops_learning(empty15, rng):
    strategy, agent = _probmap_agent(rng)
    agent.run_day(empty15, rng)
    agent.freeze()
    size, today = strategy.memory_size(), strategy.today
    scores = {mt: list(v) for mt, v in strategy.bank.logloss.items()}

    result = agent.run_day(replace(empty15, day=2), rng)
    assert strategy.memory_size() == size
    assert strategy.today == today
    assert strategy.bank.logloss == scores
    # the frozen map still plans
    assert result.plannings >= 1


def test_new_day_logs_food_candidates(rng, caplog):
    strategy = ProbMapStrategy(rng=rng)
    _remember(strategy, 2, 3, F, day=1)
    with caplog.at_level(logging.DEBUG, logger="foragesim.strategies.probmap.strategy"):
        strategy.new_day(make_ctx(day=2, home=(7, 7)))
    assert "today: 2  food_probs: 1 [('(9, 10)', '1.00')]" in caplog.text


def test_options_are_applied(rng):
    strategy = ProbMapStrategy(rng=rng, memory_horizon=2, food_memory_horizon=8, within_day_window=4)
    assert strategy.store.horizon == 2
    assert strategy.store.food_horizon == 8
    assert strategy.bank.within_day_window == 4
    assert strategy.config["memory_horizon"] == 2


def test_goal_sampling_is_weighted_by_food_probability(rng):
    strategy = ProbMapStrategy(rng=rng)
    strategy.today = 3
    _remember(strategy, 3, 0, F, day=2)
    _remember(strategy, 0, 3, F, day=1)
    for observed in (F, E):
        strategy.bank.update(MemoryType(1, F), observed)
    for observed in [F] * 7 + [E] * 3:
        strategy.bank.update(MemoryType(2, F), observed)

    goals = [strategy.make_plan(make_ctx(day=3)) and strategy.plan_goal for _ in range(3_000)]
    share = sum(goal == (3, 0) for goal in goals) / len(goals)
    assert share == pytest.approx(0.5 / 1.2, abs=0.03)
    assert strategy.planning_count == 3_000


# ---------- planning bound ----------

@pytest.fixture
def astar_calls(monkeypatch):
    calls = []
    search = probmap_strategy.astar

    def recording(start, goal, barriers, max_len, box=None):
        calls.append((max_len, box))
        return search(start, goal, barriers, max_len, box)

    monkeypatch.setattr(probmap_strategy, "astar", recording)
    return calls


def test_plan_bound_is_budget_left_or_box_perimeter():
    box = (-2, -4, 5, 6)
    assert ProbMapStrategy.plan_bound(make_ctx(budget_left=7), box) == 7
    assert ProbMapStrategy.plan_bound(make_ctx(), box) == 38


def test_budgeted_planning_is_bounded_by_the_slot_budget(empty15, rng, astar_calls):
    strategy = ProbMapStrategy(rng=rng)
    agent = Agent.from_strategies([(strategy, 5), (LeastVisitedStrategy(rng=rng), 5)])
    agent.run_day(empty15, rng)
    assert astar_calls == []

    result = agent.run_day(replace(empty15, day=2), rng)
    # first session at home: food is 14 away, all five attempts abort
    assert [bound for bound, _ in astar_calls[:5]] == [5] * 5
    assert result.activations["least_visited"] >= 1
    assert not result.gave_up


def test_unbudgeted_planning_is_bounded_by_the_box_perimeter(empty15, rng, astar_calls):
    strategy, agent = _probmap_agent(rng)
    agent.run_day(empty15, rng)
    agent.run_day(replace(empty15, day=2), rng)
    assert astar_calls
    assert all(bound == box_perimeter(box) for bound, box in astar_calls)


# ---------- learning on changing worlds ----------

def _changing_days(seed, days):
    """Yield (strategy, day) after each noiseless day on a changing 15x15 world."""
    rng = np.random.default_rng(seed)
    env = generate(15, 0.3, (7, 7), (14, 14), rng)
    strategy = ProbMapStrategy(rng=rng)
    agent = Agent.from_strategies([(strategy, 5), (LeastVisitedStrategy(rng=rng), 5)])
    for day in range(1, days + 1):
        agent.run_day(env, rng)
        yield strategy, day
        env = daily_change(env, 0.1, rng)


def test_episodic_store_stays_within_horizon_bound():
    for strategy, _ in _changing_days(seed=4, days=10):
        locations = len(strategy.store)
        assert strategy.store.size() <= (strategy.memory_horizon + 1) * locations


def test_barrier_persistence_logloss_falls_with_experience():
    mt = MemoryType(1, B)
    early, late = [0.0, 0], [0.0, 0]
    for seed in range(10):
        previous = (0.0, 0)
        for strategy, day in _changing_days(seed, days=12):
            total, count = strategy.bank.logloss.get(mt, (0.0, 0))
            bucket = early if day == 2 else late if day >= 8 else None
            if bucket is not None:
                bucket[0] += total - previous[0]
                bucket[1] += count - previous[1]
            previous = (total, count)
    assert early[1] > 0 and late[1] > 0
    assert late[0] / late[1] < early[0] / early[1]
