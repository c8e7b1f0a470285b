import numpy as np
import pytest

from foragesim.core.agent import (
    Agent,
    AllStrategiesFailed,
    Scheduler,
    StrategySlot,
    SwitchReason,
    bypass_check,
)
from foragesim.core.grid_env import Action, CellState, Environment, NoiseParams, generate, parse_grid
from foragesim.core.localization import HOME, LocationEstimate, integrate
from foragesim.strategies import (
    BiasedRandomStrategy,
    GreedyStrategy,
    LeastVisitedStrategy,
    OracleStrategy,
    RandomStrategy,
)
from foragesim.strategies.base_strategy import BaseStrategy
from tests.helpers import make_sense


class _Scripted(BaseStrategy):
    """Returns a fixed action (None = always fail) and records every callback."""

    STRATEGY_TYPE_ID = "scripted"

    def __init__(self, action=None, **kwargs):
        super().__init__(**kwargs)
        self.action = action
        self.calls = []
        self.budgets = []
        self.budget_left = []

    @staticmethod
    def get_strategy_def():
        return {"id": "scripted", "name": "Scripted", "description": "", "requires": {}, "options": []}

    def select_action(self, ctx):
        self.calls.append(("select", ctx.tick))
        self.budget_left.append(ctx.budget_left)
        return self.action

    def new_day(self, ctx):
        self.calls.append(("new_day", ctx.tick))

    def pre_action(self, ctx):
        self.calls.append(("pre", ctx.tick))

    def post_action(self, ctx):
        self.calls.append(("post", ctx.tick, ctx.action, ctx.bypass))

    def upon_reward(self, ctx):
        self.calls.append(("reward", ctx.tick))

    def on_activation(self, budget):
        self.budgets.append(budget)


# ---------- localization ----------

def test_integrate_uses_intended_action():
    assert integrate(HOME, Action.LEFT) == LocationEstimate(-1, 0)
    assert integrate(LocationEstimate(3, 2), Action.RIGHT) == (4, 2)
    assert integrate(LocationEstimate(0, 0), Action.UP) == (0, -1)
    assert integrate(LocationEstimate(0, 0), Action.DOWN) == (0, 1)


# ---------- scheduler ----------

def test_progressive_budgets_double_on_reactivation():
    a, b = _Scripted(), _Scripted()
    sched = Scheduler([StrategySlot(a, 5), StrategySlot(b, 5)])
    sched.start_day()
    assert sched.active.current_budget == 5
    sched.advance(SwitchReason.TIMES_UP)
    sched.advance(SwitchReason.TIMES_UP)
    assert sched.active.strategy is a and sched.active.current_budget == 10
    sched.advance(SwitchReason.TIMES_UP)
    sched.advance(SwitchReason.TIMES_UP)
    assert sched.active.current_budget == 20
    assert a.budgets == [5, 10, 20]
    assert b.budgets == [5, 10]


def test_fixed_budget_with_multiplier_one():
    a, b = _Scripted(), _Scripted()
    sched = Scheduler([StrategySlot(a, 5, multiplier=1), StrategySlot(b, 5, multiplier=1)])
    sched.start_day()
    for _ in range(4):
        sched.advance(SwitchReason.TIMES_UP)
    assert a.budgets == [5, 5, 5]


def test_budgets_reset_each_day():
    a, b = _Scripted(), _Scripted()
    sched = Scheduler([StrategySlot(a, 5), StrategySlot(b, 5)])
    sched.start_day()
    sched.advance(SwitchReason.FAILURE)
    sched.advance(SwitchReason.FAILURE)
    sched.start_day()
    assert sched.active_index == 0
    assert sched.active.current_budget == 5
    assert sched.activation_counts() == {"scripted": 1}


def test_unlimited_budget_never_times_out():
    slot = StrategySlot(_Scripted(), 0)
    slot.ticks_used = 10_000
    assert slot.unlimited and not slot.times_up
    sched = Scheduler([slot])
    sched.start_day()
    assert slot.strategy.budgets == [0]


def test_invalid_slots_rejected():
    with pytest.raises(ValueError):
        Scheduler([])
    with pytest.raises(ValueError):
        StrategySlot(_Scripted(), -1)
    with pytest.raises(ValueError):
        StrategySlot(_Scripted(), 5, multiplier=0)


def test_selection_sees_ticks_left_in_the_budget():
    env = Environment(n=15, barriers=frozenset(), food=(14, 14), home=(7, 7))
    right, left = _Scripted(Action.RIGHT), _Scripted(Action.LEFT)
    Agent.from_strategies([(right, 3), (left, 3)]).run_day(env, np.random.default_rng(0), step_cap=7)
    assert right.budget_left == [3, 2, 1, 6]
    assert left.budget_left == [3, 2, 1]

    unlimited = _Scripted(Action.RIGHT)
    Agent.from_strategies([(unlimited, 0)]).run_day(env, np.random.default_rng(0), step_cap=3)
    assert unlimited.budget_left == [None, None, None]


def test_failing_first_slot_alternates_with_growing_fallback_budget():
    env = Environment(n=15, barriers=frozenset(), food=(14, 14), home=(0, 0))
    failing = _Scripted(None)
    walker = _Scripted(Action.RIGHT)
    agent = Agent.from_strategies([(failing, 5), (walker, 5)])
    result = agent.run_day(env, np.random.default_rng(0), step_cap=12)
    # walker: 5 ticks, failing fails at once, walker: 10 ticks -> cap at 12
    assert result.steps == 12
    assert result.gave_up
    assert walker.budgets == [5, 10]
    assert failing.budgets == [5, 10]


def test_all_strategies_failing_raises(empty15):
    agent = Agent.from_strategies([(_Scripted(None), 5), (_Scripted(None), 5)])
    with pytest.raises(AllStrategiesFailed):
        agent.run_day(empty15, np.random.default_rng(0))


# ---------- bypass ----------

def test_bypass_check():
    adjacent = {a: CellState.EMPTY for a in Action}
    adjacent[Action.RIGHT] = CellState.FOOD
    assert bypass_check(make_sense(adjacent=adjacent)) == Action.RIGHT
    assert bypass_check(make_sense()) is None


def test_bypass_overrides_active_strategy():
    env = parse_grid(
        """
        ...
        .HF
        ...
        """
    )
    stubborn = _Scripted(Action.LEFT)
    result = Agent.from_strategies([(stubborn, 0), (RandomStrategy(rng=np.random.default_rng(0)), 5)]).run_day(
        env, np.random.default_rng(0)
    )
    assert result.steps == 1
    assert not any(call[0] == "select" for call in stubborn.calls)
    post = [c for c in stubborn.calls if c[0] == "post"]
    assert post == [("post", 0, Action.RIGHT, True)]


# ---------- run_day ----------

def test_callback_order():
    env = parse_grid(
        """
        H.F.
        ....
        ....
        ....
        """
    )
    walker = _Scripted(Action.RIGHT)
    result = Agent.from_strategies([(walker, 0), (RandomStrategy(rng=np.random.default_rng(0)), 5)]).run_day(
        env, np.random.default_rng(0)
    )
    # tick 0: select RIGHT; tick 1: food adjacent -> bypass
    assert result.steps == 2
    assert walker.calls == [
        ("new_day", 0),
        ("pre", 0),
        ("select", 0),
        ("post", 0, Action.RIGHT, False),
        ("pre", 1),
        ("post", 1, Action.RIGHT, True),
        ("reward", 2),
    ]


def test_oracle_takes_manhattan_steps(empty15):
    agent = Agent.from_strategies([(OracleStrategy(rng=np.random.default_rng(0)), 0)])
    assert agent.run_day(empty15, np.random.default_rng(0)).steps == 14


def test_greedy_with_biased_fallback_on_empty_grid(empty15):
    rng = np.random.default_rng(3)
    agent = Agent.from_strategies([(GreedyStrategy(rng=rng), 0), (BiasedRandomStrategy(rng=rng), 5)])
    result = agent.run_day(empty15, rng)
    assert result.steps == 14
    assert not result.gave_up


def test_step_cap_gives_up_without_reward():
    env = Environment(n=15, barriers=frozenset(), food=(14, 14), home=(7, 7))
    stuck = _Scripted(Action.UP)
    agent = Agent.from_strategies([(stuck, 0), (RandomStrategy(rng=np.random.default_rng(0)), 5)])
    result = agent.run_day(env, np.random.default_rng(0), step_cap=20)
    assert result.gave_up and result.steps == 20
    assert not any(call[0] == "reward" for call in stuck.calls)


def test_trace_records_every_tick(empty15):
    records = []
    agent = Agent.from_strategies([(OracleStrategy(rng=np.random.default_rng(0)), 0)], trace=records.append)
    result = agent.run_day(empty15, np.random.default_rng(0))
    assert len(records) == result.steps
    assert records[0].position == (7, 7) and records[0].estimate == (0, 0)
    assert records[-1].bypass


def test_estimate_drifts_under_noise(empty15):
    records = []
    agent = Agent.from_strategies([(OracleStrategy(rng=np.random.default_rng(0)), 0)], trace=records.append)
    agent.run_day(empty15, np.random.default_rng(5), noise=NoiseParams(p=0.5, p2=1.0))
    drift = [
        (r.position[0] - 7 - r.estimate[0], r.position[1] - 7 - r.estimate[1]) for r in records
    ]
    assert any(d != (0, 0) for d in drift)


def test_estimate_tracks_true_offset_without_noise():
    rng = np.random.default_rng(9)
    env = generate(15, 0.3, (7, 7), (14, 14), rng)
    records = []
    agent = Agent.from_strategies(
        [(GreedyStrategy(rng=rng), 5), (LeastVisitedStrategy(rng=rng), 5)], trace=records.append
    )
    agent.run_day(env, rng)
    assert records
    for r in records:
        assert (r.position[0] - 7, r.position[1] - 7) == tuple(r.estimate)
