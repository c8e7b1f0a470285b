"""Scripted contexts and small builders shared by the tests."""

from foragesim.core.agent import StrategyContext
from foragesim.core.grid_env import ACTIONS, CellState, Environment, SenseData, sense
from foragesim.core.localization import LocationEstimate


def make_sense(legal=ACTIONS, greedy=(), adjacent=None) -> SenseData:
    legal = frozenset(legal)
    if adjacent is None:
        adjacent = {a: (CellState.EMPTY if a in legal else CellState.BARRIER) for a in ACTIONS}
    return SenseData(adjacent=dict(adjacent), legal=legal, greedy=frozenset(greedy))


def make_ctx(estimate=(0, 0), legal=ACTIONS, greedy=(), adjacent=None, day=1, tick=0, **kwargs) -> StrategyContext:
    return StrategyContext(
        day=day,
        tick=tick,
        estimate=LocationEstimate(*estimate),
        sense=make_sense(legal, greedy, adjacent),
        **kwargs,
    )


def ctx_from_env(env: Environment, position, estimate=None, day=None, tick=0, **kwargs) -> StrategyContext:
    """Context at a true position of ``env``; the estimate defaults to position - home."""
    if estimate is None:
        estimate = (position[0] - env.home[0], position[1] - env.home[1])
    return StrategyContext(
        day=env.day if day is None else day,
        tick=tick,
        estimate=LocationEstimate(*estimate),
        sense=sense(env, position),
        home=env.home,
        **kwargs,
    )
