"""Experiment protocol: environments x days x ticks, food patterns, sweeps.

Every environment index ``i`` owns a :class:`numpy.random.SeedSequence`
built from ``(master_seed, i)`` and spawned into two streams: the
environment stream (generation, daily change, food placement) and the agent
stream (strategy choices, motion noise). Results for environment ``i`` are
therefore independent of ``k1`` and of the agent being evaluated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .core.agent import Agent, DayResult, TraceRecord
from .core.grid_env import Environment, GenerationFailed, Position, daily_change, generate, move_food
from .default import resolve_config
from .models import ExperimentConfig, FoodPattern
from .results.stats import AGGREGATES, RunStats, records_from_results
from .strategies import strategy_from_name

logger = logging.getLogger(__name__)

SWEEP_AXES: Dict[str, Tuple[str, str]] = {
    "barrier_proportion": ("grid", "barrier_proportion"),
    "n": ("grid", "n"),
    "change_rate": ("change", "change_rate"),
    "noise.p": ("noise", "p"),
    "memory_horizon": ("probmap", "memory_horizon"),
}


def home_cell(n: int) -> Position:
    return (n // 2, n // 2)


def corner_cells(n: int) -> List[Position]:
    """Lower-right, lower-left, upper-right, upper-left (y grows downwards)."""
    last = n - 1
    return [(last, last), (0, last), (last, 0), (0, 0)]


def pattern_corners(n: int, pattern: FoodPattern) -> List[Position]:
    return corner_cells(n)[: pattern.corners]


def place_food(
    env: Environment,
    pattern: FoodPattern,
    day: int,
    rng: np.random.Generator,
    corners: Optional[Sequence[Position]] = None,
) -> Environment:
    """Move the food for ``day`` according to the relocation pattern.

    fixed keeps the food where it is; uniform draws one of the ``k`` corners;
    round_robin cycles through them, corner ``(day - 1) mod k``.
    """
    if pattern.kind == "fixed":
        return env
    corners = list(corners or pattern_corners(env.n, pattern))
    if pattern.kind == "uniform":
        target = corners[int(rng.integers(len(corners)))]
    else:
        target = corners[(day - 1) % len(corners)]
    return move_food(env, target, rng)


def environment_streams(master_seed: int, env_index: int) -> Tuple[np.random.Generator, np.random.Generator]:
    env_seq, agent_seq = np.random.SeedSequence([master_seed, env_index]).spawn(2)
    return np.random.default_rng(env_seq), np.random.default_rng(agent_seq)


def build_agent(
    cfg: ExperimentConfig,
    rng: np.random.Generator,
    trace: Optional[Callable[[TraceRecord], None]] = None,
) -> Agent:
    slots = []
    for spec in cfg.strategies:
        options = cfg.probmap.to_options() if spec.name == "probmap" else {}
        slots.append((strategy_from_name(spec.name, rng=rng, **options), spec.budget))
    return Agent.from_strategies(slots, multiplier=cfg.budget_multiplier, trace=trace)


def run_environment(
    cfg: ExperimentConfig,
    env_index: int,
    trace: Optional[Callable[[TraceRecord], None]] = None,
) -> List[DayResult]:
    """All ``k2`` days of one environment trial.

    Raises:
        GenerationFailed: when the environment (or a daily change) cannot
            keep the food reachable.
    """
    env_rng, agent_rng = environment_streams(cfg.master_seed, env_index)
    corners = pattern_corners(cfg.n, cfg.food_pattern)
    env = generate(cfg.n, cfg.barrier_proportion, home_cell(cfg.n), corners[0], env_rng, keep_clear=corners[1:])
    agent = build_agent(cfg, agent_rng, trace)
    noise = cfg.noise.to_params()

    results: List[DayResult] = []
    for day in range(1, cfg.k2 + 1):
        env = place_food(env, cfg.food_pattern, day, env_rng, corners)
        if cfg.freeze_after_day is not None and day > cfg.freeze_after_day:
            agent.freeze()
        results.append(agent.run_day(env, agent_rng, noise=noise, step_cap=cfg.step_cap))
        if day < cfg.k2:
            env = daily_change(env, cfg.change_rate, env_rng, keep_clear=corners)
    return results


def run_experiment(cfg: ExperimentConfig, trace_writer=None) -> RunStats:
    """Run ``k1`` environment trials of ``k2`` days and aggregate the steps.

    Environments whose generation fails are skipped, logged and counted in
    ``RunStats.skipped_envs``.
    """
    logger.info(
        "Experiment start: agent=%s n=%d prop=%.2f chr=%.2f p=%.3f k1=%d k2=%d seed=%d",
        cfg.agent_label, cfg.n, cfg.barrier_proportion, cfg.change_rate, cfg.noise.p,
        cfg.k1, cfg.k2, cfg.master_seed,
    )
    records = []
    skipped = 0
    for index in range(cfg.k1):
        trace = trace_writer.for_env(index) if trace_writer is not None else None
        try:
            results = run_environment(cfg, index, trace)
        except GenerationFailed as exc:
            skipped += 1
            logger.warning("Environment %d skipped: %s", index, exc)
            continue
        records.extend(records_from_results(index, results))
        logger.info(
            "Environment %d/%d done: mean steps %.1f over %d days",
            index + 1, cfg.k1, sum(r.steps for r in results) / len(results), len(results),
        )

    stats = RunStats.from_records(
        records,
        label=cfg.agent_label,
        warmup_days=cfg.warmup_days,
        exclude_gave_up=cfg.exclude_gave_up,
        skipped_envs=skipped,
    )
    if records:
        logger.info("Experiment end: %s mean_mean=%.2f (%d skipped)", cfg.agent_label, stats.mean_mean, skipped)
    else:
        logger.error("Experiment end: every environment was skipped")
    return stats


def derived_seed(master_seed: int, value_index: int) -> int:
    return int(np.random.SeedSequence([master_seed, value_index]).generate_state(1)[0])


@dataclass
class SweepPoint:
    axis: str
    value: object
    agent: str
    stats: RunStats


def sweep(
    base_cfg: ExperimentConfig,
    axis: str,
    values: Sequence,
    agents: Optional[Sequence[str]] = None,
) -> List[SweepPoint]:
    """Run every agent at every value of ``axis``.

    All agents share the seed derived for a value, so they face the same
    environments.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis '{axis}' (known: {', '.join(SWEEP_AXES)})")
    section, key = SWEEP_AXES[axis]
    agent_specs = list(agents) if agents else [None]
    points = []
    for index, value in enumerate(values):
        for agent in agent_specs:
            nested = base_cfg.to_nested()
            nested[section][key] = value
            nested["experiment"]["master_seed"] = derived_seed(base_cfg.master_seed, index)
            if agent is not None:
                nested["agent"]["strategies"] = agent
            cfg = resolve_config(nested)
            logger.info("Sweep %s=%s agent=%s", axis, value, cfg.agent_label)
            points.append(SweepPoint(axis, value, cfg.agent_label, run_experiment(cfg)))
    return points


def sweep_table(points: Sequence[SweepPoint]) -> pd.DataFrame:
    """Long format: one row per swept value, agent and statistic."""
    rows = [
        {"axis": p.axis, "axis_value": p.value, "agent": p.agent, "statistic": name, "value": value}
        for p in points
        for name, value in p.stats.summary().items()
        if name in AGGREGATES
    ]
    return pd.DataFrame(rows, columns=["axis", "axis_value", "agent", "statistic", "value"])


def ratio_table(points: Sequence[SweepPoint]) -> pd.DataFrame:
    """mean_mean of the first agent divided by that of every other agent, per value."""
    rows = []
    by_value: Dict[object, List[SweepPoint]] = {}
    for p in points:
        by_value.setdefault(p.value, []).append(p)
    for value, group in by_value.items():
        first = group[0]
        for other in group[1:]:
            rows.append({
                "axis": first.axis,
                "axis_value": value,
                "numerator": first.agent,
                "denominator": other.agent,
                "ratio": first.stats.mean_mean / other.stats.mean_mean,
            })
    return pd.DataFrame(rows, columns=["axis", "axis_value", "numerator", "denominator", "ratio"])
