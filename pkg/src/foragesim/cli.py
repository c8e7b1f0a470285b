from __future__ import annotations

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from .config_loader import apply_overrides, parse_value, read_config_file
from .core.grid_env import GenerationFailed, daily_change, generate, render
from .default import ConfigError, resolve_config, resolve_runs_dir
from .harness import (
    SWEEP_AXES,
    environment_streams,
    home_cell,
    pattern_corners,
    place_food,
    ratio_table,
    sweep,
    sweep_table,
)
from .logging_setup import setup_logging
from .main import main as run_and_store
from .models import ExperimentConfig
from .results import ResultStore
from .strategies import ALL_STRATEGIES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SKIPPED = 2

# CLI flag (argparse dest) -> config key
OVERRIDE_KEYS: Dict[str, str] = {
    "n": "grid.n",
    "barrier_proportion": "grid.barrier_proportion",
    "change_rate": "change.change_rate",
    "p": "noise.p",
    "p2": "noise.p2",
    "budget_multiplier": "agent.budget_multiplier",
    "memory_horizon": "probmap.memory_horizon",
    "food_memory_horizon": "probmap.food_memory_horizon",
    "k1": "experiment.k1",
    "k2": "experiment.k2",
    "step_cap": "experiment.step_cap",
    "seed": "experiment.master_seed",
    "food_pattern": "experiment.food_pattern",
    "corners": "experiment.corners",
    "freeze_after_day": "experiment.freeze_after_day",
    "warmup_days": "experiment.warmup_days",
    "exclude_gave_up": "experiment.exclude_gave_up",
    "trace": "output.trace",
}


# ---------- Helpers ----------

def _config_from_args(args, agent: Optional[str] = None) -> ExperimentConfig:
    overrides = {key: getattr(args, dest, None) for dest, key in OVERRIDE_KEYS.items()}
    overrides["agent.strategies"] = agent
    raw = read_config_file(args.config) if args.config else {}
    return resolve_config(apply_overrides(raw, overrides))


def _run_dir(args, cfg: ExperimentConfig, kind: str) -> Path:
    if args.out:
        return Path(args.out)
    stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
    base = resolve_runs_dir(cfg.runs_dir)
    return base / f"{kind}-{cfg.agent_label}-seed{cfg.master_seed}-{stamp}"


def _print_statistics(title: str, values: dict) -> None:
    print(title)
    for name, value in values.items():
        shown = "-" if value is None else f"{value:.2f}"
        print(f"  {name:<28} {shown}")


# ---------- Command implementations ----------

def cmd_run(args) -> int:
    agent = args.agent[-1] if args.agent else None
    cfg = _config_from_args(args, agent)
    out = _run_dir(args, cfg, "run")
    stats = run_and_store(cfg, out)
    _print_statistics(f"{cfg.agent_label} ({stats.env_count} environments x {cfg.k2} days)", stats.summary())
    print(f"Results: {out}")
    if stats.skipped_envs:
        logger.warning("%d environment(s) skipped after generation failures", stats.skipped_envs)
        return EXIT_SKIPPED
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    values = [parse_value(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("--values needs at least one value")
    points = sweep(cfg, args.axis, values, agents=args.agent)
    store = ResultStore(_run_dir(args, cfg, f"sweep-{args.axis}"))
    store.report_config(cfg)
    ratios = ratio_table(points)
    store.report_sweep(sweep_table(points), ratios if len(ratios) else None)
    for p in points:
        print(f"{args.axis}={p.value} {p.agent}: mean_mean={p.stats.mean_mean:.2f}")
    print(f"Results: {store.root}")
    return EXIT_SKIPPED if any(p.stats.skipped_envs for p in points) else EXIT_OK


def cmd_show_env(args) -> int:
    cfg = _config_from_args(args)
    env_rng, _ = environment_streams(cfg.master_seed, args.env_index)
    corners = pattern_corners(cfg.n, cfg.food_pattern)
    try:
        env = generate(cfg.n, cfg.barrier_proportion, home_cell(cfg.n), corners[0], env_rng,
                       keep_clear=corners[1:])
        for day in range(1, args.days + 1):
            env = place_food(env, cfg.food_pattern, day, env_rng, corners)
            print(f"day {env.day}")
            print(render(env))
            if day < args.days:
                env = daily_change(env, cfg.change_rate, env_rng, keep_clear=corners)
    except GenerationFailed as exc:
        logger.error("Environment generation failed: %s", exc)
        return EXIT_SKIPPED
    return EXIT_OK


def cmd_summary(args) -> int:
    store = ResultStore(args.run_dir)
    if not store.exists("summary.csv"):
        print(f"No summary.csv in {store.root}")
        return EXIT_CONFIG
    _print_statistics("Summary", store.get_summary())
    if store.exists("memory_stats.csv"):
        _print_statistics("Memory", store.get_memory_stats())
    return EXIT_OK


def cmd_strategies(args) -> int:
    for cls in ALL_STRATEGIES:
        info = cls.get_strategy_def()
        needs = ", ".join(k for k, v in info["requires"].items() if v) or "-"
        fallback = " [never fails]" if cls.NEVER_FAILS else ""
        print(f"{info['id']:<15} {info['description']}{fallback}")
        print(f"{'':<15} requires: {needs}")
    return EXIT_OK


# ---------- Argument parser ----------

def _add_experiment_flags(p: argparse.ArgumentParser, seed_required: bool = True) -> None:
    p.add_argument("--config", help="Config file (JSON, or key=value lines)")
    p.add_argument("--seed", type=int, required=seed_required, help="Master seed")
    p.add_argument("--n", type=int, help="Grid side")
    p.add_argument("--barrier-proportion", type=float)
    p.add_argument("--change-rate", type=float)
    p.add_argument("--p", type=float, help="Motion-noise probability")
    p.add_argument("--p2", type=float, help="Share of noisy outcomes that stay or move two cells")
    p.add_argument("--budget-multiplier", type=int, help="1 = fixed budgets, 2 = doubling")
    p.add_argument("--memory-horizon", type=int)
    p.add_argument("--food-memory-horizon", type=int)
    p.add_argument("--k1", type=int, help="Number of environments")
    p.add_argument("--k2", type=int, help="Days per environment")
    p.add_argument("--step-cap", type=int)
    p.add_argument("--food-pattern", choices=["fixed", "uniform", "round_robin"])
    p.add_argument("--corners", type=int)
    p.add_argument("--freeze-after-day", type=int)
    p.add_argument("--warmup-days", type=int)
    p.add_argument("--exclude-gave-up", action="store_const", const=True, default=None)
    p.add_argument("--trace", action="store_const", const=True, default=None, help="Write per-tick trace.txt")
    p.add_argument("--out", help="Output directory (default: runs/<kind>-<agent>-seed<seed>-<time>)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foragesim", description="Daily foraging simulator")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--debug-module", action="append", default=[],
                        help="Logger switched to DEBUG alone, e.g. foragesim.strategies.probmap (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run one experiment configuration")
    _add_experiment_flags(p_run)
    p_run.add_argument("--agent", action="append", help="Strategy spec, e.g. probmap:5,least_visited:5")

    p_sweep = sub.add_parser("sweep", help="Run a parameter sweep")
    _add_experiment_flags(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=sorted(SWEEP_AXES))
    p_sweep.add_argument("--values", required=True, help="Comma-separated values")
    p_sweep.add_argument("--agent", action="append", help="Repeatable; the first agent is the ratio numerator")

    p_show = sub.add_parser("show-env", help="Print a generated environment")
    _add_experiment_flags(p_show, seed_required=False)
    p_show.add_argument("--days", type=int, default=1, help="Days to print (daily changes applied)")
    p_show.add_argument("--env-index", type=int, default=0)

    p_summary = sub.add_parser("summary", help="Print the statistics of an earlier run")
    p_summary.add_argument("run_dir")

    sub.add_parser("strategies", help="List the available strategies")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level, debug_modules=args.debug_module)

    dispatch = {
        "run": cmd_run,
        "sweep": cmd_sweep,
        "show-env": cmd_show_env,
        "summary": cmd_summary,
        "strategies": cmd_strategies,
    }
    try:
        return dispatch[args.command](args)
    except ConfigError as exc:
        logger.error("Configuration error: %s", exc)
        print(f"Configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
