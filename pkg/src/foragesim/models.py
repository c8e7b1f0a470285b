"""Validated experiment configuration models."""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, root_validator, validator

from .core.grid_env import NoiseParams
from .strategies import UnknownStrategy, strategy_class

FOOD_PATTERNS = ("fixed", "uniform", "round_robin")
DEFAULT_BUDGET = 5


def parse_strategy_spec(spec) -> List[Dict[str, Any]]:
    """Normalize ``"probmap:5,least_visited:5"`` (or a list form) into slot dicts."""
    if isinstance(spec, str):
        items = [part.strip() for part in spec.split(",") if part.strip()]
    else:
        items = list(spec or [])
    slots = []
    for item in items:
        if isinstance(item, dict):
            slots.append({"name": item.get("name"), "budget": item.get("budget", DEFAULT_BUDGET)})
        elif isinstance(item, (list, tuple)):
            name, budget = (list(item) + [DEFAULT_BUDGET])[:2]
            slots.append({"name": name, "budget": budget})
        else:
            name, _, budget = str(item).partition(":")
            slots.append({"name": name.strip(), "budget": int(budget) if budget.strip() else DEFAULT_BUDGET})
    return slots


def format_strategy_spec(slots) -> str:
    return ",".join(f"{s.name}:{s.budget}" for s in slots)


class StrategySpec(BaseModel):
    name: str
    budget: int = DEFAULT_BUDGET

    @validator("name")
    def known_strategy(cls, v):
        try:
            strategy_class(v)
        except UnknownStrategy as exc:
            raise ValueError(exc.args[0]) from None
        return v

    @validator("budget")
    def budget_not_negative(cls, v):
        if v < 0:
            raise ValueError("budget must be >= 0 (0 = unlimited)")
        return v


class NoiseConfig(BaseModel):
    p: float = 0.02
    p2: float = 0.5

    @validator("p", "p2")
    def probability(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("must lie in [0, 1]")
        return v

    def to_params(self) -> NoiseParams:
        return NoiseParams(p=self.p, p2=self.p2)


class FoodPattern(BaseModel):
    kind: str = "fixed"
    corners: int = 1

    @validator("kind")
    def known_kind(cls, v):
        v = v.strip().lower().replace("-", "_")
        if v not in FOOD_PATTERNS:
            raise ValueError(f"food pattern must be one of {', '.join(FOOD_PATTERNS)}")
        return v

    @root_validator(skip_on_failure=True)
    def corner_count(cls, values):
        kind, corners = values.get("kind"), values.get("corners")
        if kind == "fixed":
            values["corners"] = 1
        elif not 2 <= corners <= 4:
            raise ValueError(f"{kind} food pattern needs 2 to 4 corners, got {corners}")
        return values


class ProbMapConfig(BaseModel):
    memory_horizon: int = 5
    food_memory_horizon: Optional[int] = None
    within_day_window: int = 10
    daily_window: int = 5
    plan_iterations: int = 5
    food_threshold: float = 0.01
    plan_margin: int = 2

    @validator("memory_horizon", "within_day_window", "daily_window", "plan_iterations")
    def at_least_one(cls, v):
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @validator("food_memory_horizon")
    def food_horizon(cls, v):
        if v is not None and v < 1:
            raise ValueError("must be >= 1")
        return v

    @validator("plan_margin")
    def margin(cls, v):
        if v < 0:
            raise ValueError("must be >= 0")
        return v

    def to_options(self) -> Dict[str, Any]:
        return self.dict()


class ExperimentConfig(BaseModel):
    n: int = 15
    barrier_proportion: float = 0.3
    change_rate: float = 0.1
    noise: NoiseConfig = NoiseConfig()
    k1: int = 50
    k2: int = 20
    step_cap: int = 200_000
    strategies: List[StrategySpec] = [StrategySpec(name="probmap"), StrategySpec(name="least_visited")]
    budget_multiplier: int = 2
    probmap: ProbMapConfig = ProbMapConfig()
    food_pattern: FoodPattern = FoodPattern()
    freeze_after_day: Optional[int] = None
    warmup_days: int = 0
    exclude_gave_up: bool = False
    master_seed: int = 0
    trace: bool = False
    runs_dir: Optional[str] = None

    @validator("n")
    def grid_side(cls, v):
        if v < 3:
            raise ValueError("grid side must be >= 3")
        return v

    @validator("barrier_proportion")
    def proportion(cls, v):
        if not 0.0 <= v < 1.0:
            raise ValueError("barrier proportion must lie in [0, 1)")
        return v

    @validator("change_rate")
    def rate(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("change rate must lie in [0, 1]")
        return v

    @validator("k1", "k2", "step_cap", "budget_multiplier")
    def positive(cls, v):
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @validator("strategies", pre=True)
    def parse_strategies(cls, v):
        return parse_strategy_spec(v)

    @validator("strategies")
    def fallback_present(cls, v):
        if not v:
            raise ValueError("at least one strategy is required")
        if not any(strategy_class(s.name).NEVER_FAILS for s in v):
            raise ValueError("the agent needs a strategy that never fails (e.g. least_visited or random)")
        return v

    @validator("freeze_after_day")
    def freeze_day(cls, v):
        if v is not None and v < 0:
            raise ValueError("must be >= 0")
        return v

    @root_validator(skip_on_failure=True)
    def warmup_window(cls, values):
        if not 0 <= values["warmup_days"] < values["k2"]:
            raise ValueError(f"warmup_days must lie in [0, k2), got {values['warmup_days']}")
        return values

    @property
    def memory_horizon(self) -> int:
        return self.probmap.memory_horizon

    @property
    def agent_label(self) -> str:
        return "+".join(s.name for s in self.strategies)

    def to_nested(self) -> Dict[str, Dict[str, Any]]:
        """The sectioned form used by config files (and accepted back by ``resolve_config``)."""
        return {
            "grid": {"n": self.n, "barrier_proportion": self.barrier_proportion},
            "change": {"change_rate": self.change_rate},
            "noise": self.noise.dict(),
            "agent": {
                "strategies": format_strategy_spec(self.strategies),
                "budget_multiplier": self.budget_multiplier,
            },
            "probmap": self.probmap.dict(),
            "experiment": {
                "k1": self.k1,
                "k2": self.k2,
                "step_cap": self.step_cap,
                "master_seed": self.master_seed,
                "food_pattern": self.food_pattern.kind,
                "corners": self.food_pattern.corners,
                "freeze_after_day": self.freeze_after_day,
                "warmup_days": self.warmup_days,
                "exclude_gave_up": self.exclude_gave_up,
            },
            "output": {"runs_dir": self.runs_dir, "trace": self.trace},
        }
