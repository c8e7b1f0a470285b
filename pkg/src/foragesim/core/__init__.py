from .grid_env import (
    ACTIONS,
    Action,
    CellState,
    Environment,
    GenerationFailed,
    NoiseParams,
    Position,
    SenseData,
)
from .localization import LocationEstimate, integrate
from .agent import Agent, AllStrategiesFailed, DayResult, Scheduler, StrategyContext, StrategySlot
