from .memory import (
    EpisodicMemory,
    EpisodicStore,
    MemoryType,
    PredictorBank,
    WindowPredictor,
    memory_type_of,
    normalize,
    one_hot,
)
from .planner import astar, bounding_box, box_perimeter, box_size
from .strategy import ProbMapStrategy

__all__ = [
    "EpisodicMemory",
    "EpisodicStore",
    "MemoryType",
    "PredictorBank",
    "WindowPredictor",
    "memory_type_of",
    "normalize",
    "one_hot",
    "astar",
    "bounding_box",
    "box_perimeter",
    "box_size",
    "ProbMapStrategy",
]
