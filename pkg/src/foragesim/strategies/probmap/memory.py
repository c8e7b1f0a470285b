"""Episodic memories, memory-types and the two-tier window predictors.

A distribution is a numpy 3-vector indexed by :class:`CellState`
(Empty, Barrier, Food). Predictors are keyed by memory-type, the pair
(age in days, observed object), and learn what a location remembered with
that type looks like today.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from ...core.grid_env import CellState
from ...core.localization import LocationEstimate

logger = logging.getLogger(__name__)

N_OUTCOMES = len(CellState)
LOGLOSS_FLOOR = 1e-6
WITHIN_DAY_WINDOW = 10
DAILY_WINDOW = 5


def one_hot(state: CellState) -> np.ndarray:
    dist = np.zeros(N_OUTCOMES)
    dist[int(state)] = 1.0
    return dist


# read-only, shared by every fresh predictor
_ONE_HOTS = tuple(one_hot(state) for state in CellState)
for _dist in _ONE_HOTS:
    _dist.flags.writeable = False


def normalize(dist) -> np.ndarray:
    dist = np.clip(np.asarray(dist, dtype=float), 0.0, None)
    total = dist.sum()
    if total <= 0:
        raise ValueError("distribution has no mass")
    return dist / total


class EpisodicMemory(NamedTuple):
    location: LocationEstimate
    object: CellState
    day: int
    tick: int = 0


class MemoryType(NamedTuple):
    age: int
    object: CellState


def memory_type_of(mem: EpisodicMemory, today: int) -> MemoryType:
    if today < mem.day:
        raise ValueError(f"memory from day {mem.day} is in the future of day {today}")
    return MemoryType(today - mem.day, CellState(mem.object))


class WindowPredictor:
    """Moving average over the last ``capacity`` distributions.

    An empty window predicts its own object with probability 1. The window
    sum is kept up to date on every update and the prediction is cached
    until the next one.
    """

    __slots__ = ("object", "capacity", "window", "_sum", "_prediction")

    def __init__(self, obj: CellState, capacity: int):
        if capacity < 1:
            raise ValueError(f"window capacity must be >= 1, got {capacity}")
        self.object = CellState(obj)
        self.capacity = capacity
        self.window: deque = deque(maxlen=capacity)
        self._sum = np.zeros(N_OUTCOMES)
        self._prediction: Optional[np.ndarray] = _ONE_HOTS[int(self.object)]

    def update(self, dist) -> None:
        dist = np.array(dist, dtype=float)
        if len(self.window) == self.capacity:
            self._sum -= self.window[0]
        self.window.append(dist)
        self._sum += dist
        self._prediction = None

    def predict(self) -> np.ndarray:
        if self._prediction is None:
            prediction = normalize(self._sum / len(self.window))
            prediction.flags.writeable = False
            self._prediction = prediction
        return self._prediction

    def clone(self, capacity: Optional[int] = None) -> "WindowPredictor":
        copy = WindowPredictor(self.object, capacity or self.capacity)
        for dist in self.window:
            copy.update(dist)
        return copy

    def __len__(self) -> int:
        return len(self.window)

    def __repr__(self) -> str:
        return f"WindowPredictor({self.object.name}, K={self.capacity}, n={len(self.window)})"


class PredictorBank:
    """Daily and within-day predictors per memory-type, plus logloss scores.

    The daily tier only changes in :meth:`end_day`; during the day every
    update goes to the within-day clones.
    """

    def __init__(self, within_day_window: int = WITHIN_DAY_WINDOW, daily_window: int = DAILY_WINDOW):
        self.within_day_window = within_day_window
        self.daily_window = daily_window
        self.daily: Dict[MemoryType, WindowPredictor] = {}
        self.within_day: Dict[MemoryType, WindowPredictor] = {}
        self.logloss: Dict[MemoryType, List[float]] = {}

    def begin_day(self) -> None:
        self.within_day = {mt: p.clone(self.within_day_window) for mt, p in self.daily.items()}

    def end_day(self) -> None:
        for mt, predictor in self.within_day.items():
            daily = self.daily.get(mt)
            if daily is None:
                daily = self.daily[mt] = WindowPredictor(mt.object, self.daily_window)
            daily.update(predictor.predict())
        logger.debug("Merged %d within-day predictors into the daily tier", len(self.within_day))
        self.within_day = {}

    def _within(self, mt: MemoryType) -> WindowPredictor:
        predictor = self.within_day.get(mt)
        if predictor is None:
            daily = self.daily.get(mt)
            if daily is not None:
                predictor = daily.clone(self.within_day_window)
            else:
                predictor = WindowPredictor(mt.object, self.within_day_window)
            self.within_day[mt] = predictor
        return predictor

    def predict(self, mt: MemoryType) -> np.ndarray:
        predictor = self.within_day.get(mt)
        if predictor is None:
            predictor = self.daily.get(mt)
        if predictor is None:
            return _ONE_HOTS[int(mt.object)]
        return predictor.predict()

    def score(self, mt: MemoryType, observed: CellState) -> float:
        """Accumulate and return the logloss of the current prediction."""
        prob = float(self.predict(mt)[int(observed)])
        loss = -math.log(max(prob, LOGLOSS_FLOOR))
        entry = self.logloss.setdefault(mt, [0.0, 0])
        entry[0] += loss
        entry[1] += 1
        return loss

    def update(self, mt: MemoryType, observed: CellState) -> None:
        self._within(mt).update(one_hot(observed))

    def mean_logloss(self, mt: MemoryType) -> Optional[float]:
        entry = self.logloss.get(mt)
        if not entry or entry[1] == 0:
            return None
        return entry[0] / entry[1]

    def best_type(self, types: Iterable[MemoryType]) -> MemoryType:
        """Lowest mean logloss; unscored types last, then smaller age, then object order."""

        def key(mt: MemoryType) -> Tuple:
            loss = self.mean_logloss(mt)
            return (loss is None, loss or 0.0, mt.age, int(mt.object))

        return min(types, key=key)


class EpisodicStore:
    """Location -> episodic memories, at most one per day per location."""

    def __init__(self, horizon: int = 5, food_horizon: Optional[int] = None):
        self.horizon = horizon
        self.food_horizon = horizon if food_horizon is None else food_horizon
        self._memories: Dict[LocationEstimate, List[EpisodicMemory]] = {}
        # day of the last full prune; every entry is retained on that day
        self._pruned_for: Optional[int] = None

    def _retained(self, mem: EpisodicMemory, today: int) -> bool:
        limit = self.food_horizon if mem.object == CellState.FOOD else self.horizon
        return today - mem.day <= limit

    def store(self, mem: EpisodicMemory) -> None:
        if self._pruned_for is not None and not self._retained(mem, self._pruned_for):
            self._pruned_for = None
        entries = self._memories.setdefault(LocationEstimate(*mem.location), [])
        for i, old in enumerate(entries):
            if old.day == mem.day:
                entries[i] = mem
                return
        entries.append(mem)

    def memories(self, location, today: int) -> List[EpisodicMemory]:
        location = LocationEstimate(*location)
        entries = self._memories.get(location)
        if not entries:
            return []
        if today == self._pruned_for:
            return entries
        kept = [m for m in entries if self._retained(m, today)]
        if len(kept) != len(entries):
            if kept:
                self._memories[location] = kept
            else:
                del self._memories[location]
        return kept

    def prune(self, today: int) -> None:
        self._pruned_for = None
        for location in list(self._memories):
            self.memories(location, today)
        self._pruned_for = today

    def locations(self) -> List[LocationEstimate]:
        return sorted(self._memories)

    def size(self) -> int:
        return sum(len(v) for v in self._memories.values())

    def __len__(self) -> int:
        return len(self._memories)
