"""Ground truth of the foraging world.

The environment owns the grid (barriers, food, home), changes it from day to
day, executes (noisy) actions and answers local sensing queries. Agents never
see an :class:`Environment` directly; they only get :class:`SenseData`.

Coordinates are absolute ``(x, y)`` cell indices, ``0 <= x, y < n``. ``Up``
decreases ``y`` (screen convention) everywhere in the project.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

Position = Tuple[int, int]

MAX_ATTEMPTS = 10_000
SAFE_BARRIER_PROPORTION = 0.3


class GenerationFailed(RuntimeError):
    """Raised when no barrier layout with a home-to-food path could be drawn."""


class CellState(IntEnum):
    """State of a cell. The integer value is the index in a Distribution."""

    EMPTY = 0
    BARRIER = 1
    FOOD = 2


class Action(Enum):
    UP = (0, -1)
    DOWN = (0, 1)
    LEFT = (-1, 0)
    RIGHT = (1, 0)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    @property
    def reverse(self) -> "Action":
        return _REVERSE[self]

    def apply(self, pos: Position, hops: int = 1) -> Position:
        return (pos[0] + hops * self.value[0], pos[1] + hops * self.value[1])


# Fixed iteration order, used wherever determinism matters.
ACTIONS: Tuple[Action, ...] = (Action.UP, Action.DOWN, Action.LEFT, Action.RIGHT)

_REVERSE = {
    Action.UP: Action.DOWN,
    Action.DOWN: Action.UP,
    Action.LEFT: Action.RIGHT,
    Action.RIGHT: Action.LEFT,
}


@dataclass(frozen=True)
class NoiseParams:
    """Motion noise.

    Attributes:
        p: probability that an executed action resolves to a noisy outcome.
        p2: share of the noisy cases resolved as stay / two-forward (equally
            likely); the remaining ``1 - p2`` pick a uniform adjacent cell.
    """

    p: float = 0.0
    p2: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise p must be in [0, 1], got {self.p}")
        if not 0.0 <= self.p2 <= 1.0:
            raise ValueError(f"noise p2 must be in [0, 1], got {self.p2}")


@dataclass(frozen=True)
class Environment:
    n: int
    barriers: FrozenSet[Position]
    food: Position
    home: Position
    day: int = 1

    def in_grid(self, pos: Position) -> bool:
        return 0 <= pos[0] < self.n and 0 <= pos[1] < self.n

    def passable(self, pos: Position) -> bool:
        return self.in_grid(pos) and pos not in self.barriers

    def cell_state(self, pos: Position) -> CellState:
        """State of ``pos``; off-grid cells read as barriers."""
        if not self.in_grid(pos) or pos in self.barriers:
            return CellState.BARRIER
        if pos == self.food:
            return CellState.FOOD
        return CellState.EMPTY


@dataclass(frozen=True)
class SenseData:
    adjacent: Dict[Action, CellState]
    legal: FrozenSet[Action]
    greedy: FrozenSet[Action] = field(default_factory=frozenset)


def barrier_count(n: int, barrier_proportion: float) -> int:
    return int(round(barrier_proportion * n * n))


def _draw(cells, k: int, rng: np.random.Generator):
    if k == 0:
        return []
    idx = rng.choice(len(cells), size=k, replace=False)
    return [cells[i] for i in sorted(idx)]


def generate(
    n: int,
    barrier_proportion: float,
    home: Position,
    food: Position,
    rng: np.random.Generator,
    keep_clear: Iterable[Position] = (),
    max_attempts: int = MAX_ATTEMPTS,
) -> Environment:
    """Draw a random environment in which food is reachable from home.

    Barriers are placed uniformly over the cells other than home, food and
    ``keep_clear``. Every ``keep_clear`` cell must be reachable from home too
    (food corners used by relocation patterns).

    Raises:
        ValueError: on out-of-grid or coinciding home/food.
        GenerationFailed: when ``max_attempts`` draws all fail the path check.
    """
    probe = Environment(n=n, barriers=frozenset(), food=food, home=home)
    if not (probe.in_grid(home) and probe.in_grid(food)):
        raise ValueError(f"home {home} and food {food} must lie inside a {n}x{n} grid")
    if home == food:
        raise ValueError("home and food must be distinct cells")
    if barrier_proportion > SAFE_BARRIER_PROPORTION:
        logger.warning(
            "Barrier proportion %.2f above %.1f: a path to food often does not exist",
            barrier_proportion,
            SAFE_BARRIER_PROPORTION,
        )

    reserved = {home, food, *keep_clear}
    targets = [food] + sorted(set(keep_clear) - {home, food})
    cells = [(x, y) for y in range(n) for x in range(n) if (x, y) not in reserved]
    count = barrier_count(n, barrier_proportion)
    if count > len(cells):
        raise GenerationFailed(
            f"{count} barriers do not fit in {len(cells)} free cells of a {n}x{n} grid"
        )

    for attempt in range(1, max_attempts + 1):
        env = replace(probe, barriers=frozenset(_draw(cells, count, rng)))
        if _reaches_all(env, home, targets):
            logger.debug("Environment generated after %d attempt(s), %d barriers", attempt, count)
            return env
    raise GenerationFailed(
        f"no home-to-food path after {max_attempts} draws (n={n}, proportion={barrier_proportion})"
    )


def daily_change(
    env: Environment,
    change_rate: float,
    rng: np.random.Generator,
    keep_clear: Iterable[Position] = (),
    max_attempts: int = MAX_ATTEMPTS,
) -> Environment:
    """Swap ``round(change_rate * |barriers|)`` barriers and advance the day.

    Removed barriers are drawn uniformly from the current ones; the same
    number of new ones is drawn uniformly from the cells empty before the
    change (never home, food or ``keep_clear``). The draw is repeated until
    home still reaches food and every ``keep_clear`` cell.
    """
    if not 0.0 <= change_rate <= 1.0:
        raise ValueError(f"change_rate must be in [0, 1], got {change_rate}")
    current = sorted(env.barriers)
    k = int(round(change_rate * len(current)))
    if k == 0:
        return replace(env, day=env.day + 1)

    reserved = {env.home, env.food, *keep_clear}
    targets = [env.food] + sorted(set(keep_clear) - {env.home, env.food})
    empty = [
        (x, y)
        for y in range(env.n)
        for x in range(env.n)
        if (x, y) not in env.barriers and (x, y) not in reserved
    ]
    k_add = min(k, len(empty))
    for attempt in range(1, max_attempts + 1):
        removed = set(_draw(current, k_add, rng))
        added = _draw(empty, k_add, rng)
        changed = replace(env, barriers=frozenset((env.barriers - removed) | set(added)), day=env.day + 1)
        if _reaches_all(changed, env.home, targets):
            if attempt > 1:
                logger.debug("Daily change for day %d needed %d draws", changed.day, attempt)
            return changed
    raise GenerationFailed(f"daily change kept blocking the path to food after {max_attempts} draws")


def move_food(env: Environment, food: Position, rng: np.random.Generator) -> Environment:
    """Put the food on ``food``, relocating a barrier that sits there.

    The relocated barrier lands on a uniformly drawn empty cell so the barrier
    count is preserved; draws repeat until home reaches the new food.
    """
    if food == env.food:
        return env
    if not env.in_grid(food) or food == env.home:
        raise ValueError(f"cannot place food on {food}")
    if food not in env.barriers:
        return replace(env, food=food)

    base = env.barriers - {food}
    empty = [
        (x, y)
        for y in range(env.n)
        for x in range(env.n)
        if (x, y) not in env.barriers and (x, y) not in (env.home, env.food, food)
    ]
    for _ in range(MAX_ATTEMPTS):
        spot = empty[int(rng.integers(len(empty)))]
        moved = replace(env, barriers=base | {spot}, food=food)
        if path_exists(moved, moved.home, food):
            logger.debug("Barrier on food cell %s moved to %s", food, spot)
            return moved
    raise GenerationFailed(f"could not clear a path to food at {food}")


def execute_action(
    env: Environment,
    pos: Position,
    action: Action,
    noise: NoiseParams,
    rng: np.random.Generator,
) -> Position:
    """Resolve ``action`` from ``pos`` under motion noise.

    Blocked outcomes (barrier, off-grid, or a two-forward hop through a
    barrier) leave the agent on ``pos``.
    """
    if noise.p > 0.0 and rng.random() < noise.p:
        if rng.random() < noise.p2:
            if rng.random() < 0.5:
                return pos
            middle = action.apply(pos)
            target = action.apply(pos, hops=2)
            return target if env.passable(middle) and env.passable(target) else pos
        drift = ACTIONS[int(rng.integers(len(ACTIONS)))]
        target = drift.apply(pos)
        return target if env.passable(target) else pos

    target = action.apply(pos)
    return target if env.passable(target) else pos


def greedy_actions(pos: Position, goal: Position) -> FrozenSet[Action]:
    """The (up to 2) actions that lower the Manhattan distance to ``goal``."""
    out = []
    dx, dy = goal[0] - pos[0], goal[1] - pos[1]
    if dx > 0:
        out.append(Action.RIGHT)
    elif dx < 0:
        out.append(Action.LEFT)
    if dy > 0:
        out.append(Action.DOWN)
    elif dy < 0:
        out.append(Action.UP)
    return frozenset(out)


def sense(env: Environment, pos: Position) -> SenseData:
    adjacent = {a: env.cell_state(a.apply(pos)) for a in ACTIONS}
    legal = frozenset(a for a, state in adjacent.items() if state != CellState.BARRIER)
    return SenseData(adjacent=adjacent, legal=legal, greedy=greedy_actions(pos, env.food))


def _bfs(env: Environment, start: Position, stop: Optional[Position] = None) -> Dict[Position, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == stop:
            break
        for a in ACTIONS:
            nxt = a.apply(cur)
            if nxt not in dist and env.passable(nxt):
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return dist


def _reaches_all(env: Environment, start: Position, targets) -> bool:
    dist = _bfs(env, start)
    return all(t in dist for t in targets)


def shortest_path_len(env: Environment, start: Position, goal: Position) -> Optional[int]:
    """Minimum number of moves from ``start`` to ``goal``, ``None`` if unreachable."""
    return _bfs(env, start, stop=goal).get(goal)


def path_exists(env: Environment, start: Position, goal: Position) -> bool:
    return shortest_path_len(env, start, goal) is not None


# ---------- Text dump ----------

_GLYPHS = {CellState.EMPTY: ".", CellState.BARRIER: "#", CellState.FOOD: "F"}


def render(env: Environment) -> str:
    """One row per line: '.' empty, '#' barrier, 'F' food, 'H' home."""
    rows = []
    for y in range(env.n):
        row = []
        for x in range(env.n):
            row.append("H" if (x, y) == env.home else _GLYPHS[env.cell_state((x, y))])
        rows.append("".join(row))
    return "\n".join(rows)


def parse_grid(text: str, day: int = 1) -> Environment:
    """Inverse of :func:`render` (square grids, exactly one 'H' and one 'F')."""
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    n = len(lines)
    barriers, home, food = set(), None, None
    for y, line in enumerate(lines):
        if len(line) != n:
            raise ValueError(f"row {y} has {len(line)} cells, expected {n}")
        for x, ch in enumerate(line):
            if ch == "#":
                barriers.add((x, y))
            elif ch == "H":
                home = (x, y)
            elif ch == "F":
                food = (x, y)
            elif ch != ".":
                raise ValueError(f"unknown cell glyph {ch!r}")
    if home is None or food is None:
        raise ValueError("grid needs one 'H' and one 'F'")
    return Environment(n=n, barriers=frozenset(barriers), food=food, home=home, day=day)
