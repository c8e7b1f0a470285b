"""Bounded A* on a 4-connected plane of estimated locations."""

from __future__ import annotations

import heapq
import itertools
from typing import AbstractSet, Iterable, Optional, Tuple

from ...core.grid_env import ACTIONS
from ...core.localization import manhattan
from ..visits_path import PlanMap

Box = Tuple[int, int, int, int]


def bounding_box(cells: Iterable[Tuple[int, int]], margin: int = 0) -> Box:
    """Inclusive (xmin, ymin, xmax, ymax) around ``cells`` grown by ``margin``."""
    cells = list(cells)
    if not cells:
        raise ValueError("bounding box of no cells")
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    return (min(xs) - margin, min(ys) - margin, max(xs) + margin, max(ys) + margin)


def box_size(box: Box) -> int:
    return (box[2] - box[0] + 1) * (box[3] - box[1] + 1)


def box_perimeter(box: Box) -> int:
    return 2 * ((box[2] - box[0] + 1) + (box[3] - box[1] + 1))


def _in_box(cell, box: Optional[Box]) -> bool:
    if box is None:
        return True
    return box[0] <= cell[0] <= box[2] and box[1] <= cell[1] <= box[3]


def astar(
    start: Tuple[int, int],
    goal: Tuple[int, int],
    barriers: AbstractSet,
    max_len: int,
    box: Optional[Box] = None,
) -> Optional[PlanMap]:
    """Shortest path from ``start`` to ``goal`` as a location -> action map.

    Cells in ``barriers`` and cells outside ``box`` are blocked; everything
    else is passable. Nodes whose f = g + h exceeds ``max_len`` are never
    expanded. ``start`` itself is not checked against ``barriers``.

    Returns:
        The plan (empty when ``start == goal``) or ``None`` when no path of
        length <= ``max_len`` exists.
    """
    start, goal = tuple(start), tuple(goal)
    if max_len < 0:
        raise ValueError(f"max_len must be >= 0, got {max_len}")
    if start == goal:
        return {}
    if goal in barriers or not _in_box(goal, box) or manhattan(start, goal) > max_len:
        return None

    counter = itertools.count()
    open_heap = [(manhattan(start, goal), next(counter), start)]
    g_cost = {start: 0}
    came_from = {}
    closed = set()

    while open_heap:
        _, _, current = heapq.heappop(open_heap)
        if current in closed:
            continue
        if current == goal:
            return _reconstruct(came_from, goal)
        closed.add(current)
        g_next = g_cost[current] + 1
        for action in ACTIONS:
            nxt = action.apply(current)
            if nxt in closed or nxt in barriers or not _in_box(nxt, box):
                continue
            f = g_next + manhattan(nxt, goal)
            if f > max_len:
                continue
            if g_next < g_cost.get(nxt, g_next + 1):
                g_cost[nxt] = g_next
                came_from[nxt] = (current, action)
                heapq.heappush(open_heap, (f, next(counter), nxt))
    return None


def _reconstruct(came_from, goal) -> PlanMap:
    plan: PlanMap = {}
    node = goal
    while node in came_from:
        prev, action = came_from[node]
        plan[prev] = action
        node = prev
    return plan
