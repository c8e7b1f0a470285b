"""Path integration: the agent's dead-reckoning estimate of where it is."""

from __future__ import annotations

from typing import NamedTuple

from .grid_env import Action


class LocationEstimate(NamedTuple):
    """Relative position with home at (0, 0); may drift under motion noise."""

    ex: int = 0
    ey: int = 0

    def offset(self, action: Action) -> "LocationEstimate":
        return LocationEstimate(self.ex + action.dx, self.ey + action.dy)

    def absolute(self, home) -> tuple:
        return (self.ex + home[0], self.ey + home[1])


HOME = LocationEstimate(0, 0)


def integrate(estimate: LocationEstimate, intended: Action) -> LocationEstimate:
    """Add the intended displacement; the noisy outcome is never observed."""
    return estimate.offset(intended)


def manhattan(a, b) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])
