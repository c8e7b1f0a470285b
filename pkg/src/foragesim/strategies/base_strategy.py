from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Dict, Optional

from ..core.grid_env import Action

if TYPE_CHECKING:  # pragma: no cover
    from ..core.agent import StrategyContext
    from ..core.grid_env import Environment, Position

logger = logging.getLogger(__name__)


class BaseStrategy(ABC):
    """Abstract base class that every strategy implementation inherits from.

    A strategy proposes an action when the agent queries it. Only the active
    strategy is queried; the optional lifecycle callbacks are invoked on every
    strategy of the agent, so passive strategies still observe the day.

    Attributes:
        STRATEGY_TYPE_ID (str or None): Registry identifier. Must be set by
            concrete implementations.
        NEVER_FAILS (bool): True when ``select_action`` always returns a legal
            action. An experiment needs at least one such strategy.
        REQUIRES_WORLD (bool): True for strategies that read ground truth
            (the oracle). The agent calls :meth:`sync_world` before selection.
        config (dict): Options passed at construction.
        frozen (bool): When True, memory updates are skipped.

    Note:
        Callbacks receive a :class:`~foragesim.core.agent.StrategyContext`.
        Returning ``None`` (or an illegal action) from ``select_action`` is a
        failure and makes the scheduler move to the next strategy.
    """

    STRATEGY_TYPE_ID: Optional[str] = None
    NEVER_FAILS = False
    REQUIRES_WORLD = False

    def __init__(self, rng=None, **kwargs):
        """Initialize the strategy with its options.

        Args:
            rng: ``numpy.random.Generator`` used for random choices. The
                harness passes the agent stream so runs are reproducible.
            **kwargs: Strategy-specific options declared in
                ``get_strategy_def()["options"]``.
        """
        logger.debug("Initializing %s strategy with options: %s", self.__class__.__name__, kwargs)
        self.rng = rng
        self.config = kwargs
        self.frozen = False

    @property
    def name(self) -> str:
        return self.STRATEGY_TYPE_ID or self.__class__.__name__

    @staticmethod
    @abstractmethod
    def get_strategy_def() -> dict:
        """Return the strategy definition used by the CLI and the docs.

        Returns:
            dict: Strategy definition with the following structure:
                {
                    "id": str,           # Registry identifier (e.g. 'least_visited')
                    "name": str,         # Display name
                    "description": str,  # One-line summary
                    "requires": {        # What the strategy needs from the agent
                        "localization": bool,
                        "smell": bool,
                        "within_day_memory": bool,
                        "multi_day_memory": bool,
                        "planning": bool,
                    },
                    "options": [         # Constructor keyword options
                        {"key": str, "type": str, "default": any, "help": str},
                    ],
                }
        """

    @abstractmethod
    def select_action(self, ctx: "StrategyContext") -> Optional[Action]:
        """Propose an action for this tick, or ``None`` on failure."""

    # ---------- Optional interfacing functions ----------

    def new_day(self, ctx: "StrategyContext") -> None:
        """Prepare for a new day (called on every strategy, tick 0)."""

    def pre_action(self, ctx: "StrategyContext") -> None:
        """Observe the tick's sense data before any action is chosen."""

    def post_action(self, ctx: "StrategyContext") -> None:
        """See the action chosen this tick (``ctx.action``), by any strategy."""

    def upon_reward(self, ctx: "StrategyContext") -> None:
        """Called once food is reached (skipped when the day hits the step cap)."""

    def on_activation(self, budget: int) -> None:
        """Called when the scheduler makes this strategy active.

        Args:
            budget: Ticks granted for this activation, 0 for unlimited.
        """

    def sync_world(self, env: "Environment", position: "Position") -> None:
        """Receive ground truth; only used when ``REQUIRES_WORLD`` is set."""

    # ---------- Bookkeeping ----------

    def freeze(self) -> None:
        self.frozen = True

    @property
    def planning_count(self) -> int:
        return 0

    def memory_size(self) -> int:
        return 0

    def day_statistics(self) -> Dict[str, int]:
        return {}

    def choice(self, items):
        """Uniform pick from a non-empty sequence using the strategy's rng."""
        if len(items) == 1:
            return items[0]
        return items[int(self.rng.integers(len(items)))]
