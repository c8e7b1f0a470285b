import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))


@pytest.fixture
def rng():
    return np.random.default_rng(2026)


@pytest.fixture
def empty15():
    """Empty 15x15 grid, home in the centre, food in the lower-right corner."""
    from foragesim.core.grid_env import Environment

    return Environment(n=15, barriers=frozenset(), food=(14, 14), home=(7, 7))
