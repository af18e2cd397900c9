"""Shared fixtures for the lab test suite"""

import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from config.settings import DEFAULT_ALPHA  # noqa: E402
from physics.constants import born_beta  # noqa: E402


@pytest.fixture
def rng():
    """Seeded generator so property sweeps are reproducible"""
    return np.random.default_rng(20240611)


@pytest.fixture
def alpha():
    return DEFAULT_ALPHA


@pytest.fixture
def beta(alpha):
    """Born's aether constant for the default fine structure constant"""
    return born_beta(alpha)
