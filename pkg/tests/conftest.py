import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from qgame.game_core import PayoffMatrix  # noqa: E402

PD = PayoffMatrix(3, 0, 5, 1)
CHICKEN = PayoffMatrix(6, 2, 8, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def pd():
    return PD


@pytest.fixture
def chicken():
    return CHICKEN
