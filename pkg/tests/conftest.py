import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nbrw import complete_graph, k4_minus_edge, wheel_graph


@pytest.fixture
def k4e():
    return k4_minus_edge()


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def w523():
    return wheel_graph(5, 2, 3)
