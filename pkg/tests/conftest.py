import numpy as np
import pytest

from opinionnet import fixtures
from opinionnet.graphs import random_connected_positive_graph


@pytest.fixture(scope="session")
def fixture_graph():
    return fixtures.fixture_graph()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_positive_graph(seed: int, n: int = 8, extra: int = 5):
    return random_connected_positive_graph(
        n, np.random.default_rng(seed), extra_edges=extra)
