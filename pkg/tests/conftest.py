import numpy as np
import pytest

from ganqec.lattice import build_layout


@pytest.fixture(scope="session")
def lay3():
    return build_layout(3)


@pytest.fixture(scope="session")
def lay5():
    return build_layout(5)


def random_pattern(layout, rng, p=0.5):
    return (rng.random(layout.n_edges) < p).astype(np.uint8)
