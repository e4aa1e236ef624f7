import numpy as np
import pytest
import torch

from ganqec.dataset import generate_dataset, write_dataset
from ganqec.lattice import build_layout

torch.set_num_threads(2)


@pytest.fixture(scope="session")
def lay3():
    return build_layout(3)


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory, lay3):
    """A small deterministic d=3 training file for unit tests."""
    path = tmp_path_factory.mktemp("data") / "d3_small.gqds"
    records = generate_dataset(lay3, 0.08, 64, "ml", seed=17)
    write_dataset(path, lay3, 0.08, records)
    return path


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
