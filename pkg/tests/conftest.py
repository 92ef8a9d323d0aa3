import numpy as np
import pytest

from stackcover import Scenario, TargetProfile, load_example_scenario, example_table_path


@pytest.fixture
def table():
    return load_example_scenario()


@pytest.fixture
def table_path():
    return str(example_table_path())


def random_scenario(rng, n=None, m=None, integer=False):
    n = int(rng.integers(2, 7)) if n is None else n
    m = int(rng.integers(1, 9)) if m is None else m
    if integer:
        vals = rng.integers(0, 10, size=(n, 4)).astype(float)
        vals[:, 0] += 1  # keep both omegas positive
        vals[:, 2] += 1
    else:
        vals = rng.uniform(0.0, 10.0, size=(n, 4))
        vals[:, 0] += 0.1
        vals[:, 2] += 0.1
    targets = tuple(TargetProfile(*row, name=f"T{i + 1}") for i, row in enumerate(vals))
    return Scenario(targets, m)


def random_simplex(rng, n):
    return rng.dirichlet(np.ones(n))


def uniform_scenario(n, value=1.0, m=1):
    return Scenario(tuple(TargetProfile(value, value, value, value) for _ in range(n)), m)
