import numpy as np
import pytest

from adia_tradeoff import grover_family, make_schedule


@pytest.fixture(scope="session")
def grover8_linear():
    return grover_family(8, make_schedule("linear"))


@pytest.fixture(scope="session")
def grover8_linear_full():
    return grover_family(8, make_schedule("linear"), mode="fullN")


@pytest.fixture(scope="session")
def grover32_optimal():
    return grover_family(32, make_schedule("optimal", 32))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
