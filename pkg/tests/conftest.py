import numpy as np
import pytest

from xydqpt.oracle import DenseChain


@pytest.fixture(scope="session")
def chain8() -> DenseChain:
    return DenseChain(8)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240809)
