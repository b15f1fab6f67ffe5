import numpy as np
import pytest

from liefact.groups import SU2, Torus


@pytest.fixture
def rng():
    return np.random.default_rng(20240911)


@pytest.fixture
def t1():
    return Torus(1)


@pytest.fixture
def t2():
    return Torus(2)


@pytest.fixture
def su2():
    return SU2()
