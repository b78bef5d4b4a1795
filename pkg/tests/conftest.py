import pytest

from toric_surface_lab import (
    compute_aut,
    dp6_fan,
    hirzebruch_fan,
    p2_fan,
    square_fan,
)
from toric_surface_lab.corpus import standard_corpus


@pytest.fixture(scope="session")
def p2():
    return p2_fan()


@pytest.fixture(scope="session")
def f2():
    return hirzebruch_fan(2)


@pytest.fixture(scope="session")
def square():
    return square_fan()


@pytest.fixture(scope="session")
def dp6():
    return dp6_fan()


@pytest.fixture(scope="session")
def p2_aut(p2):
    return compute_aut(p2)


@pytest.fixture(scope="session")
def square_aut(square):
    return compute_aut(square)


@pytest.fixture(scope="session")
def dp6_aut(dp6):
    return compute_aut(dp6)


@pytest.fixture(scope="session")
def small_corpus():
    """A reduced corpus for module-level property tests."""
    return standard_corpus(seed=1, chains=40)
