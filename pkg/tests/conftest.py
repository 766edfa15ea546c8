import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from latincanon.latin_core import (
    LatinSquare,
    apply_isotopism,
    cyclic_square,
    elementary_abelian_square,
    validate,
)
from latincanon.sampler import jm_sample

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def z3() -> LatinSquare:
    return cyclic_square(3)


@pytest.fixture
def z4() -> LatinSquare:
    return cyclic_square(4)


@pytest.fixture
def k4() -> LatinSquare:
    return elementary_abelian_square(4)


def perms(n: int):
    return st.permutations(list(range(1, n + 1)))


@st.composite
def squares(draw, min_n: int = 2, max_n: int = 12):
    """A Jacobson-Matthews sample of random order."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return jm_sample(n, seed, burn_in=4 * n ** 3)


@st.composite
def square_and_isotope(draw, min_n: int = 2, max_n: int = 12):
    L = draw(squares(min_n, max_n))
    a, b, c = draw(perms(L.n)), draw(perms(L.n)), draw(perms(L.n))
    return L, apply_isotopism(L, a, b, c)


def grid(rows) -> LatinSquare:
    return validate(np.array(rows))


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
