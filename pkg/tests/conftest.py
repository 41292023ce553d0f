import numpy as np
import pytest

from szegomap import domains
from szegomap.boundary import quadrature
from szegomap.orthopoly import orthonormalize

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def circle():
    return domains.circle()


@pytest.fixture(scope="session")
def square():
    return domains.polygon(domains.SQUARE)


@pytest.fixture(scope="session")
def lshape():
    return domains.polygon(domains.LSHAPE)


@pytest.fixture(scope="session")
def bases(circle, square, lshape):
    """Degree-60 bases on the three builtin test domains."""
    return {
        name: orthonormalize(quadrature(b, 60), 60)
        for name, b in (("circle", circle), ("square", square), ("lshape", lshape))
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
