import numpy as np
import pytest

from trispec.mapping import TriangleMap


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ref_tri():
    return TriangleMap.reference()


@pytest.fixture
def skew_tri():
    # counterclockwise, B != 0
    return TriangleMap(((0.3, 0.1), (1.5, 0.4), (0.2, 1.3)))


def random_square_points(rng, n, margin=0.0):
    return rng.uniform(-1 + margin, 1 - margin, size=(2, n))


def random_triangle_points(rng, n):
    u, v = rng.uniform(size=(2, n))
    flip = u + v > 1
    u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
    return u, v


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.summary_lines():
            terminalreporter.write_line(line)
