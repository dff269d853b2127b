import numpy as np
import pytest

from periscope import GaussianBump, SphericalPeriscopeSpec, ReversedPeriscopeSpec, Affine


@pytest.fixture(scope="session")
def bump_sphere():
    """Gaussian-bump first mirror over a cap of S^2; max slope well under 0.6."""
    f = GaussianBump(amplitude=0.3, center=(0.2, 0.1, 1.0), width=0.5)
    return SphericalPeriscopeSpec(f, 2.0, (0.0, 0.0, 1.0), 0.4)


@pytest.fixture(scope="session")
def affine_reversed():
    return ReversedPeriscopeSpec(Affine(a=(0.5, 0.0), b=1.0), 3.0, (-1.0, -1.0), (1.0, 1.0))


@pytest.fixture(scope="session")
def bump_reversed():
    """Flank of a bump beyond its inflection radius, where T is one-to-one."""
    f = GaussianBump(amplitude=0.5, center=(0.0, 0.0), width=1.0, offset=1.0)
    return ReversedPeriscopeSpec(f, 3.0, (1.2, -0.3), (2.0, 0.3))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
