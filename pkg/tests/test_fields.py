import numpy as np
import pytest

from periscope.fields import Affine, Constant, GaussianBump, Quadratic, SumOfBumps, make_field

FAMILIES = [
    Constant(c=0.7),
    Affine(a=(0.3, -0.2, 0.5), b=1.0),
    Quadratic(A=((1.0, 0.2, 0.0), (0.0, -0.5, 0.3), (0.1, 0.0, 0.4)), b=(0.1, 0.2, -0.3), c=0.5),
    GaussianBump(amplitude=0.4, center=(0.1, 0.2, 0.9), width=0.5, offset=0.1),
    SumOfBumps(
        bumps=(
            GaussianBump(amplitude=0.3, center=(0.0, 0.0, 1.0), width=0.4),
            GaussianBump(amplitude=-0.2, center=(0.3, -0.1, 0.8), width=0.3),
        ),
        offset=-0.1,
    ),
]


@pytest.fixture
def points(rng):
    return rng.uniform(-1.0, 1.0, size=(50, 3))


@pytest.mark.parametrize("field", FAMILIES, ids=lambda f: f.family)
def test_gradient_matches_differences(field, points):
    err = np.abs(field.gradient(points) - field.fd_gradient(points, 1e-5)).max()
    assert err < 1e-9


@pytest.mark.parametrize("field", FAMILIES, ids=lambda f: f.family)
def test_batched_matches_pointwise(field, points):
    vals = field.value(points)
    grads = field.gradient(points)
    for p, v, g in zip(points, vals, grads):
        # BLAS may reorder sums between batched and single evaluation
        assert abs(field.value(p) - v) <= 1e-15 * (1 + abs(v))
        assert np.allclose(field.gradient(p), g, rtol=1e-15, atol=1e-15)


@pytest.mark.parametrize("field", FAMILIES, ids=lambda f: f.family)
def test_deterministic(field, points):
    assert np.array_equal(field.value(points), field.value(points.copy()))
    assert np.array_equal(field.gradient(points), field.gradient(points.copy()))


def test_fd_mode_switches_gradient(points):
    f = FAMILIES[3]
    g = f.with_fd(1e-6)
    assert g.fd_step == 1e-6
    assert np.array_equal(g.gradient(points), f.fd_gradient(points, 1e-6))
    assert np.abs(g.gradient(points) - f.gradient(points)).max() < 1e-9


@pytest.mark.parametrize("field", FAMILIES, ids=lambda f: f.family)
def test_make_field_round_trip(field, points):
    rebuilt = make_field(field.family, field.params())
    assert rebuilt == field
    assert np.array_equal(rebuilt.value(points), field.value(points))


def test_make_field_unknown():
    with pytest.raises(ValueError):
        make_field("spline", {})
