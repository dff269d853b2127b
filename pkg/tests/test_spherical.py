import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from periscope import spherical_periscope as sp
from periscope.errors import DomainError, InfeasibleConfigurationError, NonUniqueGeodesicError, PathBudgetError
from periscope.fields import Affine, Constant, GaussianBump
from periscope.geometry import fd_gradient, geodesic_direction, reflect_direction, unit_angle


def worked_2d():
    # e^f = 1, |grad f| = 0.5 at x = (1, 0), f increasing counterclockwise
    return sp.SphericalPeriscopeSpec(Affine(a=(0.0, 0.5)), 2.0, (1.0, 0.0), 0.3)


def worked_3d():
    return sp.SphericalPeriscopeSpec(Affine(a=(0.0, 0.5, 0.0)), 2.0, (1.0, 0.0, 0.0), 0.3)


X = np.array([1.0, 0.0, 0.0])


def test_mirror_point_examples():
    s = sp.SphericalPeriscopeSpec(Constant(c=0.0), 2.0, (1, 0, 0), 0.3)
    assert np.array_equal(sp.mirror_point(s, X), X)
    s = sp.SphericalPeriscopeSpec(Constant(c=np.log(2.0)), 3.0, (0, 1, 0), 0.3)
    assert np.allclose(sp.mirror_point(s, np.array([0, 1.0, 0])), [0, 2, 0], atol=1e-15)
    s = sp.SphericalPeriscopeSpec(Affine(a=(0, 0, 0.1)), 2.0, (0, 0, 1), 0.3)
    assert np.allclose(sp.mirror_point(s, np.array([0, 0, 1.0])), [0, 0, np.exp(0.1)], atol=1e-15)


def test_outside_patch():
    with pytest.raises(DomainError):
        sp.mirror_point(worked_3d(), np.array([0, 1.0, 0]))


def test_mirror_normal_examples():
    s = sp.SphericalPeriscopeSpec(Constant(c=0.2), 2.0, (1, 0, 0), 0.3)
    assert np.array_equal(sp.mirror_normal(s, X), X)
    N = sp.mirror_normal(worked_3d(), X)
    assert abs(unit_angle(N / np.linalg.norm(N), X) - np.arctan(0.5)) < 1e-15
    s = sp.SphericalPeriscopeSpec(Affine(a=(0, 0, 1.0)), 5.0, (1, 0, 0), 0.3)
    assert np.allclose(sp.mirror_normal(s, X), [1, 0, -1])


def test_mirror_normal_orthogonal_to_surface_velocity(bump_sphere):
    x = bump_sphere.grid(5)[7][1]
    N = sp.mirror_normal(bump_sphere, x)
    for v in bump_sphere.basis.T:
        v = v - (v @ x) * x
        h = 1e-6
        vel = (sp.mirror_point(bump_sphere, (x + h * v) / np.linalg.norm(x + h * v))
               - sp.mirror_point(bump_sphere, (x - h * v) / np.linalg.norm(x - h * v))) / (2 * h)
        assert abs(vel @ N) < 1e-9
        grad = bump_sphere.f.gradient(x)
        grad = grad - (grad @ x) * x
        analytic = np.exp(bump_sphere.f.value(x)) * (v + (v @ grad) * x)
        assert abs(analytic @ N) < 1e-14


def test_worked_point_values():
    s = worked_3d()
    assert abs(sp.grad_g_magnitude(s, X) - 1 / 3) < 1e-15
    assert abs(sp.second_radius(s, X) - 4 / 3) < 1e-15
    assert abs(sp.geodesic_distance(s, X) - np.pi / 2) < 1e-15


def test_zero_gradient_cases():
    s = sp.SphericalPeriscopeSpec(Constant(c=0.0), 2.0, (1, 0, 0), 0.3)
    assert sp.grad_g_magnitude(s, X) == 0.0
    assert abs(sp.second_radius(s, X) - 1.0) < 1e-15
    assert sp.geodesic_distance(s, X) == np.pi
    s = sp.SphericalPeriscopeSpec(Constant(c=0.0), 1.5, (1, 0, 0), 0.3)
    assert abs(sp.second_radius(s, X) - 0.5) < 1e-15
    assert sp.second_grad_norm(1.9, 0.0, 2.0) == 0.0


def test_small_gradient_asymptotics():
    ef, gf, C = 1.0, 1e-4, 2.0
    d = sp.return_angle(ef, gf, C)
    assert abs(d - (np.pi - 2 * C * gf / abs(C - ef))) < 1e-10


def test_infeasible_scalars():
    with pytest.raises(InfeasibleConfigurationError):
        sp.second_grad_norm(2.0, 0.0, 2.0)
    with pytest.raises(InfeasibleConfigurationError):
        sp.second_radius_value(3.0, 0.1, 2.0)


def test_spec_validation_names_invariant():
    with pytest.raises(PathBudgetError) as err:
        sp.SphericalPeriscopeSpec(Constant(c=1.0), 2.0, (0, 0, 1), 0.3)
    assert err.value.invariant == "path-budget"
    with pytest.raises(InfeasibleConfigurationError):
        sp.SphericalPeriscopeSpec(Constant(c=0.0), -1.0, (0, 0, 1), 0.3)


def test_periscope_map_2d_rotates_quarter_turn():
    s = worked_2d()
    y = sp.periscope_map(s, np.array([1.0, 0.0]))
    assert np.allclose(y, [0.0, 1.0], atol=1e-15)
    assert np.allclose(sp.map_field(s, np.array([1.0, 0.0])), [0.0, 1.0], atol=1e-15)


def test_periscope_map_constant_is_antipodal():
    s = sp.SphericalPeriscopeSpec(Constant(c=0.0), 2.0, (1, 0, 0), 0.3)
    syn = sp.synthesize(s, X)
    assert syn.antipodal
    assert np.array_equal(syn.y, -X)
    with pytest.raises(NonUniqueGeodesicError):
        sp.map_field(s, X)


def test_map_lands_at_distance_d(bump_sphere):
    for _, x in bump_sphere.grid(7):
        y = sp.periscope_map(bump_sphere, x)
        assert abs(x @ y - np.cos(sp.geodesic_distance(bump_sphere, x))) < 1e-12


def test_second_gradient_direction_and_tangency(bump_sphere):
    for _, x in bump_sphere.grid(5):
        syn = sp.synthesize(bump_sphere, x)
        if syn.antipodal:
            continue
        gg = sp.second_mirror_gradient(bump_sphere, x)
        assert abs(gg @ syn.y) < 1e-12
        back = geodesic_direction(syn.y, x)
        assert np.linalg.norm(gg - np.linalg.norm(gg) * back) < 1e-10


def test_second_gradient_worked_case_reflects_home():
    s = worked_3d()
    syn = sp.synthesize(s, X)
    gg = sp.second_mirror_gradient(s, X)
    assert abs(np.linalg.norm(gg) - 1 / 3) < 1e-15
    P, Q = syn.e_f * X, syn.e_g * syn.y
    out = reflect_direction((Q - P) / np.linalg.norm(Q - P), syn.y - gg)
    assert np.linalg.norm(out + syn.y) < 1e-10


def test_second_gradient_matches_inverse_map_differences(bump_sphere):
    """grad g from the closed form against differences of log e^g on the y-side."""
    for _, x in bump_sphere.grid(3)[::2]:
        syn = sp.synthesize(bump_sphere, x)
        y = syn.y

        def log_radius(p):
            return np.log(sp.second_radius_at(bump_sphere, p / np.linalg.norm(p), seed=x))

        fd = fd_gradient(log_radius, y, 1e-5)
        fd = fd - (fd @ y) * y
        assert np.linalg.norm(fd - syn.grad_g) < 1e-7


def test_zero_gradient_second_mirror():
    s = sp.SphericalPeriscopeSpec(Constant(c=0.1), 2.0, (1, 0, 0), 0.3)
    assert np.array_equal(sp.second_mirror_gradient(s, X), np.zeros(3))


def test_map_field_parallel_to_gradient(bump_sphere):
    for _, x in bump_sphere.grid(9):
        syn = sp.synthesize(bump_sphere, x)
        gf = np.linalg.norm(syn.grad_f)
        if gf < 1e-6:
            continue
        V = sp.map_field(bump_sphere, x)
        assert abs(V @ x) < 1e-12
        assert np.linalg.norm(np.cross(V, syn.grad_f)) / gf < 1e-10
        assert unit_angle(V, syn.grad_f / gf) < 1e-9


feasible = st.tuples(
    st.floats(0.05, 3.0), st.floats(0.0, 3.0), st.floats(0.01, 5.0)
).filter(lambda t: t[2] * (1 + t[1] ** 2) - t[0] > 1e-3 and t[0] < t[2])


@settings(max_examples=300, deadline=None)
@given(feasible)
def test_closed_form_identities(sample):
    ef, gf, C = sample
    gg = sp.second_grad_norm(ef, gf, C)
    eg = sp.second_radius_value(ef, gf, C)
    S = sp.shared_ratio(ef, gf)
    scale = 1.0 + ef + eg + C
    assert abs(S - sp.shared_ratio(eg, gg)) < 1e-12 * scale
    if gf + gg > 0:
        assert abs(S - sp.harmonic_ratio(C, gf, gg)) < 1e-12 * scale
    one_minus_cos = 2 * (gf + gg) ** 2 / ((1 + gf**2) * (1 + gg**2))
    closure = ef * eg * one_minus_cos - 2 * C * (ef + eg) + 2 * C * C
    assert abs(closure) < 1e-10 * scale**2
    radicand = ef**2 - 2 * C * ef + C**2 * (1 + gf**2)
    arg = C * gf / np.sqrt(radicand)
    assert 0.0 <= arg <= 1.0 + 1e-15
    assert 0.0 < sp.return_angle(ef, gf, C) <= np.pi


def test_second_radius_numerator_sum_of_squares():
    ef, gf, C = 1.3, 0.7, 2.2
    expanded = ef**2 - 2 * C * ef + C**2 * (1 + gf**2)
    assert abs(expanded - ((C - ef) ** 2 + C**2 * gf**2)) < 1e-14


def test_perimeter_constant(bump_sphere):
    for _, x in bump_sphere.grid(9):
        syn = sp.synthesize(bump_sphere, x)
        P, Q = syn.e_f * x, syn.e_g * syn.y
        assert abs(syn.e_f + syn.e_g + np.linalg.norm(P - Q) - 2 * bump_sphere.C) < 1e-10


def test_coplanarity_of_construction(bump_sphere):
    for _, x in bump_sphere.grid(5):
        syn = sp.synthesize(bump_sphere, x)
        Nx = x - syn.grad_f
        Ny = syn.y - syn.grad_g
        M = np.array([x, syn.y, Nx, Ny])
        # all four lie in one 2-plane through O
        assert np.linalg.svd(M, compute_uv=False)[2] < 1e-12


def test_synthesis_angles(bump_sphere):
    for _, x in bump_sphere.grid(5):
        syn = sp.synthesize(bump_sphere, x)
        assert abs(np.tan(syn.alpha) - np.linalg.norm(syn.grad_f)) < 1e-12
        assert abs(np.tan(syn.beta) - np.linalg.norm(syn.grad_g)) < 1e-12
        assert abs(syn.d - (np.pi - 2 * (syn.alpha + syn.beta))) < 1e-12


def test_rejected_root_blows_up_in_constant_limit():
    C, ef = 2.0, 1.0
    for gf in (1e-2, 1e-4, 1e-6):
        gg = sp.second_grad_norm(ef, gf, C)
        S = sp.shared_ratio(ef, gf)
        assert abs(S - sp.harmonic_ratio(C, gf, gg)) < 1e-15
        assert sp.rejected_root(C, gf, gg) > 1e3 * S
