"""Two mirrors that send every ray leaving the origin back to the origin.

The first mirror is the radial graph ``P(x) = exp(f(x)) x`` over a patch of
the unit sphere, where ``f`` is an ambient scalar field restricted to the
sphere.  Given the half perimeter ``C`` of the (constant) triangle O-P-Q, the
second mirror and the induced map ``T: x -> y`` of the sphere follow in closed
form from ``exp(f)``, ``|grad f|`` and ``C``.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import (
    DegenerateError,
    DomainError,
    InfeasibleConfigurationError,
    InverseMapError,
    NonUniqueGeodesicError,
    PathBudgetError,
    PeriscopeError,
)
from .fields import ScalarField
from .geometry import (
    geodesic_direction,
    gnomonic,
    gnomonic_inverse,
    normalize,
    sphere_exp,
    tangent_basis,
    tangential_gradient,
)

FEASIBILITY_EPS = 1e-12
ANTIPODAL_GRAD = 1e-12


# Closed-form relations in terms of the scalars e^f, |grad f| and C.


def second_grad_norm(ef, gf, C):
    """``|grad g|`` at ``T(x)``."""
    den = C * (1.0 + gf * gf) - ef
    if np.any(den <= FEASIBILITY_EPS):
        raise InfeasibleConfigurationError(
            f"C(1+|grad f|^2) - e^f = {np.min(den):.3g} is not positive", invariant="feasibility"
        )
    return ef * gf / den


def second_radius_value(ef, gf, C):
    """``exp(g)`` at ``T(x)``."""
    den = C * (1.0 + gf * gf) - ef
    if np.any(den <= FEASIBILITY_EPS):
        raise InfeasibleConfigurationError(
            f"C(1+|grad f|^2) - e^f = {np.min(den):.3g} is not positive", invariant="feasibility"
        )
    return (ef * ef - 2.0 * C * ef + C * C * (1.0 + gf * gf)) / den


def return_angle(ef, gf, C):
    """Spherical distance between ``x`` and ``T(x)``."""
    # equals e^{2f} - 2Ce^f + C^2(1+|grad f|^2), written as a sum of squares
    radicand = (C - ef) ** 2 + (C * gf) ** 2
    if np.any(radicand <= 0.0):
        raise DegenerateError("radicand vanishes (C = e^f and grad f = 0)")
    arg = np.minimum(C * gf / np.sqrt(radicand), 1.0)
    return np.pi - 2.0 * np.arcsin(arg)


def shared_ratio(e, grad_norm):
    """Common value ``e |grad| / (1 + |grad|^2)`` shared by both mirrors."""
    return e * grad_norm / (1.0 + grad_norm * grad_norm)


def harmonic_ratio(C, gf, gg):
    """The admissible root ``C |grad f| |grad g| / (|grad f| + |grad g|)``."""
    return C * gf * gg / (gf + gg)


def rejected_root(C, gf, gg):
    return C / (gf + gg)


@dataclass(frozen=True)
class SphericalPeriscopeSpec:
    """First mirror, path constant and the sphere patch it lives over.

    The patch is the cap of angular ``radius`` around ``center``.  The mirror is
    checked for feasibility on a ``validation_grid``-per-axis sample of the
    patch at construction.
    """

    f: ScalarField
    C: float
    center: tuple
    radius: float
    validation_grid: int = 33
    margin: float = 1e-9

    def __post_init__(self):
        center = normalize(np.asarray(self.center, dtype=float))
        object.__setattr__(self, "center", tuple(center))
        if self.dim < 2:
            raise ValueError("dimension must be at least 2")
        if not self.C > 0:
            raise InfeasibleConfigurationError(f"C = {self.C} must be positive", invariant="positive-C")
        if not 0 < self.radius < np.pi / 2:
            raise ValueError("patch radius must lie in (0, pi/2)")
        if self.validation_grid > 0:
            self.validate(self.validation_grid)

    @property
    def dim(self):
        return len(self.center)

    @cached_property
    def x0(self):
        return np.asarray(self.center, dtype=float)

    @cached_property
    def basis(self):
        return tangent_basis(self.x0)

    @property
    def chart_half_width(self):
        # the inscribed chart cube stays inside the cap
        return np.tan(self.radius) / np.sqrt(self.dim - 1)

    def chart_point(self, u):
        return gnomonic(self.x0, self.basis, u)

    def chart_coords(self, x):
        return gnomonic_inverse(self.x0, self.basis, x)

    def contains(self, x, slack=0.0):
        """Whether unit ``x`` lies in the cap, optionally widened by ``slack`` radians."""
        return float(np.asarray(x) @ self.x0) >= np.cos(self.radius + slack) - 1e-12

    def grid(self, counts, shrink=0.0):
        """Patch sample as ``[(index, x), ...]`` in lexicographic index order."""
        if np.isscalar(counts):
            counts = [int(counts)] * (self.dim - 1)
        s = self.chart_half_width - shrink
        axes = [np.linspace(-s, s, c) if c > 1 else np.zeros(1) for c in counts]
        out = []
        for idx in product(*(range(len(a)) for a in axes)):
            u = np.array([a[i] for a, i in zip(axes, idx)])
            out.append((idx, self.chart_point(u)))
        return out

    def validate(self, count):
        pts = np.array([x for _, x in self.grid(count)])
        ef = np.exp(self.f.value(pts))
        grad = self.f.gradient(pts)
        grad = grad - np.sum(grad * pts, axis=-1)[:, None] * pts
        gf2 = np.sum(grad * grad, axis=-1)
        if np.any(ef >= self.C - self.margin):
            raise PathBudgetError(
                f"e^f reaches {ef.max():.6g} >= C = {self.C} on the patch", invariant="path-budget"
            )
        den = self.C * (1.0 + gf2) - ef
        if np.any(den <= self.margin):
            raise InfeasibleConfigurationError(
                f"C(1+|grad f|^2) - e^f drops to {den.min():.3g} on the patch", invariant="feasibility"
            )


@dataclass(frozen=True)
class SphericalSynthesis:
    x: np.ndarray
    y: np.ndarray
    e_f: float
    e_g: float
    grad_f: np.ndarray
    grad_g: np.ndarray
    alpha: float
    beta: float
    S: float
    d: float
    antipodal: bool


def _local(spec, x, slack=0.0):
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim,):
        raise DomainError(f"expected a point of dimension {spec.dim}")
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise DomainError("point is not on the unit sphere")
    if not spec.contains(x, slack):
        raise DomainError("point lies outside the patch")
    ef = float(np.exp(spec.f.value(x)))
    grad = tangential_gradient(spec.f, x)
    return x, ef, grad, float(np.linalg.norm(grad))


def mirror_point(spec, x):
    x, ef, _, _ = _local(spec, x)
    return ef * x


def mirror_normal(spec, x):
    """Normal ``x - grad f(x)`` of the first mirror at ``P(x)`` (not unit)."""
    x, _, grad, _ = _local(spec, x)
    return x - grad


def grad_g_magnitude(spec, x):
    _, ef, _, gf = _local(spec, x)
    return float(second_grad_norm(ef, gf, spec.C))


def second_radius(spec, x):
    """``exp(g(T(x)))``: distance from the origin to the second mirror along ``T(x)``."""
    _, ef, _, gf = _local(spec, x)
    return float(second_radius_value(ef, gf, spec.C))


def geodesic_distance(spec, x):
    _, ef, _, gf = _local(spec, x)
    second_grad_norm(ef, gf, spec.C)
    return float(return_angle(ef, gf, spec.C))


def _map(spec, x, ef, grad, gf):
    d = float(return_angle(ef, gf, spec.C))
    if gf < ANTIPODAL_GRAD:
        return -x, d, None, True
    u = grad / gf
    return sphere_exp(x, u, d), d, u, False


def periscope_map(spec, x):
    """``T(x)``.  Where ``grad f`` vanishes the ray returns through O and ``-x`` is returned."""
    x, ef, grad, gf = _local(spec, x)
    second_grad_norm(ef, gf, spec.C)
    return _map(spec, x, ef, grad, gf)[0]


def second_mirror_gradient(spec, x):
    """``grad g`` at ``y = T(x)``; it points from ``y`` back toward ``x``."""
    x, ef, grad, gf = _local(spec, x)
    gg = float(second_grad_norm(ef, gf, spec.C))
    y, d, u, antipodal = _map(spec, x, ef, grad, gf)
    if antipodal or gg == 0.0:
        return np.zeros_like(x)
    # unit tangent at y of the arc running from y to x
    back = np.sin(d) * x - np.cos(d) * u
    return gg * back


def map_field(spec, x):
    """Unit tangent at ``x`` of the geodesic arc from ``x`` to ``T(x)``."""
    x, ef, grad, gf = _local(spec, x)
    second_grad_norm(ef, gf, spec.C)
    y, _, _, antipodal = _map(spec, x, ef, grad, gf)
    if antipodal:
        raise NonUniqueGeodesicError("grad f vanishes; T(x) is antipodal to x")
    return geodesic_direction(x, y)


def synthesize(spec, x):
    x, ef, grad, gf = _local(spec, x)
    C = spec.C
    gg = float(second_grad_norm(ef, gf, C))
    eg = float(second_radius_value(ef, gf, C))
    y, d, u, antipodal = _map(spec, x, ef, grad, gf)
    if antipodal or gg == 0.0:
        grad_g = np.zeros_like(x)
    else:
        grad_g = gg * (np.sin(d) * x - np.cos(d) * u)
    return SphericalSynthesis(
        x=x,
        y=y,
        e_f=ef,
        e_g=eg,
        grad_f=grad,
        grad_g=grad_g,
        alpha=float(np.arctan(gf)),
        beta=float(np.arctan(gg)),
        S=float(shared_ratio(ef, gf)),
        d=d,
        antipodal=antipodal,
    )


def _raw_map(spec, x, slack):
    x, ef, grad, gf = _local(spec, x, slack)
    second_grad_norm(ef, gf, spec.C)
    return _map(spec, x, ef, grad, gf)[0]


def inverse_map(spec, y, seed=None, tol=1e-13, max_iter=50, slack=1e-4):
    """Solve ``T(x) = y`` for ``x`` in the patch by Newton iteration in the patch chart.

    The preimage may lie up to ``slack`` radians outside the cap so that
    difference stencils work at its edge.
    """
    y = normalize(np.asarray(y, dtype=float))
    By = tangent_basis(y)

    def residual(u):
        return gnomonic_inverse(y, By, _raw_map(spec, spec.chart_point(u), slack))

    if seed is None:
        best = None
        for _, x in spec.grid(9):
            try:
                r = np.linalg.norm(periscope_map(spec, x) - y)
            except PeriscopeError:
                continue
            if best is None or r < best[0]:
                best = (r, x)
        if best is None:
            raise InverseMapError("no usable seed in the patch")
        seed = best[1]
    u = spec.chart_coords(np.asarray(seed, dtype=float))
    m = u.shape[0]
    h = 1e-7
    for _ in range(max_iter):
        try:
            r = residual(u)
            J = np.empty((m, m))
            for i in range(m):
                e = np.zeros(m)
                e[i] = h
                J[:, i] = (residual(u + e) - residual(u - e)) / (2.0 * h)
        except DomainError as exc:
            raise DomainError(f"inverse map left the patch: {exc}") from exc
        step = np.linalg.solve(J, r)
        u = u - step
        if np.linalg.norm(step) < tol * (1.0 + np.linalg.norm(u)):
            break
    x = spec.chart_point(u)
    if not spec.contains(x, slack):
        raise DomainError("preimage lies outside the patch")
    if np.linalg.norm(_raw_map(spec, x, slack) - y) > 1e-10:
        raise InverseMapError("Newton iteration for the inverse map did not converge")
    return x


def second_radius_at(spec, y, seed=None):
    """``exp(g(y))`` as a function on the second-mirror side of the sphere."""
    x, ef, _, gf = _local(spec, inverse_map(spec, y, seed=seed), slack=1e-4)
    return float(second_radius_value(ef, gf, spec.C))
