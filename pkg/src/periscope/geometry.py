"""Vectors, rays, reflection, sphere geodesics and small numerical utilities.

Points and directions are plain 1-d float numpy arrays.  Functions here are
pure; nothing is normalized silently except where a docstring says so.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateNormalError,
    NoIntersectionError,
    NonUniqueGeodesicError,
    ZeroDistanceError,
)

NORMAL_EPS = 1e-14
ANTIPODAL_TOL = 1e-9


def as_vec(v, dim=None):
    """Return ``v`` as a finite float vector of length >= 2."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise ValueError(f"expected a vector of length >= 2, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a vector of length {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite components")
    return arr


def normalize(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n < NORMAL_EPS:
        raise DegenerateNormalError(f"cannot normalize vector of norm {n:.3g}")
    return v / n


def unit_angle(a, b):
    """Angle between two unit vectors, accurate near 0 and pi."""
    return 2.0 * np.arctan2(np.linalg.norm(a - b), np.linalg.norm(a + b))


@dataclass(frozen=True)
class Ray:
    """An oriented line.  The direction is normalized on construction."""

    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        origin = as_vec(self.origin)
        direction = normalize(as_vec(self.direction, dim=origin.shape[0]))
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "direction", direction)

    def at(self, t):
        return self.origin + t * self.direction

    def distance_to(self, point):
        """Euclidean distance from ``point`` to the full line."""
        w = np.asarray(point, dtype=float) - self.origin
        return float(np.linalg.norm(w - (w @ self.direction) * self.direction))


def reflect_direction(d, normal):
    """Mirror reflection of the unit direction ``d`` in the hyperplane orthogonal to ``normal``.

    ``normal`` need not be unit length and its sign is irrelevant.
    """
    d = np.asarray(d, dtype=float)
    normal = np.asarray(normal, dtype=float)
    nn = np.linalg.norm(normal)
    if nn < NORMAL_EPS:
        raise DegenerateNormalError(f"normal has norm {nn:.3g}")
    n_hat = normal / nn
    return d - 2.0 * (d @ n_hat) * n_hat


def tangential_gradient(field, x):
    """Gradient of an ambient scalar field restricted to the unit sphere at ``x``."""
    x = np.asarray(x, dtype=float)
    grad = field.gradient(x)
    return grad - (x @ grad) * x


def sphere_exp(x, v, t):
    """Point reached from ``x`` after arc length ``t`` along the unit tangent ``v``."""
    return np.cos(t) * np.asarray(x, dtype=float) + np.sin(t) * np.asarray(v, dtype=float)


def geodesic_direction(x, y):
    """Unit tangent at ``x`` of the shortest great-circle arc from ``x`` to ``y``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(x + y) < ANTIPODAL_TOL:
        raise NonUniqueGeodesicError("points are antipodal; the shortest arc is not unique")
    w = y - (x @ y) * x
    nw = np.linalg.norm(w)
    if nw < NORMAL_EPS or np.linalg.norm(x - y) < NORMAL_EPS:
        raise ZeroDistanceError("points coincide; the arc direction is undefined")
    return w / nw


def sphere_distance(x, y):
    return float(unit_angle(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


def tangent_basis(x0):
    """Orthonormal basis of the hyperplane orthogonal to unit ``x0``, as columns.

    Built by Gram-Schmidt over the standard basis, dropping the axis most
    aligned with ``x0``, so the result is deterministic.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.shape[0]
    skip = int(np.argmax(np.abs(x0)))
    cols = [x0]
    for i in range(n):
        if i == skip:
            continue
        e = np.zeros(n)
        e[i] = 1.0
        for c in cols:
            e = e - (c @ e) * c
        cols.append(e / np.linalg.norm(e))
    return np.column_stack(cols[1:])


def gnomonic(x0, basis, u):
    """Central projection chart of the sphere around ``x0``: chart point ``u`` -> unit vector."""
    q = x0 + basis @ np.asarray(u, dtype=float)
    return q / np.linalg.norm(q)


def gnomonic_inverse(x0, basis, x):
    x = np.asarray(x, dtype=float)
    return basis.T @ x / (x0 @ x)


def fd_gradient(func, p, h=1e-6):
    """Central-difference gradient of a scalar function.

    ``func`` is either a callable or an object with a ``value`` method.
    """
    f = func.value if hasattr(func, "value") else func
    p = np.asarray(p, dtype=float)
    if h <= 0:
        raise ValueError("step must be positive")
    grad = np.empty_like(p)
    for i in range(p.shape[0]):
        step = np.zeros_like(p)
        step[i] = h
        grad[i] = (f(p + step) - f(p - step)) / (2.0 * h)
    return grad


def ray_surface_intersect(ray, surface, bracket, gradient=None, max_newton=100, samples=64):
    """First solve ``surface(ray.at(t)) == 0`` for ``t`` inside ``bracket``.

    The bracket is scanned on ``samples`` equal subintervals for the first sign
    change, bisection narrows that to width 1e-6, then Newton polishes the
    root.  The derivative along the ray uses ``gradient`` (a callable
    returning the surface gradient) when given, otherwise a central difference
    in ``t``.

    Returns ``(t, point)``.
    """
    a, b = (float(v) for v in bracket)
    s = lambda t: float(surface(ray.at(t)))  # noqa: E731
    ts = np.linspace(a, b, samples + 1)
    vals = [s(t) for t in ts]
    for k in range(samples):
        if vals[k] == 0.0:
            return ts[k], ray.at(ts[k])
        if np.sign(vals[k]) != np.sign(vals[k + 1]):
            lo, hi, s_lo = ts[k], ts[k + 1], vals[k]
            break
    else:
        if vals[-1] == 0.0:
            return b, ray.at(b)
        raise NoIntersectionError(f"surface does not change sign on [{a}, {b}]")

    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        s_mid = s(mid)
        if s_mid == 0.0:
            return mid, ray.at(mid)
        if np.sign(s_mid) == np.sign(s_lo):
            lo, s_lo = mid, s_mid
        else:
            hi = mid

    def ds(t):
        if gradient is not None:
            return float(np.asarray(gradient(ray.at(t))) @ ray.direction)
        dt = 1e-7 * (1.0 + abs(t))
        return (s(t + dt) - s(t - dt)) / (2.0 * dt)

    t = 0.5 * (lo + hi)
    width = hi - lo
    for _ in range(max_newton):
        val = s(t)
        if abs(val) <= 1e-12 * (1.0 + abs(t)):
            return t, ray.at(t)
        slope = ds(t)
        if slope == 0.0 or not np.isfinite(slope):
            break
        t_new = t - val / slope
        # Newton must stay near the bisected bracket; otherwise give up.
        if abs(t_new - 0.5 * (lo + hi)) > 10.0 * width + 1e-9:
            break
        t = t_new
    raise ConvergenceError(f"Newton did not converge on the bracket [{lo}, {hi}]")
