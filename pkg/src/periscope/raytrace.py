"""Independent ray tracing through synthesized periscopes.

A trace launches the physical ray, reflects it in the first mirror with the
normal built from ``f``, and compares what happens next against the predicted
second impact.  Residuals are unsigned distances (length units) and angles
(radians); a correct synthesis drives all of them to round-off.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import reversed_periscope as rp
from . import spherical_periscope as sp
from .errors import PeriscopeError
from .geometry import Ray, ray_surface_intersect, reflect_direction, unit_angle

RESIDUALS = ("colinearity", "return_to_source", "direction_match", "path_defect")


@dataclass(frozen=True)
class TraceResult:
    P: np.ndarray
    Q: np.ndarray
    out_ray: Ray
    path_length: float
    residuals: dict
    antipodal: bool = False

    @property
    def max_residual(self):
        return max(self.residuals.values())


def spherical_residuals(spec, x, y, e_g, grad_g):
    """Trace the ray from the origin along ``x`` against a predicted second impact.

    ``y``, ``e_g`` and ``grad_g`` describe the second mirror at ``Q = e_g y``.
    Keeping them as arguments lets callers feed in deliberately wrong
    predictions.
    """
    x = np.asarray(x, dtype=float)
    P = sp.mirror_point(spec, x)
    first = reflect_direction(x, sp.mirror_normal(spec, x))
    Q = e_g * np.asarray(y, dtype=float)
    second = reflect_direction(first, y - grad_g)
    out = Ray(Q, second)
    e_f = float(np.linalg.norm(P))
    length = e_f + float(np.linalg.norm(P - Q)) + e_g
    residuals = {
        "colinearity": Ray(P, first).distance_to(Q),
        "return_to_source": out.distance_to(np.zeros_like(x)),
        "direction_match": float(unit_angle(out.direction, -np.asarray(y, dtype=float))),
        "path_defect": abs(length - 2.0 * spec.C),
    }
    return TraceResult(P=P, Q=Q, out_ray=out, path_length=length, residuals=residuals)


def trace_spherical(spec, x):
    syn = sp.synthesize(spec, x)
    res = spherical_residuals(spec, syn.x, syn.y, syn.e_g, syn.grad_g)
    if syn.antipodal:
        return TraceResult(res.P, res.Q, res.out_ray, res.path_length, res.residuals, antipodal=True)
    return res


def reversed_residuals(spec, x, y, g, grad_g, Q=None):
    """Trace the upward vertical ray at ``x`` against a predicted second impact.

    The prediction is the landing point ``y``, the second mirror height ``g``
    and its gradient ``grad_g``.  ``return_to_source`` holds the distance
    between where the outgoing ray crosses height 0 and ``y``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0] + 1
    up = np.zeros(n)
    up[-1] = 1.0
    f = float(spec.f.value(x))
    P = np.append(x, f)
    first = reflect_direction(up, np.append(-spec.f.gradient(x), 1.0))
    if Q is None:
        Q = np.append(y, g)
    second = reflect_direction(first, np.append(-np.asarray(grad_g, dtype=float), 1.0))
    out = Ray(Q, second)
    if abs(out.direction[-1]) > 1e-300:
        landing = Q[:-1] - out.direction[:-1] * Q[-1] / out.direction[-1]
        landing_defect = float(np.linalg.norm(landing - y))
    else:
        landing_defect = float("inf")
    length = f + float(np.linalg.norm(P - Q)) + g
    residuals = {
        "colinearity": Ray(P, first).distance_to(Q),
        "return_to_source": landing_defect,
        "direction_match": float(unit_angle(out.direction, -up)),
        "path_defect": abs(length - 2.0 * spec.C),
    }
    return TraceResult(P=P, Q=Q, out_ray=out, path_length=length, residuals=residuals)


def trace_reversed(spec, x, intersect=False):
    """Trace one vertical ray through a reversed periscope.

    With ``intersect=True`` the second impact is not taken from the closed form
    but found by intersecting the reflected ray with the second mirror surface,
    itself evaluated through the inverse map.
    """
    syn = rp.synthesize(spec, x)
    if not intersect:
        return reversed_residuals(spec, syn.x, syn.y, syn.g_val, syn.grad_g)

    P = np.append(syn.x, syn.f_val)
    up = np.zeros(spec.dim)
    up[-1] = 1.0
    ray = Ray(P, reflect_direction(up, np.append(-syn.grad_f, 1.0)))
    t_pred = float(np.linalg.norm(np.append(syn.y, syn.g_val) - P))

    # the scan samples the mirror around Q; near the box edge their preimages
    # may fall slightly outside, where the mirror continues analytically
    def surface(p):
        return p[-1] - rp.second_height_at(spec, p[:-1], seed=syn.x, slack=0.25)

    t, Q = ray_surface_intersect(ray, surface, (0.98 * t_pred, 1.02 * t_pred))
    x_hit = rp.inverse_map(spec, Q[:-1], seed=syn.x)
    return reversed_residuals(spec, syn.x, Q[:-1], float(Q[-1]), rp.second_gradient(spec, x_hit), Q=Q)


@dataclass
class GridReport:
    """Aggregate of a sweep.  ``rows`` keeps per-point outcomes in sweep order."""

    rows: list = field(default_factory=list)
    max: dict = field(default_factory=dict)
    mean: dict = field(default_factory=dict)
    worst_point: object = None
    errors: int = 0

    @property
    def max_residual(self):
        return max(self.max.values()) if self.max else 0.0


def _trace_one(args):
    spec, point = args
    try:
        if isinstance(spec, sp.SphericalPeriscopeSpec):
            return trace_spherical(spec, point), None
        return trace_reversed(spec, point), None
    except PeriscopeError as exc:
        return None, exc.code


def grid_verify(spec, points, jobs=1):
    """Trace every point of ``points`` (an iterable of ``(index, point)``).

    Errors at a point are stored in its row instead of aborting the sweep.
    The aggregation does not depend on ``jobs``.
    """
    points = list(points)
    tasks = [(spec, p) for _, p in points]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_trace_one, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        outcomes = [_trace_one(t) for t in tasks]

    report = GridReport()
    worst = -1.0
    sums = dict.fromkeys(RESIDUALS, 0.0)
    count = 0
    for (idx, p), (result, err) in zip(points, outcomes):
        report.rows.append((idx, p, result, err))
        if result is None:
            report.errors += 1
            continue
        count += 1
        for k in RESIDUALS:
            v = result.residuals[k]
            sums[k] += v
            report.max[k] = max(report.max.get(k, 0.0), v)
        if result.max_residual > worst:
            worst = result.max_residual
            report.worst_point = p
    if count:
        report.mean = {k: sums[k] / count for k in RESIDUALS}
    return report
