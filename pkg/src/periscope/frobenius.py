"""Numerical integrability test for vector fields on 3-dimensional charts.

A field ``V`` is proportional to a gradient exactly when its Euclidean dual
1-form ``a = V . dp`` satisfies ``a ^ da = 0``.  On the standard frame of
R^3 that 3-form is the scalar ``V . curl V``, evaluated here with central
differences.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import reversed_periscope as rp
from . import spherical_periscope as sp
from .errors import DimensionError, FieldEvaluationError


@dataclass(frozen=True)
class VectorField3:
    eval: Callable
    provenance: str = "analytic"

    def __call__(self, p):
        return self.eval(p)


@dataclass(frozen=True)
class FrobeniusReport:
    point: np.ndarray
    defect: float
    scale_invariant_defect: float


def _evaluate(V, p):
    v = np.asarray(V(p), dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise FieldEvaluationError(f"field value {v} at {p} is not a finite 3-vector")
    return v


def dual_one_form(V, p, v):
    """The 1-form dual to ``V`` at ``p`` applied to the tangent vector ``v``."""
    return float(_evaluate(V, np.asarray(p, dtype=float)) @ np.asarray(v, dtype=float))


def exterior_derivative(V, p, h=1e-4):
    """Antisymmetric matrix ``D[i, j] = d_i V_j - d_j V_i`` by central differences."""
    p = np.asarray(p, dtype=float)
    jac = np.empty((3, 3))
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        jac[i] = (_evaluate(V, p + e) - _evaluate(V, p - e)) / (2.0 * h)
    return jac - jac.T


def _defect(v, D):
    return v[0] * D[1, 2] + v[1] * D[2, 0] + v[2] * D[0, 1]


def frobenius_defect(V, p, h=1e-4):
    """Value of ``a ^ da`` on ``(e1, e2, e3)`` at ``p``."""
    if h <= 0:
        raise ValueError("step must be positive")
    p = np.asarray(p, dtype=float)
    return float(_defect(_evaluate(V, p), exterior_derivative(V, p, h)))


def frobenius_report(V, p, h=1e-4):
    p = np.asarray(p, dtype=float)
    v = _evaluate(V, p)
    D = exterior_derivative(V, p, h)
    defect = float(_defect(v, D))
    scale = np.linalg.norm(v) * np.max(np.abs(D)) + 1e-300
    return FrobeniusReport(point=p, defect=defect, scale_invariant_defect=defect / scale)


def periscope_field_pullback(spec):
    """Chart representation of the spherical periscope's direction field on S^3.

    The chart is the central projection around the patch center.  The returned
    field holds the components of the dual 1-form pulled back by the chart,
    ``V_T . d(chart)/du_i``, so its Euclidean dual is that pullback and the
    Frobenius defect measures integrability of the round-metric distribution
    orthogonal to the field.
    """
    if spec.dim != 4:
        raise DimensionError(f"the pullback needs a periscope in R^4, got dimension {spec.dim}")
    x0, E = spec.x0, spec.basis

    def field(u):
        q = x0 + E @ np.asarray(u, dtype=float)
        r = np.linalg.norm(q)
        v = sp.map_field(spec, q / r)
        # the chart differential is (I - x x^T) E / r, and v is orthogonal to x
        return E.T @ v / r

    return VectorField3(field, provenance="periscope-pullback")


def displacement_field(spec):
    """The displacement ``U`` of a reversed periscope in R^4 as a field on its chart."""
    if spec.dim != 4:
        raise DimensionError(f"expected a periscope in R^4, got dimension {spec.dim}")
    return VectorField3(lambda x: rp.displacement(spec, x), provenance="periscope-pullback")


def sweep(V, points, h=1e-4):
    """Frobenius reports over ``points`` in order."""
    return [frobenius_report(V, p, h) for p in points]


def observed_order(errors_h, errors_half):
    """Convergence order from error maxima at step ``h`` and ``h/2``."""
    return float(np.log2(errors_h / errors_half))
