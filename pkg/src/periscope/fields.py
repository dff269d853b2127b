"""Closed-form scalar fields used as mirror shape functions.

All fields accept points of shape ``(..., n)`` and broadcast over the leading
axes.  ``value`` returns shape ``(...)`` and ``gradient`` shape ``(..., n)``.
Setting ``fd_step`` switches ``gradient`` from the analytic formula to central
finite differences with that step.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np


def _points(p):
    return np.asarray(p, dtype=float)


@dataclass(frozen=True)
class ScalarField:
    fd_step: Optional[float] = field(default=None, kw_only=True)

    family = "abstract"

    def value(self, p):
        raise NotImplementedError

    def analytic_gradient(self, p):
        raise NotImplementedError

    def __call__(self, p):
        return self.value(p)

    def gradient(self, p):
        if self.fd_step is None:
            return self.analytic_gradient(p)
        return self.fd_gradient(p, self.fd_step)

    def fd_gradient(self, p, h):
        p = _points(p)
        n = p.shape[-1]
        out = np.empty(p.shape)
        for i in range(n):
            step = np.zeros(n)
            step[i] = h
            out[..., i] = (self.value(p + step) - self.value(p - step)) / (2.0 * h)
        return out

    def with_fd(self, h):
        """Copy of this field whose gradient is computed by finite differences."""
        return replace(self, fd_step=h)

    def params(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(ScalarField):
    c: float = 0.0

    family = "constant"

    def value(self, p):
        p = _points(p)
        return np.full(p.shape[:-1], float(self.c))

    def analytic_gradient(self, p):
        return np.zeros(_points(p).shape)

    def params(self):
        return {"c": self.c}


@dataclass(frozen=True)
class Affine(ScalarField):
    """``a . p + b``."""

    a: tuple = (0.0, 0.0)
    b: float = 0.0

    family = "affine"

    def value(self, p):
        return _points(p) @ np.asarray(self.a, dtype=float) + self.b

    def analytic_gradient(self, p):
        p = _points(p)
        return np.broadcast_to(np.asarray(self.a, dtype=float), p.shape).copy()

    def params(self):
        return {"a": list(self.a), "b": self.b}


@dataclass(frozen=True)
class Quadratic(ScalarField):
    """``p^T A p + b . p + c``."""

    A: tuple = ((0.0, 0.0), (0.0, 0.0))
    b: tuple = (0.0, 0.0)
    c: float = 0.0

    family = "quadratic"

    def value(self, p):
        p = _points(p)
        A = np.asarray(self.A, dtype=float)
        return np.einsum("...i,ij,...j->...", p, A, p) + p @ np.asarray(self.b, dtype=float) + self.c

    def analytic_gradient(self, p):
        p = _points(p)
        A = np.asarray(self.A, dtype=float)
        return p @ (A + A.T).T + np.asarray(self.b, dtype=float)

    def params(self):
        return {"A": [list(r) for r in self.A], "b": list(self.b), "c": self.c}


@dataclass(frozen=True)
class GaussianBump(ScalarField):
    """``offset + amplitude * exp(-|p - center|^2 / (2 width^2))``."""

    amplitude: float = 1.0
    center: tuple = (0.0, 0.0)
    width: float = 1.0
    offset: float = 0.0

    family = "gaussian-bump"

    def _parts(self, p):
        d = _points(p) - np.asarray(self.center, dtype=float)
        e = self.amplitude * np.exp(-np.sum(d * d, axis=-1) / (2.0 * self.width**2))
        return d, e

    def value(self, p):
        _, e = self._parts(p)
        return self.offset + e

    def analytic_gradient(self, p):
        d, e = self._parts(p)
        return -(e / self.width**2)[..., None] * d

    def params(self):
        return {
            "amplitude": self.amplitude,
            "center": list(self.center),
            "width": self.width,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class SumOfBumps(ScalarField):
    bumps: tuple = ()
    offset: float = 0.0

    family = "sum-of-bumps"

    def value(self, p):
        p = _points(p)
        out = np.full(p.shape[:-1], float(self.offset))
        for b in self.bumps:
            out = out + b.value(p)
        return out

    def analytic_gradient(self, p):
        p = _points(p)
        out = np.zeros(p.shape)
        for b in self.bumps:
            out = out + b.analytic_gradient(p)
        return out

    def params(self):
        return {"bumps": [b.params() for b in self.bumps], "offset": self.offset}


FAMILIES = {
    "constant": Constant,
    "affine": Affine,
    "quadratic": Quadratic,
    "gaussian-bump": GaussianBump,
    "sum-of-bumps": SumOfBumps,
}


def _tuplify(v):
    if isinstance(v, (list, tuple)):
        return tuple(_tuplify(x) for x in v)
    return float(v)


def make_field(family, params, fd_step=None):
    """Build a field from a family name and a parameter mapping."""
    if family not in FAMILIES:
        raise ValueError(f"unknown field family {family!r}; expected one of {sorted(FAMILIES)}")
    params = dict(params)
    if family == "sum-of-bumps":
        bumps = tuple(
            GaussianBump(**{k: _tuplify(v) for k, v in b.items()}) for b in params.pop("bumps", [])
        )
        return SumOfBumps(bumps=bumps, fd_step=fd_step, **{k: _tuplify(v) for k, v in params.items()})
    return FAMILIES[family](fd_step=fd_step, **{k: _tuplify(v) for k, v in params.items()})
