"""Two mirrors that turn every upward vertical ray into a downward vertical ray.

Both mirrors are graphs over the horizontal hyperplane (the last coordinate is
"up").  The first mirror is ``z = f(x)``; with optical path constant ``2C`` the
second mirror height ``g`` at ``T(x)`` and the map ``T`` itself are explicit in
``f``, ``grad f`` and ``C``.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import (
    DomainError,
    InverseMapError,
    PathBudgetError,
    SlopeBoundError,
    VerticalDegenerateError,
)
from .fields import ScalarField

VERTICAL_EPS = 1e-9


@dataclass(frozen=True)
class ReversedPeriscopeSpec:
    """First mirror height ``f`` over the box ``[lower, upper]`` and path constant ``C``."""

    f: ScalarField
    C: float
    lower: tuple
    upper: tuple
    validation_grid: int = 33
    margin: float = 1e-9

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper) or len(lower) < 1:
            raise ValueError("lower and upper must have the same positive length")
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise ValueError("domain box has lower > upper")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if not self.C > 0:
            raise PathBudgetError(f"C = {self.C} must be positive", invariant="positive-C")
        if self.validation_grid > 0:
            self.validate(self.validation_grid)

    @property
    def dim(self):
        """Ambient dimension n; the chart has n - 1 coordinates."""
        return len(self.lower) + 1

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        span = np.asarray(self.upper) - np.asarray(self.lower)
        slack = tol * (1.0 + span)
        return bool(np.all(x >= np.asarray(self.lower) - slack) and np.all(x <= np.asarray(self.upper) + slack))

    def grid(self, counts):
        if np.isscalar(counts):
            counts = [int(counts)] * len(self.lower)
        axes = [
            np.linspace(lo, hi, c) if c > 1 else np.array([0.5 * (lo + hi)])
            for lo, hi, c in zip(self.lower, self.upper, counts)
        ]
        return [
            (idx, np.array([a[i] for a, i in zip(axes, idx)]))
            for idx in product(*(range(len(a)) for a in axes))
        ]

    def validate(self, count):
        pts = np.array([x for _, x in self.grid(count)])
        f = self.f.value(pts)
        slope = np.linalg.norm(self.f.gradient(pts), axis=-1)
        if np.any(slope <= self.margin):
            raise VerticalDegenerateError(
                f"|grad f| drops to {slope.min():.3g}; a level mirror sends the ray straight back"
            )
        if np.any(slope >= 1.0 - self.margin):
            raise SlopeBoundError(f"|grad f| reaches {slope.max():.6g}; it must stay below 1")
        if np.any(self.C - f <= self.margin):
            raise PathBudgetError(f"f reaches {f.max():.6g} >= C = {self.C}")

    @cached_property
    def _seed_table(self):
        pts = np.array([x for _, x in self.grid(9)])
        images = np.array([_raw_map(self, x) for x in pts])
        return pts, images


@dataclass(frozen=True)
class ReversedSynthesis:
    x: np.ndarray
    y: np.ndarray
    f_val: float
    g_val: float
    grad_f: np.ndarray
    grad_g: np.ndarray
    U: np.ndarray
    alpha: float
    path_length: float


def _checked(spec, x, check_domain=True):
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim - 1,):
        raise DomainError(f"expected a chart point with {spec.dim - 1} coordinates")
    if check_domain and not spec.contains(x):
        raise DomainError(f"{x} lies outside the domain box")
    f = float(spec.f.value(x))
    grad = spec.f.gradient(x)
    s2 = float(grad @ grad)
    s = np.sqrt(s2)
    if s < VERTICAL_EPS:
        raise VerticalDegenerateError(f"|grad f| = {s:.3g} at {x}")
    if s >= 1.0:
        raise SlopeBoundError(f"|grad f| = {s:.6g} >= 1 at {x}")
    if spec.C - f <= VERTICAL_EPS:
        raise PathBudgetError(f"C - f = {spec.C - f:.3g} at {x}")
    return x, f, grad, s2


def _raw_map(spec, x):
    x, f, grad, s2 = _checked(spec, x, check_domain=False)
    return x + 2.0 * (spec.C - f) / s2 * grad


def second_height(spec, x):
    """Height ``g`` of the second mirror above ``T(x)``."""
    _, f, _, s2 = _checked(spec, x)
    return (f - spec.C * (1.0 - s2)) / s2


def displacement(spec, x):
    """``U(x) = T(x) - x``, a positive multiple of ``grad f(x)``."""
    _, f, grad, s2 = _checked(spec, x)
    return 2.0 * (spec.C - f) / s2 * grad


def periscope_map(spec, x):
    x = np.asarray(x, dtype=float)
    return x + displacement(spec, x)


def second_gradient(spec, x):
    """``grad g`` at ``T(x)``.

    Its length is ``1/|grad f|`` and it points against ``grad f``: the second
    mirror slopes down toward the first one.
    """
    _, _, grad, s2 = _checked(spec, x)
    return -grad / s2


def synthesize(spec, x):
    x, f, grad, s2 = _checked(spec, x)
    C = spec.C
    g = (f - C * (1.0 - s2)) / s2
    U = 2.0 * (C - f) / s2 * grad
    P = np.append(x, f)
    Q = np.append(x + U, g)
    return ReversedSynthesis(
        x=x,
        y=x + U,
        f_val=f,
        g_val=g,
        grad_f=grad,
        grad_g=-grad / s2,
        U=U,
        alpha=float(np.arctan(np.sqrt(s2))),
        path_length=float(f + np.linalg.norm(P - Q) + g),
    )


def inverse_map(spec, y, seed=None, max_iter=60, slack=1e-4):
    """Solve ``T(x) = y`` by Newton iteration with a finite-difference Jacobian.

    Without a ``seed`` the iteration starts from the best point of a coarse
    grid over the domain.  The preimage may overshoot the box by ``slack``
    (relative to the box size) so that difference stencils work at the edge.
    """
    y = np.asarray(y, dtype=float)
    pts, images = spec._seed_table
    lo, hi = images.min(axis=0), images.max(axis=0)
    pad = 0.5 * (hi - lo) + 1e-6 * (1.0 + np.abs(hi) + np.abs(lo))
    if np.any(y < lo - pad) or np.any(y > hi + pad):
        raise DomainError(f"{y} is far outside the image of the domain")
    if seed is None:
        seed = pts[np.argmin(np.linalg.norm(images - y, axis=1))]
    x = np.array(seed, dtype=float)
    m = x.shape[0]
    polish = False
    try:
        for _ in range(max_iter):
            r = _raw_map(spec, x) - y
            h = 1e-6 * (1.0 + np.linalg.norm(x))
            J = np.empty((m, m))
            for i in range(m):
                e = np.zeros(m)
                e[i] = h
                J[:, i] = (_raw_map(spec, x + e) - _raw_map(spec, x - e)) / (2.0 * h)
            step = np.linalg.solve(J, r)
            x = x - step
            if polish:
                break
            # one extra step after convergence polishes to round-off
            polish = np.linalg.norm(step) < 1e-12 * (1.0 + np.linalg.norm(x))
    except (np.linalg.LinAlgError, VerticalDegenerateError, SlopeBoundError, PathBudgetError) as exc:
        raise InverseMapError(f"inverse map failed near {x}: {exc}") from exc
    if not spec.contains(x, tol=slack):
        raise DomainError(f"preimage {x} lies outside the domain box")
    if np.linalg.norm(_raw_map(spec, x) - y) >= 1e-10:
        raise InverseMapError(f"Newton iteration for the inverse map did not converge at {y}")
    return x


def second_height_at(spec, y, seed=None, slack=1e-4):
    """Second mirror height as a function of the landing point ``y``.

    ``slack`` is passed to ``inverse_map``; a larger value lets callers probe
    the analytic continuation of the mirror just past the domain edge.
    """
    x = inverse_map(spec, y, seed=seed, slack=slack)
    _, f, _, s2 = _checked(spec, x, check_domain=False)
    return (f - spec.C * (1.0 - s2)) / s2
