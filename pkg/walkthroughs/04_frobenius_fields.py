"""When is a direction field orthogonal to a family of surfaces?

The 1-form dual to V must satisfy alpha ^ d alpha = 0.  On an orthonormal
frame in R^3 that number is V . curl V.
"""
import itertools

import numpy as np

from periscope import spherical_periscope as sp
from periscope.fields import GaussianBump, SumOfBumps
from periscope.frobenius import frobenius_defect, frobenius_report, periscope_field_pullback

grid = [np.array(p) for p in itertools.product(np.linspace(-0.5, 0.5, 3), repeat=3)]


def grad_F(p):
    x, y, z = p
    return np.array([np.cos(x) * np.exp(y) + z * z, np.sin(x) * np.exp(y) - z * np.sin(y * z), 2 * x * z - y * np.sin(y * z)])


# Gradients (and their rescalings) are integrable.
for h in (1e-4, 5e-5):
    print(f"h={h:g}  gradient {max(abs(frobenius_defect(grad_F, p, h)) for p in grid):.2e}")

# The contact field y d/dx + d/dz is as far from integrable as it gets.
contact = lambda p: np.array([p[1], 0.0, 1.0])  # noqa: E731
print(frobenius_report(contact, np.zeros(3)))

# Fronts of dimension 3 live on S^3.  Pull the periscope field back to a flat
# chart and check it is integrable, unlike a perturbed copy.
f = SumOfBumps(
    bumps=(
        GaussianBump(amplitude=0.3, center=(0.3, 0.1, 0.0, 1.0), width=0.25),
        GaussianBump(amplitude=-0.2, center=(-0.1, 0.35, 0.2, 1.0), width=0.2),
    ),
    offset=0.2,
)
spec = sp.SphericalPeriscopeSpec(f, 2.5, (0.0, 0.0, 0.0, 1.0), 0.3)
V = periscope_field_pullback(spec)
s = spec.chart_half_width - 2e-4
chart = [np.array(u) for u in itertools.product(np.linspace(-s, s, 5), repeat=3)]
print("S^3 periscope field:", max(abs(frobenius_defect(V, u)) for u in chart))
print("same, perturbed:    ", max(abs(frobenius_defect(lambda u: V(u) + [0, 0, 0.3], u)) for u in chart))
