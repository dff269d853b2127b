"""Trace the synthesized mirrors and look at the four residuals."""
import time

import numpy as np

from periscope import reversed_periscope as rp
from periscope import spherical_periscope as sp
from periscope.fields import Affine, GaussianBump
from periscope.raytrace import RESIDUALS, grid_verify, spherical_residuals, trace_reversed

bump = GaussianBump(amplitude=0.3, center=(0.2, 0.1, 1.0), width=0.5)
spec = sp.SphericalPeriscopeSpec(bump, 2.0, (0.0, 0.0, 1.0), 0.4)

t = time.perf_counter()
report = grid_verify(spec, spec.grid(21))
print(f"21x21 rays in {time.perf_counter() - t:.3f}s")
for name in RESIDUALS:
    print(f"  {name:<17} max {report.max[name]:.2e}  mean {report.mean[name]:.2e}")

# A second mirror built for the wrong C is caught by the path length.
wrong = sp.SphericalPeriscopeSpec(bump, 2.001, spec.center, spec.radius)
x = spec.grid(5)[7][1]
s = sp.synthesize(wrong, x)
print("path_defect with C off by 1e-3:", spherical_residuals(spec, x, s.y, s.e_g, s.grad_g).residuals["path_defect"])

# Reversed case, with an honest ray/surface intersection for the second bounce.
spec = rp.ReversedPeriscopeSpec(Affine(a=(0.5, 0.0), b=1.0), 3.0, (-1.0, -1.0), (1.0, 1.0))
res = trace_reversed(spec, np.array([0.3, -0.4]), intersect=True)
print("reversed:", {k: f"{v:.1e}" for k, v in res.residuals.items()})
