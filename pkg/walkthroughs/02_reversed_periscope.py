"""Vertical rays in, vertical rays out the other way.

The first mirror is the graph z = f(x) with |grad f| < 1.  Rays go up, bounce
twice and leave straight down; the second mirror z = g(y) is explicit.
"""
import numpy as np

from periscope import reversed_periscope as rp
from periscope.fields import Affine, GaussianBump

spec = rp.ReversedPeriscopeSpec(Affine(a=(0.5, 0.0), b=1.0), 3.0, (-1.0, -1.0), (1.0, 1.0))
syn = rp.synthesize(spec, np.zeros(2))
print("g       ", syn.g_val)           # -5
print("U       ", syn.U)               # (8, 0)
print("path    ", syn.path_length)     # 6 = 2C
print("|grad g|", np.linalg.norm(syn.grad_g), "= 1/|grad f|")

# On a curved mirror the slopes are still reciprocal.  Check it by
# differencing g on the second mirror's own coordinates.
f = GaussianBump(amplitude=0.5, center=(0.0, 0.0), width=1.0, offset=1.0)
spec = rp.ReversedPeriscopeSpec(f, 3.0, (1.2, -0.3), (2.0, 0.3))
for x in ([1.3, 0.0], [1.6, 0.1], [1.9, -0.2]):
    x = np.array(x)
    y = rp.periscope_map(spec, x)
    h = 1e-5
    grad = [
        (rp.second_height_at(spec, y + h * e, seed=x) - rp.second_height_at(spec, y - h * e, seed=x)) / (2 * h)
        for e in np.eye(2)
    ]
    print(x, "->", np.round(y, 4), " |grad f||grad g| =", np.linalg.norm(f.gradient(x)) * np.linalg.norm(grad))
