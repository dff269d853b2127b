"""Two mirrors that send every ray from the origin back to the origin.

Pick a first mirror r = exp(f) over a cap of the unit sphere and a path
constant C.  The second mirror and the direction map T follow in closed form.
"""
import numpy as np

from periscope import spherical_periscope as sp
from periscope.fields import Affine, GaussianBump

# A clean point first: e^f = 1, |grad f| = 1/2, C = 2.
spec = sp.SphericalPeriscopeSpec(Affine(a=(0.0, 0.5, 0.0)), 2.0, (1.0, 0.0, 0.0), 0.3)
x = np.array([1.0, 0.0, 0.0])
syn = sp.synthesize(spec, x)
print("e^g       ", syn.e_g, "(4/3)")
print("|grad g|  ", np.linalg.norm(syn.grad_g), "(1/3)")
print("d(x, Tx)  ", syn.d, "(pi/2)")
print("T(x)      ", syn.y)

# Both mirrors share the ratio e|grad|/(1+|grad|^2).
print("S on mirror 1:", sp.shared_ratio(syn.e_f, 0.5))
print("S on mirror 2:", sp.shared_ratio(syn.e_g, 1 / 3))

# Now a bump over the north cap.
bump = GaussianBump(amplitude=0.3, center=(0.2, 0.1, 1.0), width=0.5)
spec = sp.SphericalPeriscopeSpec(bump, 2.0, (0.0, 0.0, 1.0), 0.4)
pts = spec.grid(5)
e_g = np.array([sp.synthesize(spec, p).e_g for _, p in pts]).reshape(5, 5)
np.set_printoptions(precision=4, suppress=True)
print("second mirror radius over a 5x5 chart grid:")
print(e_g)

# The inverse recovers exp(g) at a point of the image.
y = sp.periscope_map(spec, pts[12][1])
print("exp(g) at T(x):", sp.second_radius_at(spec, y), "vs", e_g[2, 2])
