"""Two-mirror periscopes: closed-form synthesis and independent verification."""

from . import frobenius, geometry, raytrace, reversed_periscope, spherical_periscope
from .errors import PeriscopeError
from .fields import Affine, Constant, GaussianBump, Quadratic, ScalarField, SumOfBumps, make_field
from .geometry import Ray
from .reversed_periscope import ReversedPeriscopeSpec
from .spherical_periscope import SphericalPeriscopeSpec

__all__ = [
    "Affine",
    "Constant",
    "GaussianBump",
    "PeriscopeError",
    "Quadratic",
    "Ray",
    "ReversedPeriscopeSpec",
    "ScalarField",
    "SphericalPeriscopeSpec",
    "SumOfBumps",
    "frobenius",
    "geometry",
    "make_field",
    "raytrace",
    "reversed_periscope",
    "spherical_periscope",
]
