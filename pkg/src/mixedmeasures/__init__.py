"""Weighted Brunn-Minkowski quantities for convex bodies.

Computes weighted surface area measures, mixed measures mu(K;L), second
mixed measures mu(A;B,C), and verifies the associated inequalities by
slack computations cross-validated against finite-difference oracles.
"""

from .bodies import (
    Ball,
    ConvexBody,
    Polytope,
    Scale,
    Segment,
    Smooth2D,
    Sum,
    Zonotope,
    boundary_polygon_2d,
    curvature_2d,
    negate,
    random_body,
    support,
    support_gradient,
)
from .measures import (
    ConcavityProfile,
    Estimate,
    WeightedMeasure,
    gaussian,
    gaussian_cdf,
    gaussian_quantile,
    lebesgue,
    measure_of_body,
    power_law,
    profile_factory,
    radial_profile_integral,
)
from .quadrature import SphereGrid, build_grid, integrate, sphere_surface_area, unit_ball_volume

__all__ = [
    "Ball",
    "ConvexBody",
    "Polytope",
    "Scale",
    "Segment",
    "Smooth2D",
    "Sum",
    "Zonotope",
    "boundary_polygon_2d",
    "curvature_2d",
    "negate",
    "random_body",
    "support",
    "support_gradient",
    "ConcavityProfile",
    "Estimate",
    "WeightedMeasure",
    "gaussian",
    "gaussian_cdf",
    "gaussian_quantile",
    "lebesgue",
    "measure_of_body",
    "power_law",
    "profile_factory",
    "radial_profile_integral",
    "SphereGrid",
    "build_grid",
    "integrate",
    "sphere_surface_area",
    "unit_ball_volume",
]

__version__ = "0.1.0"
