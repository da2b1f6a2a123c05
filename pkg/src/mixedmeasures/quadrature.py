"""Quadrature rules on the unit sphere S^{n-1}.

Every surface-measure and mixed-measure integral in the package routes
through a :class:`SphereGrid`.  Three rule families are provided:

* ``Trapezoid2D`` -- equally spaced angles on the circle.  Spectrally
  accurate for smooth periodic integrands; exact for trigonometric
  polynomials of degree < M/2.
* ``ProductGauss3D`` -- composite Gauss-Legendre in the polar variable
  t = cos(phi) (two panels split at the equator, so integrands with an
  equatorial kink such as ``|u_3|`` stay spectrally accurate) times a
  trapezoid rule in azimuth.
* ``QuasiRandomND`` -- seeded Sobol points mapped to the sphere with
  equal weights, for n >= 4 where only rotationally invariant integrands
  are ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special as sp_special
from scipy.stats import qmc

__all__ = [
    "SphereGrid",
    "build_grid",
    "integrate",
    "integrate_refined",
    "unit_ball_volume",
    "sphere_surface_area",
    "default_resolution",
]

_DEFAULT_RESOLUTION = {1: 4, 2: 2048, 3: 64}
_DEFAULT_RESOLUTION_HIGH_DIM = 200_000

TRAPEZOID_2D = "Trapezoid2D"
PRODUCT_GAUSS_3D = "ProductGauss3D"
QUASI_RANDOM_ND = "QuasiRandomND"


def unit_ball_volume(n: int) -> float:
    """Volume kappa_n of the unit Euclidean ball in R^n."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def sphere_surface_area(n: int) -> float:
    """Surface area of S^{n-1}, equal to n * kappa_n."""
    return n * unit_ball_volume(n)


def default_resolution(dim: int) -> int:
    return _DEFAULT_RESOLUTION.get(dim, _DEFAULT_RESOLUTION_HIGH_DIM)


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature nodes and weights on S^{n-1}.

    Invariants: every node has unit norm, all weights are positive, and
    the weights sum to the sphere surface area n*kappa_n (exactly for the
    deterministic rules, by construction for the quasi-random one).
    """

    dim: int
    nodes: np.ndarray  # (M, dim), unit rows
    weights: np.ndarray  # (M,), positive
    kind: str
    # 2D only: the node angles, kept so density integrands can be
    # evaluated without re-deriving theta from the nodes.
    angles: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.ascontiguousarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.ascontiguousarray(self.weights, dtype=float))

    @property
    def size(self) -> int:
        return self.nodes.shape[0]


def _trapezoid_circle(m: int) -> SphereGrid:
    theta = 2.0 * math.pi * np.arange(m) / m
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    weights = np.full(m, 2.0 * math.pi / m)
    return SphereGrid(2, nodes, weights, TRAPEZOID_2D, angles=theta)


def _product_gauss_sphere(levels: int) -> SphereGrid:
    # Two Gauss-Legendre panels in t = cos(phi), split at the equator.
    half = max(2, levels // 2)
    x, w = leggauss(half)
    t = np.concatenate([0.5 * (x - 1.0), 0.5 * (x + 1.0)])  # [-1,0] and [0,1]
    wt = np.concatenate([0.5 * w, 0.5 * w])
    m_azi = 2 * levels
    psi = 2.0 * math.pi * np.arange(m_azi) / m_azi
    w_azi = 2.0 * math.pi / m_azi
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    nodes = np.empty((t.size * m_azi, 3))
    weights = np.empty(t.size * m_azi)
    cos_psi, sin_psi = np.cos(psi), np.sin(psi)
    for i in range(t.size):
        sl = slice(i * m_azi, (i + 1) * m_azi)
        nodes[sl, 0] = s[i] * cos_psi
        nodes[sl, 1] = s[i] * sin_psi
        nodes[sl, 2] = t[i]
        weights[sl] = wt[i] * w_azi
    return SphereGrid(3, nodes, weights, PRODUCT_GAUSS_3D)


def _quasi_random_sphere(dim: int, resolution: int, seed: int) -> SphereGrid:
    if dim == 1:
        # S^0 = {-1, +1}; the two-point rule is exact.
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
        return SphereGrid(1, nodes, weights, QUASI_RANDOM_ND)
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    u = sampler.random(resolution)
    # Inverse-Gaussian map, then normalize rows onto the sphere.
    z = sp_special.ndtri(np.clip(u, 1e-15, 1.0 - 1e-15))
    norms = np.linalg.norm(z, axis=1)
    norms[norms == 0.0] = 1.0
    nodes = z / norms[:, None]
    weights = np.full(resolution, sphere_surface_area(dim) / resolution)
    return SphereGrid(dim, nodes, weights, QUASI_RANDOM_ND)


def build_grid(dim: int, resolution: int | None = None, seed: int = 0) -> SphereGrid:
    """Build a quadrature grid on S^{dim-1}.

    dim = 2 gives the trapezoid rule with ``resolution`` nodes; dim = 3
    the product Gauss-Legendre x trapezoid rule with ``resolution`` polar
    levels and 2*resolution azimuthal nodes; dim >= 4 seeded quasi-random
    equal-weight nodes.  The seed only affects the quasi-random branch.
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if resolution is None:
        resolution = default_resolution(dim)
    if resolution < 4:
        raise ValueError("resolution must be >= 4")
    if dim == 1:
        return _quasi_random_sphere(1, resolution, seed)
    if dim == 2:
        return _trapezoid_circle(resolution)
    if dim == 3:
        return _product_gauss_sphere(resolution)
    return _quasi_random_sphere(dim, resolution, seed)


def _evaluate(f, nodes: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(nodes), dtype=float)
        if vals.shape == (nodes.shape[0],):
            return vals
    except Exception:
        pass
    return np.array([float(f(u)) for u in nodes])


def integrate(grid: SphereGrid, f) -> float:
    """Integrate a scalar function over the sphere: sum_j w_j f(u_j).

    ``f`` may be vectorized (taking an (M, n) array of unit vectors) or
    scalar.  Non-finite values raise rather than propagating into a NaN
    result.
    """
    vals = _evaluate(f, grid.nodes)
    if not np.all(np.isfinite(vals)):
        bad = int(np.argmax(~np.isfinite(vals)))
        raise ValueError(f"integrand is not finite at node {bad}: {grid.nodes[bad]}")
    return float(np.dot(grid.weights, vals))


def integrate_refined(dim: int, f, resolution: int | None = None, seed: int = 0):
    """Integrate with a doubled-resolution error estimate.

    Returns ``(value, error)`` where ``value`` is computed on the grid of
    twice the requested resolution and ``error`` is the absolute change
    from the coarse grid (a conservative bound for smooth integrands).
    """
    if resolution is None:
        resolution = default_resolution(dim)
    coarse = integrate(build_grid(dim, resolution, seed), f)
    fine = integrate(build_grid(dim, 2 * resolution, seed), f)
    return fine, abs(fine - coarse) + 1e-15 * abs(fine)
