"""Surface area measures on the sphere.

Builds S_K (classical), S_{mu,K} (weighted: the pushforward of the
density-weighted boundary measure by the Gauss map), the signed weighted
mixed surface area measure S^mu_{A;B} in the plane, and the Gaussian
half-space example.

A :class:`SphereMeasure` is a finite atom list plus an optional density
sampled on a :class:`SphereGrid`.  Polytopes contribute atoms at facet
normals; 2D smooth bodies contribute the density f = h'' + h; planar sum
trees mix both (surface measures are Minkowski-additive in the plane).
For n >= 3 only single polytope leaves are supported -- every smooth
higher-dimensional case in this package routes through the closed-form
ball formulas in :mod:`mixedmeasures.mixed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull

from .bodies import (
    ConvexBody,
    Polytope,
    Scale,
    Segment,
    Sum,
    Zonotope,
    boundary_polygon_2d,
    fourier_coefficients,
    split_smooth_polytopal,
)
from .measures import WeightedMeasure, _gl_nodes
from .quadrature import SphereGrid, build_grid, default_resolution

__all__ = [
    "SphereMeasure",
    "surface_area_measure",
    "weighted_surface_area_measure",
    "weighted_surface_area",
    "weighted_mixed_surface_measure_2d",
    "halfspace_gaussian_surface",
    "polygon_edges",
    "polytopal_normal_angles",
    "zonotope_to_polytope",
]

_TWO_PI = 2.0 * math.pi


@dataclass
class SphereMeasure:
    """A possibly signed measure on S^{n-1}: atoms plus a sampled density."""

    dim: int
    atom_dirs: np.ndarray  # (k, n)
    atom_masses: np.ndarray  # (k,)
    grid: SphereGrid | None = None
    density: np.ndarray | None = None
    signed: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.atom_dirs = np.asarray(self.atom_dirs, dtype=float).reshape(-1, self.dim)
        self.atom_masses = np.asarray(self.atom_masses, dtype=float).reshape(-1)
        if self.density is not None:
            self.density = np.asarray(self.density, dtype=float)

    def total(self) -> float:
        t = float(self.atom_masses.sum())
        if self.density is not None:
            t += float(np.dot(self.grid.weights, self.density))
        return t

    def integrate(self, f) -> float:
        """int f dS, with f vectorized over unit vectors."""
        total = 0.0
        if len(self.atom_masses):
            vals = np.asarray(f(self.atom_dirs), dtype=float)
            total += float(np.dot(self.atom_masses, vals))
        if self.density is not None:
            vals = np.asarray(f(self.grid.nodes), dtype=float)
            total += float(np.dot(self.grid.weights * self.density, vals))
        return total

    def mean_direction_moment(self) -> np.ndarray:
        """int u dS(u); zero for the surface measure of any convex body."""
        m = np.zeros(self.dim)
        if len(self.atom_masses):
            m += self.atom_masses @ self.atom_dirs
        if self.density is not None:
            m += (self.grid.weights * self.density) @ self.grid.nodes
        return m

    def scaled(self, c: float) -> "SphereMeasure":
        return SphereMeasure(
            self.dim,
            self.atom_dirs.copy(),
            c * self.atom_masses,
            self.grid,
            None if self.density is None else c * self.density,
            signed=self.signed or c < 0,
        )

    def __add__(self, other: "SphereMeasure") -> "SphereMeasure":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        dirs = np.vstack([self.atom_dirs, other.atom_dirs])
        masses = np.concatenate([self.atom_masses, other.atom_masses])
        dirs, masses = merge_atoms(dirs, masses)
        grid = self.grid or other.grid
        density = None
        if self.density is not None or other.density is not None:
            if (
                self.density is not None
                and other.density is not None
                and self.grid.size != other.grid.size
            ):
                raise ValueError("cannot add densities sampled on different grids")
            density = np.zeros(grid.size)
            if self.density is not None:
                density += self.density
            if other.density is not None:
                density += other.density
        return SphereMeasure(self.dim, dirs, masses, grid, density, self.signed or other.signed)

    def to_csv_rows(self):
        rows = []
        for u, m in zip(self.atom_dirs, self.atom_masses):
            rows.append(tuple(u) + (m, "atom"))
        if self.density is not None:
            for u, v in zip(self.grid.nodes, self.density):
                rows.append(tuple(u) + (v, "density"))
        return rows


def merge_atoms(dirs: np.ndarray, masses: np.ndarray, tol: float = 1e-12):
    """Combine atoms whose directions coincide up to ``tol``."""
    if len(masses) == 0:
        return dirs.reshape(0, dirs.shape[1] if dirs.ndim == 2 else 1), masses
    order = np.lexsort(dirs.T[::-1])
    dirs, masses = dirs[order], masses[order].copy()
    keep = [0]
    for i in range(1, len(masses)):
        if np.linalg.norm(dirs[i] - dirs[keep[-1]]) <= tol:
            masses[keep[-1]] += masses[i]
        else:
            keep.append(i)
    return dirs[keep], masses[keep]


# -- polygon edge utilities ---------------------------------------------------


def polygon_edges(polygon: np.ndarray):
    """Directed edges of a CCW polygon: (start, end, outward normal, length).

    A two-vertex polygon (a segment) yields its two antiparallel sides.
    """
    poly = np.atleast_2d(np.asarray(polygon, dtype=float))
    edges = []
    if len(poly) < 2:
        return edges
    idx = range(len(poly)) if len(poly) > 2 else [0, 1]
    for i in idx:
        a = poly[i]
        b = poly[(i + 1) % len(poly)]
        e = b - a
        length = float(np.linalg.norm(e))
        if length <= 1e-15:
            continue
        normal = np.array([e[1], -e[0]]) / length
        edges.append((a, b, normal, length))
    return edges


def _smooth_subtree(terms):
    if not terms:
        return None
    parts = [Scale(c, leaf) if c != 1.0 else leaf for c, leaf in terms]
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def _poly_subtree(terms):
    return _smooth_subtree(terms)


def _decompose_2d(body: ConvexBody):
    """(smooth subtree or None, merged polygon of the polytopal part or None)."""
    smooth, poly = split_smooth_polytopal(body)
    smooth_tree = _smooth_subtree(smooth)
    polygon = boundary_polygon_2d(_poly_subtree(poly)) if poly else None
    return smooth_tree, polygon


def polytopal_normal_angles(body: ConvexBody) -> np.ndarray:
    """Angles of the polytopal-part edge normals of a planar tree (the
    angular locations where h or grad h loses smoothness)."""
    _, polygon = _decompose_2d(body)
    if polygon is None or len(polygon) < 2:
        return np.empty(0)
    return np.array(
        [math.atan2(n[1], n[0]) % _TWO_PI for _a, _b, n, _l in polygon_edges(polygon)]
    )


# -- facet enumeration for n >= 3 polytopes -----------------------------------


def _single_polytope_leaf(body: ConvexBody):
    terms = split_smooth_polytopal(body)
    smooth, poly = terms
    if smooth or len(poly) != 1 or not isinstance(poly[0][1], Polytope):
        return None
    return poly[0]


def _facets_nd(vertices: np.ndarray):
    """Merge the hull's simplicial facets by outward normal.

    Returns a list of (unit normal, facet (n-1)-volume, triangle list).
    """
    hull = ConvexHull(vertices)
    n = vertices.shape[1]
    groups: dict = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        normal = eq[:-1]
        key = tuple(np.round(normal, 9))
        tri = vertices[simplex]
        edges = tri[1:] - tri[0]
        gram = edges @ edges.T
        vol = math.sqrt(max(float(np.linalg.det(gram)), 0.0)) / math.factorial(n - 1)
        if key in groups:
            groups[key][1] += vol
            groups[key][2].append(tri)
        else:
            groups[key] = [normal / np.linalg.norm(normal), vol, [tri]]
    return list(groups.values())


def zonotope_to_polytope(z: Zonotope) -> Polytope:
    """Vertex enumeration of a zonotope (all sign combinations of the
    generators); intended for small generator counts."""
    g = z.generator_array
    m = len(g)
    if m > 16:
        raise ValueError("too many generators for vertex enumeration")
    signs = ((np.arange(2**m)[:, None] >> np.arange(m)[None, :]) & 1) * 2.0 - 1.0
    pts = np.asarray(z.center) + signs @ g
    hull = ConvexHull(pts)
    return Polytope(tuple(map(tuple, pts[hull.vertices])))


# -- S_K --------------------------------------------------------------------


def surface_area_measure(K: ConvexBody, resolution: int | None = None) -> SphereMeasure:
    """The classical surface area measure S_K.

    2D: atoms from polytopal leaves plus the density f = h'' + h of the
    smooth part, using Minkowski additivity of S in the plane.  1D: unit
    atoms at both endpoints' normals.  n >= 3: a single polytope leaf via
    facet enumeration.
    """
    n = K.dim
    if n == 1:
        dirs = np.array([[1.0], [-1.0]])
        return SphereMeasure(1, dirs, np.array([1.0, 1.0]))
    if n == 2:
        smooth_tree, polygon = _decompose_2d(K)
        dirs, masses = [], []
        if polygon is not None:
            for _a, _b, normal, length in polygon_edges(polygon):
                dirs.append(normal)
                masses.append(length)
        grid = density = None
        if smooth_tree is not None:
            grid = build_grid(2, resolution or default_resolution(2))
            c, s = fourier_coefficients(smooth_tree)
            density = _trig_curvature(c, s, grid.angles)
        dirs = np.asarray(dirs) if dirs else np.empty((0, 2))
        masses = np.asarray(masses) if masses else np.empty(0)
        dirs, masses = merge_atoms(dirs, masses)
        return SphereMeasure(2, dirs, masses, grid, density)
    leaf = _single_polytope_leaf(K)
    if leaf is None:
        raise ValueError("n >= 3 surface measures support single polytope leaves only")
    coef, poly = leaf
    verts = coef * poly.vertex_array
    if len(verts) > 64:
        raise ValueError("facet enumeration capped at 64 vertices")
    facets = _facets_nd(verts)
    dirs = np.array([f[0] for f in facets])
    masses = np.array([f[1] for f in facets])
    return SphereMeasure(n, dirs, masses)


def _trig_curvature(c, s, theta):
    k = np.arange(c.size)
    kt = np.multiply.outer(theta, k)
    return np.cos(kt) @ ((1 - k * k) * c) + np.sin(kt) @ ((1 - k * k) * s)


# -- S_{mu,K} -----------------------------------------------------------------


def _edge_density_integral(mu: WeightedMeasure, a, b, offset, order: int = 48) -> float:
    """int over the segment offset+[a,b] of phi, w.r.t. length."""
    x, w = _gl_nodes(order)
    pts = offset + a[None, :] + x[:, None] * (b - a)[None, :]
    length = float(np.linalg.norm(b - a))
    coarse = float(np.dot(w, mu.density(pts))) * length
    x2, w2 = _gl_nodes(2 * order)
    pts2 = offset + a[None, :] + x2[:, None] * (b - a)[None, :]
    fine = float(np.dot(w2, mu.density(pts2))) * length
    return fine if abs(fine - coarse) <= 1e-12 * max(abs(fine), 1e-300) else _edge_density_refined(mu, a, b, offset)


def _edge_density_refined(mu, a, b, offset, panels: int = 16, order: int = 48) -> float:
    x, w = _gl_nodes(order)
    total = 0.0
    for i in range(panels):
        lo = a + (b - a) * i / panels
        hi = a + (b - a) * (i + 1) / panels
        pts = offset + lo[None, :] + x[:, None] * (hi - lo)[None, :]
        total += float(np.dot(w, mu.density(pts))) * float(np.linalg.norm(hi - lo))
    return total


def _facet_density_integral(mu: WeightedMeasure, triangles, rel_tol: float = 1e-10) -> float:
    """Adaptive tensor-Gauss integral of phi over a triangulated facet."""
    x, w = _gl_nodes(12)
    ww = np.outer(w, w)

    def tensor(v0, v1, v2):
        e1, e2 = v1 - v0, v2 - v0
        gram = np.array([[e1 @ e1, e1 @ e2], [e1 @ e2, e2 @ e2]])
        area2 = math.sqrt(max(float(np.linalg.det(gram)), 0.0))
        if area2 == 0.0:
            return 0.0
        s = x[:, None, None]
        t = x[None, :, None]
        pts = v0[None, None, :] + s * (1.0 - t) * e1[None, None, :] + s * t * e2[None, None, :]
        vals = mu.density(pts.reshape(-1, len(v0))).reshape(len(x), len(x))
        return area2 * float(np.sum(ww * (x[:, None] * vals)))

    total = 0.0
    for tri in triangles:
        stack = [(tri[0], tri[1], tri[2], tensor(*tri), 0)]
        while stack:
            v0, v1, v2, parent, depth = stack.pop()
            if depth >= 6:
                total += parent
                continue
            m01, m12, m20 = 0.5 * (v0 + v1), 0.5 * (v1 + v2), 0.5 * (v2 + v0)
            kids = [(v0, m01, m20), (m01, v1, m12), (m20, m12, v2), (m01, m12, m20)]
            vals = [tensor(*k) for k in kids]
            if abs(sum(vals) - parent) <= rel_tol * max(abs(sum(vals)), 1e-300):
                total += sum(vals)
            else:
                stack.extend((k[0], k[1], k[2], v, depth + 1) for k, v in zip(kids, vals))
    return total


def weighted_surface_area_measure(
    mu: WeightedMeasure, K: ConvexBody, resolution: int | None = None
) -> SphereMeasure:
    """S_{mu,K}: the pushforward of the phi-weighted boundary measure.

    Polytope facets carry atoms with mass int_facet phi; smooth parts carry
    the density phi(grad h_K(theta)) f(theta).  In mixed planar trees the
    face at an edge normal is the edge translated by the smooth part's
    gradient, and phi is integrated over that translated face.
    """
    if mu.dim != K.dim:
        raise ValueError("measure/body dimension mismatch")
    n = K.dim
    if n == 1:
        lo = -K.support(np.array([-1.0]))
        hi = K.support(np.array([1.0]))
        dirs = np.array([[1.0], [-1.0]])
        masses = np.array(
            [float(mu.density(np.array([[hi]]))[0]), float(mu.density(np.array([[lo]]))[0])]
        )
        return SphereMeasure(1, dirs, masses)
    if n == 2:
        smooth_tree, polygon = _decompose_2d(K)
        dirs, masses = [], []
        if polygon is not None:
            for a, b, normal, _length in polygon_edges(polygon):
                offset = (
                    smooth_tree.support_gradient(normal) if smooth_tree is not None else np.zeros(2)
                )
                dirs.append(normal)
                masses.append(_edge_density_integral(mu, a, b, offset))
        grid = density = None
        if smooth_tree is not None:
            grid = build_grid(2, resolution or default_resolution(2))
            c, s = fourier_coefficients(smooth_tree)
            f = _trig_curvature(c, s, grid.angles)
            density = mu.density(K.support_gradient(grid.nodes)) * f
        dirs = np.asarray(dirs) if dirs else np.empty((0, 2))
        masses = np.asarray(masses) if masses else np.empty(0)
        dirs, masses = merge_atoms(dirs, masses)
        return SphereMeasure(2, dirs, masses, grid, density)
    leaf = _single_polytope_leaf(K)
    if leaf is None:
        raise ValueError("n >= 3 surface measures support single polytope leaves only")
    coef, poly = leaf
    verts = coef * poly.vertex_array
    if len(verts) > 64:
        raise ValueError("facet enumeration capped at 64 vertices")
    facets = _facets_nd(verts)
    dirs = np.array([f[0] for f in facets])
    masses = np.array([_facet_density_integral(mu, f[2]) for f in facets])
    return SphereMeasure(n, dirs, masses)


def weighted_surface_area(mu: WeightedMeasure, K: ConvexBody) -> float:
    """mu^+(boundary K) = S_{mu,K}(S^{n-1})."""
    return weighted_surface_area_measure(mu, K).total()


# -- S^mu_{A;B} in the plane ---------------------------------------------------


def mixed_surface_terms_2d(mu: WeightedMeasure, A: ConvexBody, B: ConvexBody):
    """Building blocks of dS^mu_{A;B} = phi(grad h_A) dS_B
    + <grad phi(grad h_A), grad h_B> dS_A with n - 1 = 1.

    Returns (atom_dirs, atom_masses, density_fn, break_angles): the atoms
    are S_B's atoms weighted by phi at A's boundary point; the density
    callable evaluates the absolutely continuous part at angles theta; the
    break angles are where the integrand loses smoothness (B's polytopal
    edge normals).
    """
    cA, sA = fourier_coefficients(A)  # raises unless A is a smooth tree
    smooth_B, polygon_B = _decompose_2d(B)
    dirs, masses = [], []
    if polygon_B is not None:
        for _a, _b, normal, length in polygon_edges(polygon_B):
            phi_at = float(mu.density(A.support_gradient(normal)))
            dirs.append(normal)
            masses.append(length * phi_at)
    if smooth_B is not None:
        cB, sB = fourier_coefficients(smooth_B)
    else:
        cB = sB = None

    def density_fn(theta):
        theta = np.asarray(theta, dtype=float)
        u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        grad_a = A.support_gradient(u)
        f_a = _trig_curvature(cA, sA, theta)
        grad_b = B.support_gradient(u)
        term = np.einsum("...i,...i->...", mu.grad_density(grad_a), grad_b) * f_a
        if cB is not None:
            term = term + mu.density(grad_a) * _trig_curvature(cB, sB, theta)
        return term

    breaks = polytopal_normal_angles(B)
    dirs = np.asarray(dirs) if dirs else np.empty((0, 2))
    masses = np.asarray(masses) if masses else np.empty(0)
    return dirs, masses, density_fn, breaks


def weighted_mixed_surface_measure_2d(
    mu: WeightedMeasure, A: ConvexBody, B: ConvexBody, resolution: int | None = None
) -> SphereMeasure:
    """The signed measure S^mu_{A;B} for a C^2_+ planar A.

    The density is sampled on the default grid; quadrature against it is
    what :func:`mixedmeasures.mixed.mixed_second_2d` refines with
    kink-aware panels.
    """
    if A.dim != 2 or B.dim != 2:
        raise ValueError("weighted_mixed_surface_measure_2d is 2D only")
    dirs, masses, density_fn, _breaks = mixed_surface_terms_2d(mu, A, B)
    grid = build_grid(2, resolution or default_resolution(2))
    density = density_fn(grid.angles)
    return SphereMeasure(2, dirs, masses, grid, density, signed=True)


def halfspace_gaussian_surface(d: float, direction) -> SphereMeasure:
    """Gaussian weighted surface measure of the half-space
    {x : <x, direction> <= d}: a single Dirac atom of mass
    exp(-d^2/2)/sqrt(2 pi) at the outward normal."""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    mass = math.exp(-0.5 * d * d) / math.sqrt(_TWO_PI)
    return SphereMeasure(len(direction), direction[None, :], np.array([mass]))
