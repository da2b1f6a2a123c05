"""Convex bodies represented as support-function trees.

Leaves are Ball, Polytope, Zonotope, Segment and Smooth2D (a trigonometric
support series); internal nodes are Minkowski sums and nonnegative
dilations.  All bodies carry absolute position: weighted measures are not
translation invariant, so nothing here ever recenters.

Support functions are evaluated with the 1-homogeneous extension
``h(x) = |x| h(x/|x|)`` so probes with non-unit vectors behave correctly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConvexBody",
    "Ball",
    "Polytope",
    "Zonotope",
    "Segment",
    "Smooth2D",
    "Sum",
    "Scale",
    "support",
    "support_gradient",
    "curvature_2d",
    "fourier_coefficients",
    "boundary_polygon_2d",
    "minkowski_sum_polygons",
    "convex_hull_2d",
    "negate",
    "random_body",
    "body_to_dict",
    "body_from_dict",
    "save_bodies",
    "load_bodies",
    "flatten",
    "split_smooth_polytopal",
    "is_smooth_2d",
    "is_polytopal",
]


class ConvexBody:
    """Base class; subclasses implement ``_support`` and ``_gradient``."""

    dim: int

    def support(self, u):
        """h_K(u) = sup_{y in K} <y, u>.  Accepts (n,) or (m, n) input."""
        u = np.asarray(u, dtype=float)
        single = u.ndim == 1
        pts = u[None, :] if single else u
        if pts.shape[-1] != self.dim:
            raise ValueError(f"direction dim {pts.shape[-1]} != body dim {self.dim}")
        vals = self._support(pts)
        return float(vals[0]) if single else vals

    def support_gradient(self, u):
        """nabla h_K(u), the inverse Gauss map where K is strictly convex."""
        u = np.asarray(u, dtype=float)
        single = u.ndim == 1
        pts = u[None, :] if single else u
        if pts.shape[-1] != self.dim:
            raise ValueError(f"direction dim {pts.shape[-1]} != body dim {self.dim}")
        grads = self._gradient(pts)
        return grads[0] if single else grads

    def __add__(self, other):
        if not isinstance(other, ConvexBody):
            return NotImplemented
        return Sum((self, other))

    def __rmul__(self, t):
        return Scale(float(t), self)


@dataclass(frozen=True)
class Ball(ConvexBody):
    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def dim(self):
        return len(self.center)

    def _support(self, pts):
        c = np.asarray(self.center)
        return pts @ c + self.radius * np.linalg.norm(pts, axis=-1)

    def _gradient(self, pts):
        c = np.asarray(self.center)
        norms = np.linalg.norm(pts, axis=-1, keepdims=True)
        norms = np.where(norms == 0.0, 1.0, norms)
        return c + self.radius * pts / norms


@dataclass(frozen=True)
class Polytope(ConvexBody):
    """Convex hull of a point cloud.  Vertices are deduplicated and stored
    in lexicographic order so the gradient tie-break (lexicographically
    smallest maximizing vertex) is a plain argmax."""

    vertices: tuple

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if v.size == 0:
            raise ValueError("polytope needs at least one vertex")
        v = np.unique(v, axis=0)  # also sorts lexicographically
        object.__setattr__(self, "vertices", tuple(map(tuple, v)))

    @property
    def dim(self):
        return len(self.vertices[0])

    @property
    def vertex_array(self):
        return np.asarray(self.vertices, dtype=float)

    def _support(self, pts):
        return (pts @ self.vertex_array.T).max(axis=-1)

    def _gradient(self, pts):
        v = self.vertex_array
        idx = np.argmax(pts @ v.T, axis=-1)  # first max = lexicographically smallest
        return v[idx]


@dataclass(frozen=True)
class Zonotope(ConvexBody):
    """center + sum_i [-g_i, g_i] for nonzero generators g_i."""

    center: tuple
    generators: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.center)
        g = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if g.shape[0] == 0:
            raise ValueError("zonotope needs at least one generator")
        if np.any(np.linalg.norm(g, axis=1) == 0.0):
            raise ValueError("zonotope generators must be nonzero")
        if g.shape[1] != len(c):
            raise ValueError("generator/center dimension mismatch")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "generators", tuple(map(tuple, g)))

    @property
    def dim(self):
        return len(self.center)

    @property
    def generator_array(self):
        return np.asarray(self.generators, dtype=float)

    def _support(self, pts):
        g = self.generator_array
        return pts @ np.asarray(self.center) + np.abs(pts @ g.T).sum(axis=-1)

    def _gradient(self, pts):
        g = self.generator_array
        signs = np.where(pts @ g.T >= 0.0, 1.0, -1.0)  # sgn(0) := +1
        return np.asarray(self.center) + signs @ g


@dataclass(frozen=True)
class Segment(ConvexBody):
    """center + [-direction, direction]."""

    center: tuple
    direction: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.center)
        d = tuple(float(x) for x in self.direction)
        if all(x == 0.0 for x in d):
            raise ValueError("segment direction must be nonzero")
        if len(c) != len(d):
            raise ValueError("center/direction dimension mismatch")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "direction", d)

    @property
    def dim(self):
        return len(self.center)

    def _support(self, pts):
        return pts @ np.asarray(self.center) + np.abs(pts @ np.asarray(self.direction))

    def _gradient(self, pts):
        d = np.asarray(self.direction)
        signs = np.where(pts @ d >= 0.0, 1.0, -1.0)
        return np.asarray(self.center) + signs[..., None] * d


@dataclass(frozen=True)
class Smooth2D(ConvexBody):
    """Planar body with support function given by a trigonometric series,

        h(theta) = sum_k cos_coeffs[k] cos(k theta) + sin_coeffs[k] sin(k theta),

    stored as Fourier coefficients so h' and h'' are exact.  Membership in
    C^2_+ requires f = h'' + h > 0, which is checked on a fine angle grid.
    """

    cos_coeffs: tuple
    sin_coeffs: tuple

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.cos_coeffs, dtype=float))
        s = np.atleast_1d(np.asarray(self.sin_coeffs, dtype=float))
        n = max(c.size, s.size)
        c = np.pad(c, (0, n - c.size))
        s = np.pad(s, (0, n - s.size))
        s[0] = 0.0
        object.__setattr__(self, "cos_coeffs", tuple(c))
        object.__setattr__(self, "sin_coeffs", tuple(s))
        theta = np.linspace(0.0, 2.0 * math.pi, 720, endpoint=False)
        if np.min(self.curvature(theta)) <= 0.0:
            raise ValueError("Smooth2D requires h'' + h > 0 (C^2_+ membership)")

    @property
    def dim(self):
        return 2

    @property
    def degree(self):
        return len(self.cos_coeffs) - 1

    def _trig(self, theta, deriv=0):
        theta = np.asarray(theta, dtype=float)
        k = np.arange(len(self.cos_coeffs))
        c = np.asarray(self.cos_coeffs)
        s = np.asarray(self.sin_coeffs)
        kt = np.multiply.outer(theta, k)
        if deriv == 0:
            return np.cos(kt) @ c + np.sin(kt) @ s
        if deriv == 1:
            return (-np.sin(kt) * k) @ c + (np.cos(kt) * k) @ s
        if deriv == 2:
            return (-np.cos(kt) * k * k) @ c + (-np.sin(kt) * k * k) @ s
        raise ValueError("deriv must be 0, 1, or 2")

    def h(self, theta):
        return self._trig(theta, 0)

    def hprime(self, theta):
        return self._trig(theta, 1)

    def curvature(self, theta):
        return self._trig(theta, 0) + self._trig(theta, 2)

    def _support(self, pts):
        r = np.linalg.norm(pts, axis=-1)
        theta = np.arctan2(pts[..., 1], pts[..., 0])
        return r * self._trig(theta, 0)

    def _gradient(self, pts):
        theta = np.arctan2(pts[..., 1], pts[..., 0])
        h = self._trig(theta, 0)
        hp = self._trig(theta, 1)
        u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        uperp = np.stack([-np.sin(theta), np.cos(theta)], axis=-1)
        return h[..., None] * u + hp[..., None] * uperp


@dataclass(frozen=True)
class Sum(ConvexBody):
    children: tuple

    def __post_init__(self):
        kids = tuple(self.children)
        if len(kids) < 2:
            raise ValueError("Sum needs at least two children")
        dims = {k.dim for k in kids}
        if len(dims) != 1:
            raise ValueError("Sum children must share a dimension")
        object.__setattr__(self, "children", kids)

    @property
    def dim(self):
        return self.children[0].dim

    def _support(self, pts):
        return sum(child._support(pts) for child in self.children)

    def _gradient(self, pts):
        return sum(child._gradient(pts) for child in self.children)


@dataclass(frozen=True)
class Scale(ConvexBody):
    factor: float
    child: ConvexBody

    def __post_init__(self):
        if self.factor < 0.0:
            raise ValueError("Scale factor must be nonnegative (use negate() for -K)")
        object.__setattr__(self, "factor", float(self.factor))

    @property
    def dim(self):
        return self.child.dim

    def _support(self, pts):
        return self.factor * self.child._support(pts)

    def _gradient(self, pts):
        return self.factor * self.child._gradient(pts)


# -- module-level operation wrappers ---------------------------------------


def support(body: ConvexBody, u):
    return body.support(u)


def support_gradient(body: ConvexBody, u):
    return body.support_gradient(u)


def negate(body: ConvexBody) -> ConvexBody:
    """Reflection -K, applied leaf by leaf."""
    if isinstance(body, Ball):
        return Ball(tuple(-c for c in body.center), body.radius)
    if isinstance(body, Polytope):
        return Polytope(tuple(tuple(-x for x in v) for v in body.vertices))
    if isinstance(body, Zonotope):
        return Zonotope(tuple(-c for c in body.center), body.generators)
    if isinstance(body, Segment):
        return Segment(tuple(-c for c in body.center), body.direction)
    if isinstance(body, Smooth2D):
        # h_{-K}(theta) = h_K(theta + pi): flips the sign of odd harmonics.
        c = [(-1) ** k * ck for k, ck in enumerate(body.cos_coeffs)]
        s = [(-1) ** k * sk for k, sk in enumerate(body.sin_coeffs)]
        return Smooth2D(tuple(c), tuple(s))
    if isinstance(body, Sum):
        return Sum(tuple(negate(ch) for ch in body.children))
    if isinstance(body, Scale):
        return Scale(body.factor, negate(body.child))
    raise TypeError(f"cannot negate {type(body).__name__}")


def flatten(body: ConvexBody):
    """Flatten a Sum/Scale tree into a list of (coefficient, leaf)."""
    out = []

    def walk(node, coef):
        if isinstance(node, Sum):
            for ch in node.children:
                walk(ch, coef)
        elif isinstance(node, Scale):
            walk(node.child, coef * node.factor)
        else:
            out.append((coef, node))

    walk(body, 1.0)
    return out


_SMOOTH_LEAVES = (Ball, Smooth2D)
_POLY_LEAVES = (Polytope, Zonotope, Segment)


def split_smooth_polytopal(body: ConvexBody):
    """Partition flattened leaves into (smooth terms, polytopal terms)."""
    smooth, poly = [], []
    for coef, leaf in flatten(body):
        if coef == 0.0:
            continue
        if isinstance(leaf, _SMOOTH_LEAVES):
            smooth.append((coef, leaf))
        elif isinstance(leaf, _POLY_LEAVES):
            poly.append((coef, leaf))
        else:  # pragma: no cover - leaf set is closed
            raise TypeError(f"unknown leaf {type(leaf).__name__}")
    return smooth, poly


def is_smooth_2d(body: ConvexBody) -> bool:
    if body.dim != 2:
        return False
    smooth, poly = split_smooth_polytopal(body)
    return not poly


def is_polytopal(body: ConvexBody) -> bool:
    smooth, poly = split_smooth_polytopal(body)
    return not smooth


def fourier_coefficients(body: ConvexBody):
    """Cosine/sine coefficients of h_K(theta) for a smooth 2D tree.

    Ball(c, R) contributes R to the constant term and c to the first
    harmonic; Smooth2D leaves contribute their stored series.
    """
    if body.dim != 2:
        raise ValueError("fourier_coefficients is 2D only")
    smooth, poly = split_smooth_polytopal(body)
    if poly:
        raise ValueError("body has polytopal leaves; its support is not a trigonometric series")
    deg = 1
    for _, leaf in smooth:
        if isinstance(leaf, Smooth2D):
            deg = max(deg, leaf.degree)
    c = np.zeros(deg + 1)
    s = np.zeros(deg + 1)
    for coef, leaf in smooth:
        if isinstance(leaf, Ball):
            c[0] += coef * leaf.radius
            c[1] += coef * leaf.center[0]
            s[1] += coef * leaf.center[1]
        else:
            cc = np.asarray(leaf.cos_coeffs)
            ss = np.asarray(leaf.sin_coeffs)
            c[: cc.size] += coef * cc
            s[: ss.size] += coef * ss
    return c, s


def _trig_eval(c, s, theta, deriv=0):
    theta = np.asarray(theta, dtype=float)
    k = np.arange(c.size)
    kt = np.multiply.outer(theta, k)
    if deriv == 0:
        return np.cos(kt) @ c + np.sin(kt) @ s
    if deriv == 1:
        return (-np.sin(kt) * k) @ c + (np.cos(kt) * k) @ s
    return (-np.cos(kt) * k * k) @ c + (-np.sin(kt) * k * k) @ s


def curvature_2d(body: ConvexBody, theta):
    """f_K(theta) = h''(theta) + h(theta) for C^2 planar trees.

    Rejects polytopal leaves: their curvature is atomic and lives in the
    surface-measure module instead.
    """
    c, s = fourier_coefficients(body)
    theta_arr = np.asarray(theta, dtype=float)
    vals = _trig_eval(c, s, theta_arr, 0) + _trig_eval(c, s, theta_arr, 2)
    return float(vals) if np.isscalar(theta) or theta_arr.ndim == 0 else vals


def smooth_support_2d(body: ConvexBody, theta, deriv=0):
    """h, h' or h'' of a smooth 2D tree at angles theta (exact)."""
    c, s = fourier_coefficients(body)
    return _trig_eval(c, s, np.asarray(theta, dtype=float), deriv)


# -- 2D polygon machinery ---------------------------------------------------


def convex_hull_2d(points: np.ndarray) -> np.ndarray:
    """Convex hull in CCW order (Andrew's monotone chain).

    Collinear points on the hull boundary are dropped.  Degenerate inputs
    (all points equal, or all collinear) return 1 or 2 points.
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def half(points_iter):
        chain = []
        for p in points_iter:
            while len(chain) >= 2 and np.cross(chain[-1] - chain[-2], p - chain[-2]) <= 1e-12 * (
                np.linalg.norm(chain[-1] - chain[-2]) * np.linalg.norm(p - chain[-2]) + 1e-30
            ):
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        return np.unique(hull, axis=0)
    return hull


def _roll_to_lowest(vertices: np.ndarray) -> np.ndarray:
    idx = np.lexsort((vertices[:, 0], vertices[:, 1]))[0]
    return np.roll(vertices, -idx, axis=0)


def _leaf_polygon(leaf) -> np.ndarray:
    """CCW vertex array for a polytopal 2D leaf; segments give 2 vertices."""
    if isinstance(leaf, Polytope):
        return convex_hull_2d(leaf.vertex_array)
    if isinstance(leaf, Segment):
        c = np.asarray(leaf.center)
        d = np.asarray(leaf.direction)
        return np.array([c - d, c + d])
    if isinstance(leaf, Zonotope):
        c = np.asarray(leaf.center)
        g = leaf.generator_array.copy()
        # Standard zonogon construction: orient generators into the upper
        # half-plane, sort by angle, walk the boundary.
        flip = (g[:, 1] < 0) | ((g[:, 1] == 0) & (g[:, 0] < 0))
        g[flip] *= -1.0
        order = np.argsort(np.arctan2(g[:, 1], g[:, 0]), kind="stable")
        g = g[order]
        start = c - g.sum(axis=0)
        verts = [start]
        for gi in g:
            verts.append(verts[-1] + 2.0 * gi)
        for gi in g[:-1]:
            verts.append(verts[-1] - 2.0 * gi)
        return convex_hull_2d(np.array(verts))
    raise TypeError(f"not a polytopal 2D leaf: {type(leaf).__name__}")


def minkowski_sum_polygons(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Minkowski sum of two convex CCW polygons by the edge-merge sweep."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    q = np.atleast_2d(np.asarray(q, dtype=float))
    if len(p) == 1:
        return q + p[0]
    if len(q) == 1:
        return p + q[0]

    def edge_list(v):
        v = _roll_to_lowest(v)
        edges = np.roll(v, -1, axis=0) - v
        return v[0], edges

    start_p, edges_p = edge_list(p)
    start_q, edges_q = edge_list(q)

    def angle_key(e):
        a = math.atan2(e[1], e[0])
        return a if a >= 0.0 else a + 2.0 * math.pi

    merged = sorted(
        [tuple(e) for e in edges_p] + [tuple(e) for e in edges_q], key=angle_key
    )
    verts = [start_p + start_q]
    for e in merged[:-1]:
        verts.append(verts[-1] + np.asarray(e))
    return convex_hull_2d(np.array(verts))


def boundary_polygon_2d(body: ConvexBody) -> np.ndarray:
    """Vertices of a polytopal 2D tree in counterclockwise order.

    Sum nodes use the edge-merge Minkowski sum; Zonotopes expand to their
    2m-gon.  Raises on non-polytopal leaves.
    """
    if body.dim != 2:
        raise ValueError("boundary_polygon_2d is 2D only")
    smooth, poly = split_smooth_polytopal(body)
    if smooth:
        raise ValueError("non-polytopal leaf present")
    if not poly:
        raise ValueError("empty body tree")
    polygon = None
    for coef, leaf in poly:
        pg = coef * _leaf_polygon(leaf)
        pg = convex_hull_2d(pg)
        polygon = pg if polygon is None else minkowski_sum_polygons(polygon, pg)
    return polygon


def polygon_area(vertices: np.ndarray) -> float:
    """Shoelace area of a CCW polygon."""
    v = np.atleast_2d(np.asarray(vertices, dtype=float))
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


# -- random generators ------------------------------------------------------


def random_body(kind: str, dim: int, size: int, seed: int) -> ConvexBody:
    """Seeded random body; identical arguments give identical bodies.

    ``Polytope``: hull of standard-normal points.  ``SymmetricPolytope``:
    the same with antipodes adjoined (K = -K).  ``Zonotope``: generators
    uniform on the sphere with lengths uniform in [0.2, 1], centered at
    the origin.  ``Smooth2D``: random trigonometric support series with
    harmonics k >= 2, coefficients shrunk until min f > 0.05 c0.
    """
    rng = np.random.default_rng(seed)
    return random_body_rng(kind, dim, size, rng)


def random_body_rng(kind: str, dim: int, size: int, rng) -> ConvexBody:
    if kind == "Polytope":
        if size < dim + 1:
            raise ValueError("need size >= dim + 1 points for a full-dimensional polytope")
        return Polytope(tuple(map(tuple, rng.standard_normal((size, dim)))))
    if kind == "SymmetricPolytope":
        if size < dim + 1:
            raise ValueError("need size >= dim + 1 points for a full-dimensional polytope")
        pts = rng.standard_normal((size, dim))
        return Polytope(tuple(map(tuple, np.vstack([pts, -pts]))))
    if kind == "Zonotope":
        dirs = rng.standard_normal((size, dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        lengths = rng.uniform(0.2, 1.0, size)
        return Zonotope((0.0,) * dim, tuple(map(tuple, dirs * lengths[:, None])))
    if kind == "Smooth2D":
        if dim != 2:
            raise ValueError("Smooth2D bodies are planar")
        degree = min(max(size, 2), 16)
        c0 = rng.uniform(0.8, 1.2)
        c = np.zeros(degree + 1)
        s = np.zeros(degree + 1)
        c[0] = c0
        for k in range(2, degree + 1):
            c[k] = rng.normal(0.0, 1.0) / k**3
            s[k] = rng.normal(0.0, 1.0) / k**3
        theta = np.linspace(0.0, 2.0 * math.pi, 1024, endpoint=False)
        while True:
            f = _trig_eval(c, s, theta, 0) + _trig_eval(c, s, theta, 2)
            if f.min() > 0.05 * c0:
                break
            c[1:] *= 0.5
            s[1:] *= 0.5
        return Smooth2D(tuple(c), tuple(s))
    raise ValueError(f"unknown random body kind {kind!r}")


def symmetrize(body: ConvexBody) -> ConvexBody:
    """(K + (-K)) / 2, the symmetric body with the even part of h_K."""
    return Scale(0.5, Sum((body, negate(body))))


# -- serialization -----------------------------------------------------------


def body_to_dict(body: ConvexBody) -> dict:
    if isinstance(body, Ball):
        return {"kind": "ball", "center": list(body.center), "radius": body.radius}
    if isinstance(body, Polytope):
        return {"kind": "polytope", "vertices": [list(v) for v in body.vertices]}
    if isinstance(body, Zonotope):
        return {
            "kind": "zonotope",
            "center": list(body.center),
            "generators": [list(g) for g in body.generators],
        }
    if isinstance(body, Segment):
        return {"kind": "segment", "center": list(body.center), "direction": list(body.direction)}
    if isinstance(body, Smooth2D):
        return {
            "kind": "smooth2d",
            "cos_coeffs": list(body.cos_coeffs),
            "sin_coeffs": list(body.sin_coeffs),
        }
    if isinstance(body, Sum):
        return {"kind": "sum", "children": [body_to_dict(ch) for ch in body.children]}
    if isinstance(body, Scale):
        return {"kind": "scale", "factor": body.factor, "child": body_to_dict(body.child)}
    raise TypeError(f"cannot serialize {type(body).__name__}")


def body_from_dict(d: dict) -> ConvexBody:
    kind = d["kind"]
    if kind == "ball":
        return Ball(tuple(d["center"]), d["radius"])
    if kind == "polytope":
        return Polytope(tuple(map(tuple, d["vertices"])))
    if kind == "zonotope":
        return Zonotope(tuple(d["center"]), tuple(map(tuple, d["generators"])))
    if kind == "segment":
        return Segment(tuple(d["center"]), tuple(d["direction"]))
    if kind == "smooth2d":
        return Smooth2D(tuple(d["cos_coeffs"]), tuple(d["sin_coeffs"]))
    if kind == "sum":
        return Sum(tuple(body_from_dict(ch) for ch in d["children"]))
    if kind == "scale":
        return Scale(d["factor"], body_from_dict(d["child"]))
    raise ValueError(f"unknown body kind {kind!r}")


def save_bodies(path, bodies) -> None:
    """One body per line as JSON; floats round-trip bit-exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        for body in bodies:
            fh.write(json.dumps(body_to_dict(body)) + "\n")


def load_bodies(path):
    with open(path, "r", encoding="utf-8") as fh:
        return [body_from_dict(json.loads(line)) for line in fh if line.strip()]
