"""Exact measure evaluation for 3D bodies of the form P + R*B_2^3.

Every 3D tree in this package is a Minkowski sum of balls and polytopal
leaves, i.e. an outer parallel body of a polytope P at radius R (the ball
centers translate P).  The measure splits exactly along the nearest-point
decomposition of K = P + R*B:

    interior of P      -> tetrahedra fanned from the centroid,
    facet prisms       -> facet x [0, R] along the outward normal,
    edge wedges        -> edge x normal arc x [0, R],
    vertex sectors     -> normal cone on the sphere x [0, R].

All pieces are integrated with fixed-order Gauss-Legendre rules, so the
result is a smooth function of Minkowski scaling coefficients -- the
property the finite-difference oracles need.  Degenerate P (a point, a
segment, a planar polygon) is handled by the matching degenerate
decomposition.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull

from .bodies import Ball, ConvexBody, Polytope, Segment, Zonotope, flatten
from .measures import Estimate, WeightedMeasure, _gl_nodes

__all__ = ["decompose_ball_polytopal", "ball_polytopal_measure"]

_TWO_PI = 2.0 * math.pi


def _zonotope_vertices(center: np.ndarray, generators: np.ndarray) -> np.ndarray:
    m = len(generators)
    if m > 16:
        raise ValueError("zonotope vertex enumeration capped at 16 generators")
    signs = ((np.arange(2**m)[:, None] >> np.arange(m)[None, :]) & 1) * 2.0 - 1.0
    return center + signs @ generators


def _normalized(points: np.ndarray):
    """Center and scale a point cloud so qhull's absolute tolerances act
    scale-free; returns (normalized points, center, scale)."""
    center = points.mean(axis=0)
    shifted = points - center
    scale = float(np.max(np.linalg.norm(shifted, axis=1)))
    if scale <= 0.0:
        scale = 1.0
    return shifted / scale, center, scale


def _prune(points: np.ndarray) -> np.ndarray:
    normed, center, scale = _normalized(points)
    normed, idx = np.unique(np.round(normed, 12), axis=0, return_index=True)
    points = points[idx]
    if len(points) <= 4:
        return points
    try:
        hull = ConvexHull(normed)
        return points[hull.vertices]
    except Exception:
        try:
            hull = ConvexHull(normed, qhull_options="QJ")
            return points[np.unique(hull.vertices)]
        except Exception:
            return points


def decompose_ball_polytopal(body: ConvexBody):
    """Split a 3D tree into (R, vertex cloud of the polytopal summand P).

    Returns None if the tree has leaves outside {Ball, Polytope, Zonotope,
    Segment} (which cannot happen for 3D trees in this package) or if the
    vertex product grows past a size cap.
    """
    if body.dim != 3:
        return None
    radius = 0.0
    cloud = np.zeros((1, 3))
    for coef, leaf in flatten(body):
        if coef == 0.0:
            continue
        if isinstance(leaf, Ball):
            radius += coef * leaf.radius
            cloud = cloud + coef * np.asarray(leaf.center)
            continue
        if isinstance(leaf, Polytope):
            pts = coef * leaf.vertex_array
        elif isinstance(leaf, Zonotope):
            pts = _zonotope_vertices(
                coef * np.asarray(leaf.center), coef * leaf.generator_array
            )
        elif isinstance(leaf, Segment):
            c = coef * np.asarray(leaf.center)
            d = coef * np.asarray(leaf.direction)
            pts = np.array([c - d, c + d])
        else:
            return None
        cloud = (cloud[:, None, :] + pts[None, :, :]).reshape(-1, 3)
        if len(cloud) > 20000:
            return None
        cloud = _prune(cloud)
    return radius, cloud


def _affine_rank(points: np.ndarray):
    base = points[0]
    diffs = points[1:] - base
    if len(diffs) == 0:
        return 0, None
    u, sv, vt = np.linalg.svd(diffs, full_matrices=True)
    scale = max(1.0, float(np.max(np.abs(points))))
    rank = int(np.sum(sv > 1e-9 * scale))
    return rank, vt


def _radial_shell(mu, base_pts: np.ndarray, dirs: np.ndarray, R: float, power: int, order: int = 24):
    """sum over paired (base point, direction) of int_0^R phi(base + r u) r^power dr."""
    if R <= 0.0:
        return np.zeros(len(base_pts))
    r, w = _gl_nodes(order)
    r = R * r
    w = R * w
    pts = base_pts[:, None, :] + r[None, :, None] * dirs[:, None, :]
    vals = mu.density(pts.reshape(-1, 3)).reshape(len(base_pts), order)
    return vals @ (w * r**power)


def _sector_integral(mu, v: np.ndarray, cone_normals: np.ndarray, R: float, order: int = 12) -> float:
    """int over the spherical polygon spanned by the facet normals of
    int_0^R phi(v + r u) r^2 dr, via chord-triangle radial projection:
    d sigma(u) = <x, n_T> dA(x) / |x|^3 on the planar triangle with unit
    normal n_T oriented away from the origin."""
    if R <= 0.0 or len(cone_normals) < 3:
        return 0.0
    mean = cone_normals.sum(axis=0)
    norm = np.linalg.norm(mean)
    if norm < 1e-12:
        return 0.0
    mean /= norm
    # Order the cone's vertices angularly around the mean direction and fan
    # from the (smoothly varying) mean itself, so perturbing the cone
    # perturbs every triangle smoothly.
    ref = np.array([1.0, 0.0, 0.0]) if abs(mean[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = ref - (ref @ mean) * mean
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(mean, e1)
    ang = np.arctan2(cone_normals @ e2, cone_normals @ e1)
    ordered = cone_normals[np.argsort(ang)]
    x, w = _gl_nodes(order)
    ww = np.outer(w, w)
    total = 0.0
    fan = [(mean, ordered[i], ordered[(i + 1) % len(ordered)]) for i in range(len(ordered))]
    for a, b, c in fan:
        e_ab, e_ac = b - a, c - a
        cross = np.cross(e_ab, e_ac)
        area2 = float(np.linalg.norm(cross))
        if area2 == 0.0:
            continue
        n_t = cross / area2
        if n_t @ a < 0:
            n_t = -n_t
        s = x[:, None, None]
        t = x[None, :, None]
        pts = a[None, None, :] + s * (1.0 - t) * e_ab[None, None, :] + s * t * e_ac[None, None, :]
        pts = pts.reshape(-1, 3)
        norms = np.linalg.norm(pts, axis=1)
        dirs = pts / norms[:, None]
        g = _radial_shell(mu, np.tile(v, (len(dirs), 1)), dirs, R, 2)
        integrand = (g * (pts @ n_t) / norms**3).reshape(order, order)
        total += area2 * float(np.sum(ww * (x[:, None] * integrand)))
    return total


def _wedge_integral(mu, a: np.ndarray, b: np.ndarray, n1: np.ndarray, n2: np.ndarray, R: float,
                    order: int = 12) -> float:
    """Edge wedge: int over the edge [a,b], the normal arc from n1 to n2,
    and r in [0, R] of phi * r."""
    if R <= 0.0:
        return 0.0
    cosang = float(np.clip(n1 @ n2, -1.0, 1.0))
    alpha = math.acos(cosang)
    if alpha < 1e-14:
        return 0.0
    ortho = n2 - cosang * n1
    ortho_norm = np.linalg.norm(ortho)
    if ortho_norm < 1e-14:
        return 0.0
    ortho /= ortho_norm
    xe, we = _gl_nodes(order)
    psi = alpha * xe
    dirs = np.outer(np.cos(psi), n1) + np.outer(np.sin(psi), ortho)
    length = float(np.linalg.norm(b - a))
    base = a[None, :] + xe[:, None] * (b - a)[None, :]
    r, wr = _gl_nodes(16)
    r = R * r
    wr = R * wr
    # pts axes: (edge node, arc node, radial node, xyz)
    pts = base[:, None, None, :] + r[None, None, :, None] * dirs[None, :, None, :]
    vals = mu.density(pts.reshape(-1, 3)).reshape(order, order, 16)
    inner = vals @ (wr * r)
    return length * alpha * float(we @ inner @ we)


def _facet_prism_integral(mu, tri: np.ndarray, normal: np.ndarray, R: float, order: int = 12) -> float:
    """Facet prism: int over the triangle and r in [0, R] of phi(x + r n)."""
    if R <= 0.0:
        return 0.0
    v0, e1, e2 = tri[0], tri[1] - tri[0], tri[2] - tri[0]
    area2 = float(np.linalg.norm(np.cross(e1, e2)))
    if area2 == 0.0:
        return 0.0
    x, w = _gl_nodes(order)
    s = x[:, None, None]
    t = x[None, :, None]
    base = v0[None, None, :] + s * (1.0 - t) * e1[None, None, :] + s * t * e2[None, None, :]
    base = base.reshape(-1, 3)
    r, wr = _gl_nodes(16)
    r = R * r
    wr = R * wr
    pts = base[:, None, :] + r[None, :, None] * normal[None, None, :]
    vals = mu.density(pts.reshape(-1, 3)).reshape(len(base), 16)
    inner = (vals @ wr).reshape(order, order)
    ww = np.outer(w, w)
    return area2 * float(np.sum(ww * (x[:, None] * inner)))


def _tet_integral(mu, p: np.ndarray, tri: np.ndarray, order: int = 10) -> float:
    e1, e2, e3 = tri[0] - p, tri[1] - p, tri[2] - p
    det = abs(float(np.linalg.det(np.stack([e1, e2, e3]))))
    if det == 0.0:
        return 0.0
    x, w = _gl_nodes(order)
    a = x[:, None, None]
    b = x[None, :, None]
    c = x[None, None, :]
    u1 = a
    u2 = b * (1.0 - a)
    u3 = c * (1.0 - a) * (1.0 - b)
    jac = (1.0 - a) ** 2 * (1.0 - b) * np.ones_like(c)
    pts = (
        p[None, None, None, :]
        + u1[..., None] * e1[None, None, None, :]
        + u2[..., None] * e2[None, None, None, :]
        + u3[..., None] * e3[None, None, None, :]
    )
    vals = mu.density(pts.reshape(-1, 3)).reshape(order, order, order)
    www = w[:, None, None] * w[None, :, None] * w[None, None, :]
    return det * float(np.sum(www * jac * vals))


def _point_case(mu, v: np.ndarray, R: float) -> float:
    """mu of a ball of radius R around v, by sphere x radial quadrature."""
    if R <= 0.0:
        return 0.0
    from .quadrature import build_grid

    grid = build_grid(3, 32)
    g = _radial_shell(mu, np.tile(v, (grid.size, 1)), grid.nodes, R, 2)
    return float(np.dot(grid.weights, g))


def _hemisphere_sector(mu, v: np.ndarray, axis: np.ndarray, R: float) -> float:
    """Sector over the hemisphere {u : <u, axis> >= 0}; the two-panel polar
    grid integrates each hemisphere exactly."""
    from .quadrature import build_grid

    grid = build_grid(3, 32)
    axis = axis / np.linalg.norm(axis)
    probe = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = probe - (probe @ axis) * axis
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    Q = np.column_stack([e1, e2, axis])
    mask = grid.nodes[:, 2] > 0.0
    dirs = grid.nodes[mask] @ Q.T
    g = _radial_shell(mu, np.tile(v, (len(dirs), 1)), dirs, R, 2)
    return float(np.dot(grid.weights[mask], g))


def _segment_case(mu, a: np.ndarray, b: np.ndarray, R: float) -> float:
    """Capsule: full cylinder wedge plus hemisphere end caps."""
    d = b - a
    length = float(np.linalg.norm(d))
    if length < 1e-15:
        return _point_case(mu, a, R)
    axis = d / length
    probe = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = probe - (probe @ axis) * axis
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    total = _hemisphere_sector(mu, a, -axis, R) + _hemisphere_sector(mu, b, axis, R)
    if R <= 0.0:
        return total
    m_psi = 64
    psi = _TWO_PI * np.arange(m_psi) / m_psi
    dirs = np.outer(np.cos(psi), e1) + np.outer(np.sin(psi), e2)
    xe, we = _gl_nodes(16)
    base = a[None, :] + xe[:, None] * d[None, :]
    r, wr = _gl_nodes(16)
    r = R * r
    wr = R * wr
    pts = base[:, None, None, :] + r[None, None, :, None] * dirs[None, :, None, :]
    vals = mu.density(pts.reshape(-1, 3)).reshape(16, m_psi, 16)
    inner = vals @ (wr * r)
    total += length * (_TWO_PI / m_psi) * float(we @ inner.sum(axis=1))
    return total


def _planar_case(mu, points: np.ndarray, R: float) -> float:
    """Slab around a planar polygon: two facet prisms, half-turn edge
    wedges, and meridian-lune vertex sectors."""
    base = points[0]
    rank, vt = _affine_rank(points)
    normal = vt[2]
    e1, e2 = vt[0], vt[1]
    uv = (points - base) @ np.stack([e1, e2]).T
    from .bodies import convex_hull_2d

    poly2 = convex_hull_2d(uv)
    verts3 = base + poly2 @ np.stack([e1, e2])
    k = len(poly2)
    total = 0.0
    # Two prisms (both sides of the slab).
    centroid2 = poly2.mean(axis=0)
    c3 = base + centroid2 @ np.stack([e1, e2])
    for i in range(k):
        tri = np.array([c3, verts3[i], verts3[(i + 1) % k]])
        for sgn in (1.0, -1.0):
            total += _facet_prism_integral(mu, tri, sgn * normal, R)
    # Half-turn wedges along the boundary edges.
    for i in range(k):
        a, b = verts3[i], verts3[(i + 1) % k]
        edge2 = poly2[(i + 1) % k] - poly2[i]
        out2 = np.array([edge2[1], -edge2[0]])
        out2 /= np.linalg.norm(out2)
        q = out2 @ np.stack([e1, e2])
        total += _wedge_integral(mu, a, b, normal, q, R) + _wedge_integral(mu, a, b, q, -normal, R)
    # Vertex lunes between the outward normals of adjacent edges.
    for i in range(k):
        prev2 = poly2[i] - poly2[(i - 1) % k]
        next2 = poly2[(i + 1) % k] - poly2[i]
        q1 = np.array([prev2[1], -prev2[0]])
        q2 = np.array([next2[1], -next2[0]])
        q1 /= np.linalg.norm(q1)
        q2 /= np.linalg.norm(q2)
        q1_3d = q1 @ np.stack([e1, e2])
        q2_3d = q2 @ np.stack([e1, e2])
        total += _lune_sector(mu, verts3[i], normal, q1_3d, q2_3d, R)
    return total


def _lune_sector(mu, v, pole, q1, q2, R: float, order: int = 16) -> float:
    """Sector over the lune between the meridians through q1 and q2 (with
    poles +-pole), rotating from q1 to q2 the short way; the span is the
    polygon vertex's exterior angle, always below pi."""
    if R <= 0.0:
        return 0.0
    cosang = float(np.clip(q1 @ q2, -1.0, 1.0))
    alpha = math.acos(cosang)
    if alpha < 1e-14:
        return 0.0
    e2 = q2 - cosang * q1
    e2 /= np.linalg.norm(e2)
    xt, wt = _gl_nodes(order)
    t = 2.0 * xt - 1.0  # cos(polar angle) on [-1, 1]
    wt2 = 2.0 * wt
    psi = alpha * xt
    wpsi = alpha * wt
    sin_t = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    dirs = (
        t[:, None, None] * pole[None, None, :]
        + (sin_t[:, None] * np.cos(psi)[None, :])[..., None] * q1[None, None, :]
        + (sin_t[:, None] * np.sin(psi)[None, :])[..., None] * e2[None, None, :]
    )
    dirs = dirs.reshape(-1, 3)
    g = _radial_shell(mu, np.tile(v, (len(dirs), 1)), dirs, R, 2).reshape(order, order)
    return float(wt2 @ g @ wpsi)


def ball_polytopal_measure(mu: WeightedMeasure, R: float, cloud: np.ndarray) -> Estimate:
    """mu(P + R*B_2^3) for the polytope P = conv(cloud)."""
    cloud = np.asarray(cloud, dtype=float)
    rank, _ = _affine_rank(cloud) if len(cloud) > 1 else (0, None)
    if len(cloud) == 1 or rank == 0:
        return Estimate(_point_case(mu, cloud[0], R), 1e-11)
    if rank == 1:
        i = int(np.argmin(cloud @ (cloud[-1] - cloud[0])))
        j = int(np.argmax(cloud @ (cloud[-1] - cloud[0])))
        return Estimate(_segment_case(mu, cloud[i], cloud[j], R), 1e-11)
    if rank == 2:
        return Estimate(_planar_case(mu, cloud, R), 1e-11)

    normed, _center, _scale = _normalized(cloud)
    hull = ConvexHull(normed)
    pts = cloud
    normals = hull.equations[:, :3]
    normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)
    centroid = pts[hull.vertices].mean(axis=0)
    total = 0.0
    # Interior and facet prisms, one simplex at a time.
    for simplex, n in zip(hull.simplices, normals):
        tri = pts[simplex]
        total += _tet_integral(mu, centroid, tri)
        total += _facet_prism_integral(mu, tri, n, R)
    # Edge wedges between adjacent facets with distinct normals.
    edge_faces: dict = {}
    for fi, simplex in enumerate(hull.simplices):
        for i in range(3):
            key = tuple(sorted((int(simplex[i]), int(simplex[(i + 1) % 3]))))
            edge_faces.setdefault(key, []).append(fi)
    vertex_normals: dict = {}
    for (a, b), faces in edge_faces.items():
        if len(faces) != 2:
            continue
        n1, n2 = normals[faces[0]], normals[faces[1]]
        if abs(float(np.clip(n1 @ n2, -1.0, 1.0))) > 1.0 - 1e-12:
            continue
        total += _wedge_integral(mu, pts[a], pts[b], n1, n2, R)
    # Vertex sectors over the normal cones.
    for fi, simplex in enumerate(hull.simplices):
        for vid in simplex:
            vertex_normals.setdefault(int(vid), []).append(normals[fi])
    for vid, ns in vertex_normals.items():
        ns = np.unique(np.round(np.asarray(ns), 10), axis=0)
        ns = ns / np.linalg.norm(ns, axis=1, keepdims=True)
        if len(ns) >= 3:
            total += _sector_integral(mu, pts[vid], ns, R)
    return Estimate(total, 1e-10 * max(1.0, abs(total)))
