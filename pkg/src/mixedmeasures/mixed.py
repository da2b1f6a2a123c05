"""Mixed volumes and mixed measures of convex bodies.

mu(K;L) is the one-sided derivative of eps -> mu(K + eps L) at 0 and is
computed here by two independent routes: the surface-measure
representation int h_L dS_{mu,K}, and Richardson-extrapolated forward
differences of mu(K + eps L).  The second mixed measure mu(A;B,C) (the
cross derivative of mu(A + sB + tC) at the origin) gets three routes: the
planar closed form through the weighted mixed surface area measure, the
rotationally invariant ball formulas, and finite differences.

Angular integrals of planar densities are evaluated with Gauss-Legendre
panels split at the polytopal edge-normal angles, where support functions
have kinks and support gradients jump; inside a panel every integrand
appearing here is analytic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial import ConvexHull

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
    convex_hull_2d,
    flatten,
    fourier_coefficients,
    is_polytopal,
    is_smooth_2d,
    polygon_area,
    split_smooth_polytopal,
)
from .measures import Estimate, WeightedMeasure, lebesgue, measure_of_body, _gl_nodes
from .quadrature import build_grid, sphere_surface_area, unit_ball_volume
from .surface import (
    _decompose_2d,
    _edge_density_integral,
    mixed_surface_terms_2d,
    polygon_edges,
    polytopal_normal_angles,
    surface_area_measure,
    weighted_surface_area_measure,
)

__all__ = [
    "FDConfig",
    "FDResult",
    "mixed_volume",
    "mixed_measure",
    "mixed_measure_fd",
    "mixed_second_2d",
    "gaussian_mixed_second_2d_closed",
    "ball_mixed_measure",
    "ball_mixed_second",
    "mixed_second_fd",
    "integral_identity_checks",
    "IdentityChecks",
    "lebesgue_volume",
    "sphere_support_integral",
    "panel_integral_circle",
    "result_record",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FDConfig:
    """Finite-difference ladder: steps eps0 / 2^k for k < levels."""

    eps0: float = 1e-2
    levels: int = 3
    rel_target: float = 1e-4

    def __post_init__(self):
        if self.levels < 2:
            raise ValueError("need at least two Richardson levels")
        if self.eps0 <= 0 or self.eps0 / 2 ** (self.levels - 1) <= 1e-300:
            raise ValueError("steps must stay distinguishable from zero")


class FDResult(NamedTuple):
    value: float
    error: float
    converged: bool


# -- panel quadrature over the circle -----------------------------------------


def panel_integral_circle(fn, breaks=(), order: int = 32, max_panel: float = math.pi / 16) -> float:
    """int_0^{2pi} fn(theta) dtheta with Gauss-Legendre panels split at the
    given break angles; ``fn`` must be vectorized over angle arrays."""
    br = np.sort(np.mod(np.asarray(list(breaks), dtype=float), _TWO_PI)) if len(breaks) else np.empty(0)
    if br.size:
        keep = np.concatenate([[True], np.diff(br) > 1e-12])
        br = br[keep]
        edges = np.concatenate([br, [br[0] + _TWO_PI]])
    else:
        edges = np.array([0.0, _TWO_PI])
    x, w = _gl_nodes(order)
    thetas, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 1e-14:
            continue
        pieces = max(1, int(math.ceil((b - a) / max_panel)))
        sub = np.linspace(a, b, pieces + 1)
        for lo, hi in zip(sub[:-1], sub[1:]):
            thetas.append(lo + (hi - lo) * x)
            weights.append((hi - lo) * w)
    thetas = np.concatenate(thetas)
    weights = np.concatenate(weights)
    return float(np.dot(weights, fn(thetas)))


def _unit(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _support_on_angles(body, theta):
    return body.support(_unit(theta))


# -- volumes -------------------------------------------------------------------


def lebesgue_volume(K: ConvexBody) -> float:
    """Vol_n(K): exact for planar trees and for polytopes/balls in general."""
    n = K.dim
    if n == 1:
        return float(K.support(np.array([1.0])) + K.support(np.array([-1.0])))
    if n == 2:
        if is_polytopal(K):
            return polygon_area(boundary_polygon_2d(K))
        return _mixed_measure_raw(lebesgue(2), K, K) / 2.0
    terms = flatten(K)
    if len(terms) == 1:
        coef, leaf = terms[0]
        if isinstance(leaf, Ball):
            return unit_ball_volume(n) * (coef * leaf.radius) ** n
        if isinstance(leaf, Polytope):
            return ConvexHull(coef * leaf.vertex_array).volume
    est = measure_of_body(lebesgue(n), K, method="montecarlo", budget=400_000, seed=0)
    return est.value


def mixed_volume(K: ConvexBody, L: ConvexBody) -> float:
    """V(K[n-1], L) = (1/n) int h_L dS_K.

    The integration side is chosen so that polytopal surface measures
    (exact atoms) are preferred; V is symmetric in its arguments when both
    sides are admissible.
    """
    if K.dim != L.dim:
        raise ValueError("dimension mismatch")
    n = K.dim
    if n == 2 and not is_polytopal(K) and is_polytopal(L) and not is_smooth_2d(K):
        K, L = L, K
    return _mixed_measure_raw(lebesgue(n), K, L) / n


# -- mixed measure: representation route ----------------------------------------


def _origin_interior(body: ConvexBody, m: int = 512) -> bool:
    if body.dim == 1:
        return body.support(np.array([1.0])) > 0 and body.support(np.array([-1.0])) > 0
    grid = build_grid(body.dim, m if body.dim == 2 else 16)
    return float(np.min(body.support(grid.nodes))) > 0.0


def _mixed_measure_raw(mu: WeightedMeasure, K: ConvexBody, L: ConvexBody) -> float:
    """int h_L dS_{mu,K} without the K^n_0 hypothesis check."""
    n = K.dim
    if n == 1:
        sm = weighted_surface_area_measure(mu, K)
        return sm.integrate(lambda u: L.support(u))
    if n == 2:
        smooth_tree, polygon = _decompose_2d(K)
        total = 0.0
        if polygon is not None:
            for a, b, normal, _length in polygon_edges(polygon):
                offset = (
                    smooth_tree.support_gradient(normal) if smooth_tree is not None else np.zeros(2)
                )
                mass = _edge_density_integral(mu, a, b, offset)
                total += mass * float(L.support(normal))
        if smooth_tree is not None:
            c, s = fourier_coefficients(smooth_tree)
            kk = np.arange(c.size)
            fc = (1 - kk * kk) * c
            fs = (1 - kk * kk) * s

            def fn(theta):
                u = _unit(theta)
                kt = np.multiply.outer(theta, kk)
                f_smooth = np.cos(kt) @ fc + np.sin(kt) @ fs
                return L.support(u) * mu.density(K.support_gradient(u)) * f_smooth

            breaks = np.concatenate([polytopal_normal_angles(K), polytopal_normal_angles(L)])
            total += panel_integral_circle(fn, breaks)
        return total
    sm = weighted_surface_area_measure(mu, K)
    return sm.integrate(lambda u: L.support(u))


def mixed_measure(mu: WeightedMeasure, K: ConvexBody, L: ConvexBody) -> float:
    """mu(K;L) = int h_L dS_{mu,K}, for K, L with the origin interior."""
    if mu.dim != K.dim or K.dim != L.dim:
        raise ValueError("dimension mismatch")
    if not _origin_interior(K) or not _origin_interior(L):
        raise ValueError("mixed_measure requires bodies with the origin interior")
    return _mixed_measure_raw(mu, K, L)


# -- finite-difference oracles ----------------------------------------------------


def _fd_method(mu: WeightedMeasure, probe: ConvexBody, method: str) -> str:
    """Pick one measure-evaluation method for the whole FD stencil, so the
    quadrature bias is a smooth function of the step and cancels.

    Planar trees and 3D ball+polytopal trees have exact fan/decomposition
    evaluators ('auto'); anything else uses a fixed-grid polar-radial or
    Monte Carlo ladder.
    """
    if method != "auto":
        return method
    if probe.dim in (1, 2):
        return "auto"
    if probe.dim == 3:
        from .ballsum import decompose_ball_polytopal

        if decompose_ball_polytopal(probe) is not None:
            return "auto"
    if mu.radial is not None:
        return "polarradial"
    return "montecarlo"


def _richardson(values, ratio: float = 2.0):
    """First-order Richardson table for step-halved sequences."""
    tab = [list(values)]
    m = len(values)
    for j in range(1, m):
        prev = tab[-1]
        fac = ratio**j
        tab.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(m - j)])
    best = tab[-1][0]
    prev_best = tab[-2][0] if m >= 2 else best
    alt = tab[-2][1] if m >= 2 and len(tab[-2]) > 1 else best
    residual = max(abs(best - prev_best), abs(best - alt))
    return best, residual


def _fd_resolution(dim: int) -> int:
    return 1024 if dim == 2 else 32


def _combine_grid_levels(coarse, fine):
    """Richardson over the two grid resolutions: the stencil values are
    exact derivatives of the outer-polytope measures, whose bias in the
    grid spacing is O(step^2)."""
    v1, r1 = coarse
    v2, r2 = fine
    value = v2 + (v2 - v1) / 3.0
    residual = max(r1, r2, abs(v2 - v1) / 3.0)
    return value, residual


def mixed_measure_fd(
    mu: WeightedMeasure,
    K: ConvexBody,
    L: ConvexBody,
    cfg: FDConfig | None = None,
    method: str = "auto",
    budget: int = 200_000,
    seed: int = 0,
    resolution: int | None = None,
) -> FDResult:
    """Forward-difference oracle for mu(K;L):
    (mu(K + eps L) - mu(K)) / eps, Richardson-extrapolated in eps.

    All measures in one ladder are evaluated by the same method on the
    same grid, so the quadrature bias is differenced away along with the
    measure itself; the polar-radial route then extrapolates over two grid
    resolutions.
    """
    cfg = cfg or FDConfig()
    probe = Sum((K, Scale(1.0, L)))
    use = _fd_method(mu, probe, method)

    mc_error = [0.0]

    def ladder(res):
        g0 = measure_of_body(
            mu, K, method=use, budget=budget, seed=seed, resolution=res, extrapolate=False
        )
        diffs = []
        for k in range(cfg.levels):
            eps = cfg.eps0 / 2**k
            gk = measure_of_body(
                mu,
                Sum((K, Scale(eps, L))),
                method=use,
                budget=budget,
                seed=seed + k + 1,
                resolution=res,
                extrapolate=False,
            )
            diffs.append((gk.value - g0.value) / eps)
            if use == "montecarlo":
                mc_error[0] = max(mc_error[0], (gk.error + g0.error) / eps)
        return _richardson(diffs)

    if use == "polarradial":
        res = resolution or _fd_resolution(mu.dim)
        value, residual = _combine_grid_levels(ladder(res), ladder(2 * res))
    else:
        value, residual = ladder(resolution)
    error = residual + mc_error[0]
    converged = residual <= max(cfg.rel_target * abs(value), 1e-12)
    return FDResult(value, error, converged)


def mixed_second_fd(
    mu: WeightedMeasure,
    A: ConvexBody,
    B: ConvexBody,
    C: ConvexBody,
    cfg: FDConfig | None = None,
    method: str = "auto",
    budget: int = 200_000,
    seed: int = 0,
    resolution: int | None = None,
) -> FDResult:
    """Cross-difference oracle for mu(A;B,C):
    [g(e,e) - g(e,0) - g(0,e) + g(0,0)] / e^2 with g(s,t) = mu(A+sB+tC),
    Richardson-extrapolated in e (and, for the polar-radial route, over
    two grid resolutions; see mixed_measure_fd)."""
    cfg = cfg or FDConfig()
    probe = Sum((A, Scale(1.0, B), Scale(1.0, C)))
    use = _fd_method(mu, probe, method)
    mc_error = [0.0]

    def ladder(res):
        cache: dict = {}

        def g(s: float, t: float) -> float:
            key = (round(s, 15), round(t, 15))
            if key not in cache:
                parts = [A]
                if s > 0:
                    parts.append(Scale(s, B))
                if t > 0:
                    parts.append(Scale(t, C))
                body = parts[0] if len(parts) == 1 else Sum(tuple(parts))
                cache[key] = measure_of_body(
                    mu,
                    body,
                    method=use,
                    budget=budget,
                    seed=seed + len(cache),
                    resolution=res,
                    extrapolate=False,
                )
            return cache[key].value

        diffs = []
        for k in range(cfg.levels):
            eps = cfg.eps0 / 2**k
            diffs.append((g(eps, eps) - g(eps, 0.0) - g(0.0, eps) + g(0.0, 0.0)) / (eps * eps))
        if use == "montecarlo":
            eps_min = cfg.eps0 / 2 ** (cfg.levels - 1)
            mc_error[0] = max(
                mc_error[0], 4.0 * max(e.error for e in cache.values()) / (eps_min * eps_min)
            )
        return _richardson(diffs)

    if use == "polarradial":
        res = resolution or _fd_resolution(mu.dim)
        value, residual = _combine_grid_levels(ladder(res), ladder(2 * res))
    else:
        value, residual = ladder(resolution)
    error = residual + mc_error[0]
    converged = residual <= max(cfg.rel_target * abs(value), 1e-12)
    return FDResult(value, error, converged)


# -- second mixed measure: closed routes -------------------------------------------


def mixed_second_2d(mu: WeightedMeasure, A: ConvexBody, B: ConvexBody, C: ConvexBody) -> float:
    """mu(A;B,C) = int h_C dS^mu_{A;B} in the plane (n - 1 = 1); A must be
    a C^2_+ tree.  Symmetric in B and C up to quadrature error."""
    if A.dim != 2 or B.dim != 2 or C.dim != 2:
        raise ValueError("mixed_second_2d is 2D only")
    dirs, masses, density_fn, breaks_b = mixed_surface_terms_2d(mu, A, B)
    total = 0.0
    if len(masses):
        total += float(np.dot(masses, C.support(dirs)))
    breaks = np.concatenate([breaks_b, polytopal_normal_angles(C)])

    def fn(theta):
        return C.support(_unit(theta)) * density_fn(theta)

    total += panel_integral_circle(fn, breaks)
    return total


def gaussian_mixed_second_2d_closed(
    A: ConvexBody, B: ConvexBody, C: ConvexBody, resolution: int = 2048
) -> float:
    """gamma_2(A;B,C) for smooth planar bodies:

        (1/2pi) int_0^{2pi} e^{-(h_A'^2 + h_A^2)/2}
                [h_B h_C (1 - h_A f_A) - h_B' h_C'] dtheta,

    manifestly symmetric in B and C.  B and C must have differentiable
    support (route polytopes through mixed_second_2d, which needs no h_B').
    """
    for body, name in ((A, "A"), (B, "B"), (C, "C")):
        if not is_smooth_2d(body):
            raise ValueError(f"{name} must be a smooth 2D tree (pre-smooth polytopes or use mixed_second_2d)")
    theta = _TWO_PI * np.arange(resolution) / resolution
    cA, sA = fourier_coefficients(A)
    cB, sB = fourier_coefficients(B)
    cC, sC = fourier_coefficients(C)

    def series(c, s, deriv):
        k = np.arange(c.size)
        kt = np.multiply.outer(theta, k)
        if deriv == 0:
            return np.cos(kt) @ c + np.sin(kt) @ s
        return (-np.sin(kt) * k) @ c + (np.cos(kt) * k) @ s

    hA, hAp = series(cA, sA, 0), series(cA, sA, 1)
    k = np.arange(cA.size)
    kt = np.multiply.outer(theta, k)
    fA = np.cos(kt) @ ((1 - k * k) * cA) + np.sin(kt) @ ((1 - k * k) * sA)
    hB, hBp = series(cB, sB, 0), series(cB, sB, 1)
    hC, hCp = series(cC, sC, 0), series(cC, sC, 1)
    integrand = np.exp(-0.5 * (hAp**2 + hA**2)) * (hB * hC * (1.0 - hA * fA) - hBp * hCp)
    return float(integrand.mean())


# -- ball formulas for rotationally invariant measures ------------------------------


def _perimeter_2d_leaf(leaf, coef: float) -> float:
    if isinstance(leaf, Segment):
        return coef * 4.0 * float(np.linalg.norm(leaf.direction))
    if isinstance(leaf, Zonotope):
        return coef * 4.0 * float(np.linalg.norm(leaf.generator_array, axis=1).sum())
    poly = convex_hull_2d(leaf.vertex_array)
    if len(poly) < 2:
        return 0.0
    return coef * float(sum(np.linalg.norm(b - a) for a, b, _n, _l in polygon_edges(poly)))


def _polytope_support_integral_3d(vertices: np.ndarray) -> float:
    """int_{S^2} h_P du = (1/2) sum over edges of length * exterior dihedral
    angle (the integrated mean curvature of the polytope)."""
    hull = ConvexHull(vertices)
    edge_faces: dict = {}
    for fi, simplex in enumerate(hull.simplices):
        for i in range(3):
            a, b = sorted((simplex[i], simplex[(i + 1) % 3]))
            edge_faces.setdefault((a, b), []).append(fi)
    normals = hull.equations[:, :3]
    total = 0.0
    for (a, b), faces in edge_faces.items():
        if len(faces) != 2:
            continue
        n1, n2 = normals[faces[0]], normals[faces[1]]
        cosang = float(np.clip(n1 @ n2 / (np.linalg.norm(n1) * np.linalg.norm(n2)), -1.0, 1.0))
        ang = math.acos(cosang)
        length = float(np.linalg.norm(vertices[a] - vertices[b]))
        total += length * ang
    return 0.5 * total


def sphere_support_integral(body: ConvexBody) -> float:
    """int_{S^{n-1}} h_K(u) du, by exact leaf formulas where available.

    In the plane this is the perimeter (Cauchy); a centered segment
    [-g, g] contributes 2 kappa_{n-1} |g| in any dimension; 3D polytopes
    use the edge/dihedral formula.  Center offsets integrate to zero.
    """
    n = body.dim
    total = 0.0
    for coef, leaf in flatten(body):
        if coef == 0.0:
            continue
        if isinstance(leaf, Ball):
            total += coef * leaf.radius * sphere_surface_area(n)
        elif isinstance(leaf, (Segment, Zonotope)):
            if isinstance(leaf, Segment):
                gen_sum = float(np.linalg.norm(leaf.direction))
            else:
                gen_sum = float(np.linalg.norm(leaf.generator_array, axis=1).sum())
            total += coef * 2.0 * unit_ball_volume(n - 1) * gen_sum
        elif isinstance(leaf, Smooth2D):
            total += coef * _TWO_PI * leaf.cos_coeffs[0]
        elif isinstance(leaf, Polytope):
            if n == 2:
                total += _perimeter_2d_leaf(leaf, coef)
            elif n == 3:
                total += coef * _polytope_support_integral_3d(leaf.vertex_array)
            else:
                grid = build_grid(n)
                total += coef * float(np.dot(grid.weights, leaf._support(grid.nodes)))
        else:  # pragma: no cover
            raise TypeError(f"unsupported leaf {type(leaf).__name__}")
    return total


def ball_mixed_measure(mu: WeightedMeasure, R: float, B: ConvexBody) -> float:
    """mu(R B_2^n; B) = e^{-W(R)} R^{n-1} int_{S^{n-1}} h_B(u) du."""
    if mu.radial is None:
        raise ValueError("ball_mixed_measure requires a radial profile")
    if R <= 0:
        raise ValueError("R must be positive")
    n = mu.dim
    eW = math.exp(-float(mu.radial.W(np.asarray(R))))
    return eW * R ** (n - 1) * sphere_support_integral(B)


def _great_circle_basis(theta: np.ndarray):
    theta = theta / np.linalg.norm(theta)
    probe = np.array([1.0, 0.0, 0.0]) if abs(theta[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e = probe - (probe @ theta) * theta
    e /= np.linalg.norm(e)
    f = np.cross(theta, e)
    return e, f


def great_circle_support_integral(C: ConvexBody, theta, m: int = 2048) -> float:
    """int over S^2 intersect theta-perp of h_C, by the 1D trapezoid rule."""
    theta = np.asarray(theta, dtype=float)
    e, f = _great_circle_basis(theta)
    psi = _TWO_PI * np.arange(m) / m
    pts = np.outer(np.cos(psi), e) + np.outer(np.sin(psi), f)
    return float(C.support(pts).sum() * (_TWO_PI / m))


def _abs_dot_support_integral(C: ConvexBody, theta, resolution: int = 48) -> float:
    """int_{S^2} |<theta, u>| h_C(u) du, on a grid rotated so the kink
    circle coincides with the Gauss-Legendre panel seam at the equator."""
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    e, f = _great_circle_basis(theta)
    Q = np.column_stack([e, f, theta])  # maps e3 -> theta
    grid = build_grid(3, resolution)
    pts = grid.nodes @ Q.T
    vals = np.abs(grid.nodes[:, 2]) * C.support(pts)
    return float(np.dot(grid.weights, vals))


def ball_mixed_second(
    mu: WeightedMeasure, R: float, B: ConvexBody, C: ConvexBody, resolution: int | None = None
) -> float:
    """mu(R B_2^n; B, C) for a rotationally invariant measure:

        e^{-W(R)} [ R^{n-2} (n-1) int h_C dS_{B_2^n[n-2], B[1]}
                    - R^{n-1} W'(R) int <u, grad h_B(u)> h_C(u) du ].

    n = 2 accepts any B (the mixed area measure degenerates to S_B);
    n = 3 needs a zonotopal B, in which case the first term reduces to
    great-circle integrals via the projection formula, and the second uses
    <u, grad h_B(u)> = h_B(u) (1-homogeneity).
    """
    if mu.radial is None:
        raise ValueError("ball_mixed_second requires a radial profile")
    if R <= 0:
        raise ValueError("R must be positive")
    n = mu.dim
    if B.dim != n or C.dim != n:
        raise ValueError("dimension mismatch")
    WR = float(mu.radial.W(np.asarray(R)))
    WpR = float(mu.radial.Wprime(np.asarray(R)))
    eW = math.exp(-WR)
    if n == 2:
        sb = surface_area_measure(B)
        first = sb.integrate(lambda u: C.support(u))
        breaks = np.concatenate([polytopal_normal_angles(B), polytopal_normal_angles(C)])

        def fn(theta):
            u = _unit(theta)
            return B.support(u) * C.support(u)

        second = panel_integral_circle(fn, breaks)
        return eW * (first - R * WpR * second)
    if n == 3:
        smooth, poly = split_smooth_polytopal(B)
        if smooth or any(not isinstance(leaf, (Zonotope, Segment)) for _c, leaf in poly):
            raise ValueError("n >= 3 ball_mixed_second needs a zonotopal B")
        gens = []
        center = np.zeros(3)
        for coef, leaf in poly:
            if isinstance(leaf, Segment):
                gens.append(coef * np.asarray(leaf.direction))
                center += coef * np.asarray(leaf.center)
            else:
                for g in leaf.generator_array:
                    gens.append(coef * g)
                center += coef * np.asarray(leaf.center)
        res = resolution or 48
        first = 0.0
        second = 0.0
        for g in gens:
            a = float(np.linalg.norm(g))
            if a == 0.0:
                continue
            axis = g / a
            first += a * 2.0 * great_circle_support_integral(C, axis)
            second += a * _abs_dot_support_integral(C, axis, res)
        if np.linalg.norm(center) > 0:
            grid = build_grid(3, res)
            second += float(np.dot(grid.weights, (grid.nodes @ center) * C.support(grid.nodes)))
        return eW * (R ** (n - 2) * first - R ** (n - 1) * WpR * second)
    raise ValueError("ball_mixed_second supports n in {2, 3}")


# -- integral identities --------------------------------------------------------------


@dataclass
class IdentityChecks:
    """Scaled residuals of the mixed-measure integral identities."""

    measure_vs_mixed_integral: float
    mixed_vs_second_integral: float
    lebesgue_homogeneous: float
    second_vs_pure_derivative: float

    def max_residual(self) -> float:
        return max(
            self.measure_vs_mixed_integral,
            self.mixed_vs_second_integral,
            self.lebesgue_homogeneous,
            self.second_vs_pure_derivative,
        )


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def integral_identity_checks(
    mu: WeightedMeasure, K: ConvexBody, A: ConvexBody, C: ConvexBody, nodes: int = 24
) -> IdentityChecks:
    """Residuals of: mu(K) = int_0^1 mu(tK;K) dt;
    mu(A;C) = int_0^1 mu(tA;A,C) dt; the Lebesgue homogeneity identity
    lambda(A;C) = (1/(n-1)) lambda(A;A,C); and mu(A;C,C) equal to the pure
    second derivative of s -> mu(A+sC)."""
    x, w = _gl_nodes(nodes)
    mu_k = measure_of_body(mu, K, method="polarradial").value
    vals = np.array([mixed_measure(mu, Scale(t, K), K) for t in x])
    r1 = _rel(mu_k, float(np.dot(w, vals)))

    mk = mixed_measure(mu, A, C)
    vals2 = np.array([mixed_second_2d(mu, Scale(t, A), A, C) for t in x])
    r2 = _rel(mk, float(np.dot(w, vals2)))

    leb = lebesgue(A.dim)
    r3 = _rel(
        mixed_measure(leb, A, C),
        mixed_second_2d(leb, A, A, C) / (A.dim - 1),
    )

    closed = mixed_second_2d(mu, A, C, C)
    fd = mixed_second_fd(mu, A, C, C)
    r4 = abs(closed - fd.value) / max(1.0, abs(closed), abs(fd.value))
    return IdentityChecks(r1, r2, r3, r4)


def result_record(quantity: str, bodies: dict, measure: str, method: str, value: float, error: float) -> dict:
    """The JSON result schema used by the CLI."""
    return {
        "quantity": quantity,
        "bodies": bodies,
        "measure": measure,
        "method": method,
        "value": value,
        "error_estimate": error,
    }
