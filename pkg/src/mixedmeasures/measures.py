"""Weighted measures with density, and the machinery to evaluate mu(K).

A :class:`WeightedMeasure` is a density phi with gradient, plus an
optional radial log-profile W with phi(x) = exp(-W(|x|)).  Built-ins are
Lebesgue, the standard Gaussian, and the power-law family
alpha * exp(-|x|^p / beta).  The Gaussian normalization is folded into W
(W(r) = r^2/2 + (n/2) log 2pi) so exp(-W(R)) literally equals the density
at radius R.

mu(K) is computed by one of three methods:

* ``boundary2d`` -- fan integration from an interior point, either over
  a polygon triangulation or over the smooth boundary curve
  x(theta) = grad h(theta).
* ``polarradial`` -- int_{S^{n-1}} int_0^{rho_K(u)} exp(-W(r)) r^{n-1} dr du
  with the radial function rho_K evaluated through support dominance on a
  finite grid (an outer approximation whose bias is removed by Richardson
  extrapolation over two grid resolutions).
* ``montecarlo`` -- rejection sampling in the support bounding box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special as sp_special

from .bodies import (
    ConvexBody,
    Scale,
    boundary_polygon_2d,
    fourier_coefficients,
    is_polytopal,
    is_smooth_2d,
    polygon_area,
    smooth_support_2d,
)
from .quadrature import SphereGrid, build_grid

__all__ = [
    "WeightedMeasure",
    "RadialProfile",
    "Estimate",
    "lebesgue",
    "gaussian",
    "power_law",
    "measure_of_body",
    "radial_profile_integral",
    "interval_mass",
    "gaussian_cdf",
    "gaussian_quantile",
    "ConcavityProfile",
    "profile_factory",
    "support_min_on_grid",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RadialProfile:
    """phi(x) = exp(-W(|x|)); W and W' act elementwise on arrays of r >= 0."""

    W: Callable
    Wprime: Callable


@dataclass(frozen=True)
class WeightedMeasure:
    dim: int
    name: str
    density: Callable  # (..., n) -> (...)
    grad_density: Callable  # (..., n) -> (..., n)
    radial: RadialProfile | None = None
    params: tuple = ()

    def score(self, x):
        """nabla phi / phi, evaluated pointwise."""
        x = np.asarray(x, dtype=float)
        return self.grad_density(x) / self.density(x)[..., None]


def lebesgue(dim: int) -> WeightedMeasure:
    def density(x):
        x = np.asarray(x, dtype=float)
        return np.ones(x.shape[:-1])

    def grad(x):
        x = np.asarray(x, dtype=float)
        return np.zeros_like(x)

    profile = RadialProfile(W=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                            Wprime=lambda r: np.zeros_like(np.asarray(r, dtype=float)))
    return WeightedMeasure(dim, "lebesgue", density, grad, profile)


def gaussian(dim: int) -> WeightedMeasure:
    norm = (_TWO_PI) ** (-dim / 2.0)
    half_log = 0.5 * dim * math.log(_TWO_PI)

    def density(x):
        x = np.asarray(x, dtype=float)
        return norm * np.exp(-0.5 * np.sum(x * x, axis=-1))

    def grad(x):
        x = np.asarray(x, dtype=float)
        return -x * density(x)[..., None]

    profile = RadialProfile(
        W=lambda r: 0.5 * np.asarray(r, dtype=float) ** 2 + half_log,
        Wprime=lambda r: np.asarray(r, dtype=float),
    )
    return WeightedMeasure(dim, "gaussian", density, grad, profile)


def power_law(alpha: float, beta: float, p: float, dim: int) -> WeightedMeasure:
    """phi(x) = alpha * exp(-|x|^p / beta), with W(r) = r^p/beta - log alpha."""
    if alpha <= 0 or beta <= 0 or p < 1:
        raise ValueError("power law needs alpha, beta > 0 and p >= 1")
    log_alpha = math.log(alpha)

    def density(x):
        x = np.asarray(x, dtype=float)
        r = np.sqrt(np.sum(x * x, axis=-1))
        return alpha * np.exp(-(r**p) / beta)

    def grad(x):
        x = np.asarray(x, dtype=float)
        r = np.sqrt(np.sum(x * x, axis=-1))
        safe = np.where(r == 0.0, 1.0, r)
        coef = -(p / beta) * safe ** (p - 2.0) * density(x)
        coef = np.where(r == 0.0, 0.0, coef)
        return coef[..., None] * x

    profile = RadialProfile(
        W=lambda r: np.asarray(r, dtype=float) ** p / beta - log_alpha,
        Wprime=lambda r: (p / beta) * np.asarray(r, dtype=float) ** (p - 1.0),
    )
    return WeightedMeasure(dim, "power", density, grad, profile, params=(alpha, beta, p))


class Estimate(NamedTuple):
    value: float
    error: float


# -- 1D adaptive Gauss-Legendre ----------------------------------------------

_GL_CACHE: dict = {}


def _gl_nodes(order: int):
    if order not in _GL_CACHE:
        x, w = leggauss(order)
        _GL_CACHE[order] = (0.5 * (x + 1.0), 0.5 * w)  # on [0, 1]
    return _GL_CACHE[order]


def adaptive_gauss(fn, a: float, b: float, rel_tol: float = 1e-12, max_panels: int = 512) -> float:
    """Composite Gauss-Legendre with panel doubling until ``rel_tol``."""
    if b <= a:
        return 0.0
    x, w = _gl_nodes(24)
    panels = 2
    prev = None
    while panels <= max_panels:
        edges = np.linspace(a, b, panels + 1)
        lengths = np.diff(edges)
        pts = edges[:-1, None] + lengths[:, None] * x[None, :]
        vals = fn(pts.ravel()).reshape(pts.shape)
        total = float(np.sum(lengths[:, None] * w[None, :] * vals))
        if prev is not None and abs(total - prev) <= rel_tol * max(abs(total), 1e-300):
            return total
        prev = total
        panels *= 2
    return prev


def radial_profile_integral(mu: WeightedMeasure, R: float, rel_tol: float = 1e-11) -> float:
    """J(R) = n int_0^1 exp(W(R) - W(Rt)) t^{n-1} dt.

    Equals I_mu(R) / kappa_n; J == 1 identically for Lebesgue, and
    J(R) -> 1 as R -> 0 for any continuous profile.
    """
    if mu.radial is None:
        raise ValueError("measure has no radial profile")
    if R <= 0:
        raise ValueError("R must be positive")
    n = mu.dim
    WR = float(mu.radial.W(np.asarray(R)))

    def fn(t):
        t = np.asarray(t, dtype=float)
        return np.exp(WR - mu.radial.W(R * t)) * t ** (n - 1)

    return n * adaptive_gauss(fn, 0.0, 1.0, rel_tol)


# -- Gaussian cdf / quantile ---------------------------------------------------


def gaussian_cdf(x):
    """Phi(x), accurate to ~1e-15 absolute (complementary-error-function based)."""
    return sp_special.ndtr(x)


def gaussian_quantile(p):
    """Phi^{-1}(p) for p in (0, 1); a Newton step on top of the rational
    initializer keeps |Phi(Phi^{-1}(p)) - p| below 1e-13."""
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr <= 0.0) or np.any(p_arr >= 1.0):
        raise ValueError("quantile requires p in (0, 1)")
    x = sp_special.ndtri(p_arr)
    for _ in range(2):
        pdf = np.exp(-0.5 * x * x) / math.sqrt(_TWO_PI)
        x = x - (sp_special.ndtr(x) - p_arr) / np.maximum(pdf, 1e-300)
    return float(x) if np.isscalar(p) else x


# -- interval masses (1D) ------------------------------------------------------


def interval_mass(mu: WeightedMeasure, a: float, b: float) -> float:
    """mu([a, b]) for a one-dimensional measure."""
    if mu.dim != 1:
        raise ValueError("interval_mass is 1D only")
    if b <= a:
        return 0.0
    if mu.name == "gaussian":
        return float(sp_special.ndtr(b) - sp_special.ndtr(a))
    return adaptive_gauss(lambda x: mu.density(np.asarray(x)[:, None]), a, b)


# -- support evaluation helpers ------------------------------------------------


def support_min_on_grid(body: ConvexBody, grid: SphereGrid) -> float:
    return float(np.min(body.support(grid.nodes)))


def _outer_radial(body: ConvexBody, grid: SphereGrid, h: np.ndarray | None = None) -> np.ndarray:
    """Radial function of the outer support polytope:
    rho(u) = min over grid directions v of h(v) / <u, v>_+ ."""
    if h is None:
        h = body.support(grid.nodes)
    if np.min(h) <= 0.0:
        raise ValueError("origin is not interior to the body (support not positive on grid)")
    nodes = grid.nodes
    m = grid.size
    if grid.kind == "Trapezoid2D":
        # <u_i, u_{i+d}> = cos(2 pi d / M): a circulant min.
        rho = np.full(m, np.inf)
        quarter = m // 4
        for d in range(-quarter, quarter + 1):
            c = math.cos(_TWO_PI * d / m)
            if c <= 1e-12:
                continue
            rho = np.minimum(rho, np.roll(h, -d) / c)
        return rho
    rho = np.full(m, np.inf)
    chunk = max(1, int(4e6 // m))
    for start in range(0, m, chunk):
        block = nodes[start : start + chunk] @ nodes.T
        with np.errstate(divide="ignore"):
            cand = np.where(block > 1e-12, h[None, :] / block, np.inf)
        rho[start : start + chunk] = cand.min(axis=1)
    return rho


def _radial_mass(mu: WeightedMeasure, rho: np.ndarray, panels: int = 4, order: int = 24) -> np.ndarray:
    """int_0^{rho} exp(-W(r)) r^{n-1} dr, vectorized over rho."""
    n = mu.dim
    x, w = _gl_nodes(order)
    xs = (np.arange(panels)[:, None] + x[None, :]).ravel() / panels
    ws = np.tile(w / panels, panels)
    r = rho[:, None] * xs[None, :]
    vals = np.exp(-mu.radial.W(r)) * r ** (n - 1)
    return rho * (vals @ ws)


def _polar_radial_once(mu: WeightedMeasure, body: ConvexBody, resolution: int, seed: int) -> float:
    grid = build_grid(mu.dim, resolution, seed)
    rho = _outer_radial(body, grid)
    inner = _radial_mass(mu, rho)
    return float(np.dot(grid.weights, inner))


def _polar_radial(mu, body, resolution, seed) -> Estimate:
    coarse = _polar_radial_once(mu, body, resolution, seed)
    fine = _polar_radial_once(mu, body, 2 * resolution, seed)
    # Outer-approximation bias is O(resolution^-2); extrapolate it away.
    value = fine + (fine - coarse) / 3.0
    err = abs(fine - coarse) / 3.0 + 1e-14 * abs(value)
    return Estimate(value, err)


# -- boundary (fan) integration in the plane -----------------------------------


def _triangle_fan_integral(mu, polygon: np.ndarray, rel_tol: float = 1e-10) -> Estimate:
    """Integrate phi over a convex polygon: fan from the centroid, tensor
    Gauss on each triangle, adaptive 4-way subdivision."""
    poly = np.asarray(polygon, dtype=float)
    if len(poly) < 3:
        return Estimate(0.0, 0.0)
    centroid = poly.mean(axis=0)
    x, w = _gl_nodes(12)
    ww = np.outer(w, w)

    def tensor(p, a, b):
        area2 = abs(float(np.cross(a - p, b - p)))
        if area2 == 0.0:
            return 0.0
        s = x[:, None]
        t = x[None, :]
        pts = (
            p[None, None, :]
            + s[..., None] * (1.0 - t)[..., None] * (a - p)[None, None, :]
            + s[..., None] * t[..., None] * (b - p)[None, None, :]
        )
        vals = mu.density(pts.reshape(-1, 2)).reshape(len(x), len(x))
        return area2 * float(np.sum(ww * (x[:, None] * vals)))

    total = 0.0
    err = 0.0
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        stack = [(centroid, a, b, tensor(centroid, a, b), 0)]
        tri_total = 0.0
        tri_err = 0.0
        while stack:
            p, u, v, parent, depth = stack.pop()
            if depth >= 6:
                tri_total += parent
                tri_err += abs(parent) * 1e-12
                continue
            mpu, muv, mvp = 0.5 * (p + u), 0.5 * (u + v), 0.5 * (v + p)
            kids = [(p, mpu, mvp), (mpu, u, muv), (mvp, muv, v), (mpu, muv, mvp)]
            vals = [tensor(*k) for k in kids]
            child_sum = sum(vals)
            if abs(child_sum - parent) <= rel_tol * max(abs(child_sum), 1e-300):
                tri_total += child_sum
                tri_err += abs(child_sum - parent)
            else:
                stack.extend((k[0], k[1], k[2], val, depth + 1) for k, val in zip(kids, vals))
        total += tri_total
        err += tri_err
    return Estimate(total, err + 1e-14 * abs(total))


def _mixed_fan_integral(mu, body: ConvexBody, order: int = 24) -> Estimate:
    """Integrate phi over a planar tree mixing smooth and polytopal leaves.

    The boundary splits exactly into smooth arcs (one per angular panel
    between consecutive polytopal edge normals, where the exposed vertex of
    the polytopal part is constant) and straight edges (the polytopal edges
    translated by the smooth part's gradient).  Arcs are fanned from an
    interior point with Gauss-Legendre panels; edges contribute plain
    triangles.  Everything here is smooth in Minkowski combinations of the
    leaves, which is what the finite-difference stencils rely on.
    """
    from .bodies import Scale as _Scale, Sum as _Sum, split_smooth_polytopal

    smooth_terms, poly_terms = split_smooth_polytopal(body)
    if not poly_terms:
        return _smooth_fan_integral(mu, body, 1024)
    if not smooth_terms:
        return _triangle_fan_integral(mu, boundary_polygon_2d(body))

    parts = [_Scale(c, leaf) if c != 1.0 else leaf for c, leaf in poly_terms]
    poly_tree = parts[0] if len(parts) == 1 else _Sum(tuple(parts))
    polygon = boundary_polygon_2d(poly_tree)
    sparts = [_Scale(c, leaf) if c != 1.0 else leaf for c, leaf in smooth_terms]
    smooth_tree = sparts[0] if len(sparts) == 1 else _Sum(tuple(sparts))
    c, s = fourier_coefficients(smooth_tree)

    from .surface import polygon_edges

    edges = polygon_edges(polygon)
    normals = np.array([math.atan2(n[1], n[0]) % _TWO_PI for _a, _b, n, _l in edges])

    # Interior point: average of boundary points over a fixed angle set.
    probe = _TWO_PI * np.arange(64) / 64
    up = np.column_stack([np.cos(probe), np.sin(probe)])
    p = body.support_gradient(up).mean(axis=0)

    # Smooth arcs between consecutive edge normals.
    br = np.sort(normals)
    panel_edges = np.concatenate([br, [br[0] + _TWO_PI]]) if br.size else np.array([0.0, _TWO_PI])
    x, w = _gl_nodes(order)
    thetas, weights = [], []
    for a, b in zip(panel_edges[:-1], panel_edges[1:]):
        if b - a <= 1e-14:
            continue
        pieces = max(1, int(math.ceil((b - a) / (math.pi / 16))))
        sub = np.linspace(a, b, pieces + 1)
        for lo, hi in zip(sub[:-1], sub[1:]):
            thetas.append(lo + (hi - lo) * x)
            weights.append((hi - lo) * w)
    thetas = np.concatenate(thetas)
    weights = np.concatenate(weights)
    u = np.column_stack([np.cos(thetas), np.sin(thetas)])
    uperp = np.column_stack([-np.sin(thetas), np.cos(thetas)])
    xb = body.support_gradient(u)  # arc boundary point (vertex part constant per panel)
    k = np.arange(c.size)
    kt = np.multiply.outer(thetas, k)
    f_smooth = np.cos(kt) @ ((1 - k * k) * c) + np.sin(kt) @ ((1 - k * k) * s)
    jac = f_smooth * np.cross(xb - p, uperp)
    sg, wg = _gl_nodes(32)
    pts = p[None, None, :] + sg[None, :, None] * (xb - p)[:, None, :]
    vals = mu.density(pts.reshape(-1, 2)).reshape(len(thetas), sg.size)
    inner = (vals * (sg * wg)[None, :]).sum(axis=1)
    total = float(np.dot(weights, jac * inner))

    # Straight edges, translated by the smooth part's gradient at their normal.
    x16, w16 = _gl_nodes(16)
    ww = np.outer(w16, w16)
    for a, b, normal, _length in edges:
        offset = smooth_tree.support_gradient(normal)
        pa, pb = a + offset, b + offset
        area2 = float(np.cross(pa - p, pb - p))
        if abs(area2) < 1e-300:
            continue
        ss = x16[:, None, None]
        tt = x16[None, :, None]
        tri_pts = p[None, None, :] + ss * (1.0 - tt) * (pa - p)[None, None, :] + ss * tt * (pb - p)[None, None, :]
        tri_vals = mu.density(tri_pts.reshape(-1, 2)).reshape(len(x16), len(x16))
        total += area2 * float(np.sum(ww * (x16[:, None] * tri_vals)))
    return Estimate(total, 1e-11 * abs(total) + 1e-15)


def _smooth_fan_integral(mu, body: ConvexBody, resolution: int) -> Estimate:
    """Integrate phi over a C^2_+ planar body via the boundary curve
    x(theta) = grad h(theta) and radial fanning from an interior point."""
    m = resolution
    theta = _TWO_PI * np.arange(m) / m
    h = smooth_support_2d(body, theta, 0)
    hp = smooth_support_2d(body, theta, 1)
    f = h + smooth_support_2d(body, theta, 2)
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    uperp = np.column_stack([-np.sin(theta), np.cos(theta)])
    xb = h[:, None] * u + hp[:, None] * uperp
    p = xb.mean(axis=0)
    jac = f * np.cross(xb - p, uperp)  # x'(theta) = f(theta) u'(theta)
    s, w = _gl_nodes(32)
    pts = p[None, None, :] + s[None, :, None] * (xb - p)[:, None, :]
    vals = mu.density(pts.reshape(-1, 2)).reshape(m, s.size)
    inner = (vals * (s * w)[None, :]).sum(axis=1)
    contrib = jac * inner
    total = float(contrib.sum() * (_TWO_PI / m))
    half = float(contrib[::2].sum() * (_TWO_PI / (m // 2)))
    return Estimate(total, abs(total - half) + 1e-14 * abs(total))


# -- Monte Carlo ----------------------------------------------------------------


def _bounding_box(body: ConvexBody):
    n = body.dim
    eye = np.eye(n)
    hi = body.support(eye)
    lo = -body.support(-eye)
    return np.atleast_1d(lo), np.atleast_1d(hi)


def _monte_carlo(mu, body, budget: int, seed: int, resolution: int | None = None) -> Estimate:
    rng = np.random.default_rng(seed)
    lo, hi = _bounding_box(body)
    box_vol = float(np.prod(hi - lo))
    if box_vol <= 0.0:
        return Estimate(0.0, 0.0)
    grid = build_grid(body.dim, resolution or (512 if body.dim == 2 else 24), seed)
    h = body.support(grid.nodes)
    vals = np.empty(budget)
    filled = 0
    chunk = 200_000
    while filled < budget:
        k = min(chunk, budget - filled)
        x = rng.uniform(lo, hi, size=(k, body.dim))
        inside = np.max(x @ grid.nodes.T - h[None, :], axis=1) <= 0.0
        dens = np.where(inside, mu.density(x), 0.0)
        vals[filled : filled + k] = dens
        filled += k
    mean = float(vals.mean())
    std = float(vals.std(ddof=1)) if budget > 1 else 0.0
    # The support-dominance membership test over-approximates the body by
    # its outer polytope; include that bias in the estimate.
    step = (2.0 * math.pi / grid.size) if body.dim == 2 else (math.pi / math.sqrt(grid.size))
    bias = box_vol * mean * step * step / 4.0
    return Estimate(box_vol * mean, box_vol * std / math.sqrt(budget) + bias)


# -- public entry point ----------------------------------------------------------


def measure_of_body(
    mu: WeightedMeasure,
    body: ConvexBody,
    method: str = "auto",
    budget: int = 200_000,
    seed: int = 0,
    resolution: int | None = None,
    extrapolate: bool = True,
) -> Estimate:
    """mu(K) with an error estimate.

    ``method`` is one of ``auto``, ``boundary2d``, ``polarradial``,
    ``montecarlo``.  ``budget`` is the Monte Carlo sample count;
    ``resolution`` overrides the sphere-grid size for ``polarradial``.
    ``extrapolate=False`` pins ``polarradial`` to a single grid: the value
    is then biased by the outer support polytope, but the bias is a
    piecewise-linear functional of the support values, which is what the
    finite-difference stencils need to cancel it.
    """
    if mu.dim != body.dim:
        raise ValueError("measure/body dimension mismatch")
    method = method.lower()
    if not np.isfinite(mu.density(np.zeros(mu.dim))):
        raise ValueError("density is not finite")

    if method == "auto":
        if body.dim == 1:
            a = -body.support(np.array([-1.0]))
            b = body.support(np.array([1.0]))
            return Estimate(interval_mass(mu, a, b), 1e-13)
        if body.dim == 2 and is_polytopal(body):
            return _triangle_fan_integral(mu, boundary_polygon_2d(body))
        if body.dim == 2 and is_smooth_2d(body):
            return _smooth_fan_integral(mu, body, resolution or 1024)
        if body.dim == 2:
            return _mixed_fan_integral(mu, body)
        if body.dim == 3:
            from .ballsum import ball_polytopal_measure, decompose_ball_polytopal

            parts = decompose_ball_polytopal(body)
            if parts is not None:
                return ball_polytopal_measure(mu, *parts)
        if mu.radial is not None:
            return _polar_radial(mu, body, resolution or _default_polar_resolution(mu.dim), seed)
        return _monte_carlo(mu, body, budget, seed)

    if method == "boundary2d":
        if body.dim != 2:
            raise ValueError("boundary2d requires dimension 2")
        if is_polytopal(body):
            return _triangle_fan_integral(mu, boundary_polygon_2d(body))
        if is_smooth_2d(body):
            return _smooth_fan_integral(mu, body, resolution or 1024)
        raise ValueError("boundary2d needs a pure polygon or a C^2 boundary parametrization")

    if method == "polarradial":
        if mu.radial is None:
            raise ValueError("polarradial requires a radial profile")
        if body.dim == 1:
            a = -body.support(np.array([-1.0]))
            b = body.support(np.array([1.0]))
            if a >= 0.0 or b <= 0.0:
                raise ValueError("origin is not interior to the body (support not positive on grid)")
            return Estimate(interval_mass(mu, a, b), 1e-13)
        res = resolution or _default_polar_resolution(mu.dim)
        if not extrapolate:
            value = _polar_radial_once(mu, body, res, seed)
            grid_step = (2.0 * math.pi / res) if mu.dim == 2 else (math.pi / res)
            return Estimate(value, abs(value) * grid_step**2)
        return _polar_radial(mu, body, res, seed)

    if method == "montecarlo":
        return _monte_carlo(mu, body, budget, seed)

    raise ValueError(f"unknown method {method!r}")


def _default_polar_resolution(dim: int) -> int:
    if dim == 2:
        return 1024
    if dim == 3:
        return 32
    return 64


def measure_of_scaled_ball(mu: WeightedMeasure, R: float) -> float:
    """mu(R * B_2^n) for a radial measure: n kappa_n int_0^R e^{-W} r^{n-1} dr."""
    if mu.radial is None:
        raise ValueError("measure has no radial profile")
    if R <= 0:
        return 0.0
    n = mu.dim
    from .quadrature import sphere_surface_area

    def fn(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-mu.radial.W(r)) * r ** (n - 1)

    return sphere_surface_area(n) * adaptive_gauss(fn, 0.0, R, 1e-13)


# -- concavity profiles -----------------------------------------------------------


@dataclass(frozen=True)
class ConcavityProfile:
    """A monotone invertible F with derivatives, for F-concavity slack
    computations: mu((1-t)K + tL) >= F^{-1}((1-t)F(mu K) + t F(mu L))."""

    kind: str
    F: Callable
    Fprime: Callable
    Fsecond: Callable
    exponent: float | None = None

    def describe(self) -> str:
        return self.kind if self.exponent is None else f"{self.kind}({self.exponent:g})"


def profile_factory(kind: str, mu: WeightedMeasure, n: int | None = None) -> ConcavityProfile:
    """Log, Power(1/n), or Ehrhard profile.  Ehrhard is Gaussian-only."""
    kind = kind.lower()
    if n is None:
        n = mu.dim
    if kind == "log":
        return ConcavityProfile(
            "log",
            F=lambda x: math.log(x),
            Fprime=lambda x: 1.0 / x,
            Fsecond=lambda x: -1.0 / (x * x),
        )
    if kind == "power":
        a = 1.0 / n
        return ConcavityProfile(
            "power",
            F=lambda x: x**a,
            Fprime=lambda x: a * x ** (a - 1.0),
            Fsecond=lambda x: a * (a - 1.0) * x ** (a - 2.0),
            exponent=a,
        )
    if kind == "ehrhard":
        if mu.name != "gaussian":
            raise ValueError("Ehrhard profile requires the Gaussian measure")

        def F(x):
            return gaussian_quantile(x)

        def Fprime(x):
            t = gaussian_quantile(x)
            return math.sqrt(_TWO_PI) * math.exp(0.5 * t * t)

        def Fsecond(x):
            t = gaussian_quantile(x)
            pdf = math.exp(-0.5 * t * t) / math.sqrt(_TWO_PI)
            return t / (pdf * pdf)

        return ConcavityProfile("ehrhard", F=F, Fprime=Fprime, Fsecond=Fsecond)
    raise ValueError(f"unknown profile kind {kind!r}")
