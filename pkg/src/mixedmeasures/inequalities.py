"""Slack computations for the weighted Brunn-Minkowski inequalities.

Every operation returns a :class:`SlackReport` with lhs, rhs,
slack = lhs - rhs oriented so nonnegative slack means the inequality
holds, and a propagated error budget.  A ``violated`` verdict requires
slack < -budget; |slack| <= budget is ``inconclusive``.  Numerical
verification must never report a false violation of a proven theorem, so
budgets are conservative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bodies import ConvexBody, Scale, Sum, boundary_polygon_2d, is_polytopal, polygon_area
from .measures import (
    ConcavityProfile,
    WeightedMeasure,
    gaussian,
    interval_mass,
    lebesgue,
    measure_of_body,
    radial_profile_integral,
)
from .mixed import (
    ball_mixed_measure,
    ball_mixed_second,
    lebesgue_volume,
    mixed_measure,
    mixed_second_2d,
    sphere_support_integral,
)
from .quadrature import build_grid, integrate, unit_ball_volume

__all__ = [
    "SlackReport",
    "minkowski_first",
    "minkowski_second",
    "reverse_quadratic",
    "s_concave_bracket",
    "local_logsubmod",
    "logsubmod_ratio",
    "zonoid_ball_check",
    "scalar_zonoid_condition",
    "hom_integral_identity_check",
    "supermodularity_classify",
    "SupermodularityReport",
    "interval_submodularity_check",
    "kappa_ratio",
    "zonoid_constant",
]

HOLDS = "holds"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass
class SlackReport:
    inequality: str
    lhs: float
    rhs: float
    slack: float
    error_budget: float
    verdict: str
    inputs: dict = field(default_factory=dict)
    notes: str = ""

    @staticmethod
    def build(inequality: str, lhs: float, rhs: float, budget: float, inputs=None, notes=""):
        slack = lhs - rhs
        if slack < -budget:
            verdict = VIOLATED
        elif abs(slack) <= budget:
            verdict = INCONCLUSIVE
        else:
            verdict = HOLDS
        return SlackReport(inequality, lhs, rhs, slack, budget, verdict, inputs or {}, notes)

    def to_json(self) -> str:
        payload = {
            "inequality": self.inequality,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "error_budget": self.error_budget,
            "verdict": self.verdict,
            "inputs": self.inputs,
            "notes": self.notes,
        }
        return json.dumps(payload, sort_keys=True)


def _measure_value(mu, body) -> tuple:
    est = measure_of_body(mu, body)
    return est.value, est.error


# -- Minkowski first/second for F-concave measures ------------------------------


def minkowski_first(
    mu: WeightedMeasure, profile: ConcavityProfile, K: ConvexBody, L: ConvexBody, inputs=None
) -> SlackReport:
    """slack of mu(K;L) >= mu(K;K) + (F(mu L) - F(mu K)) / F'(mu K).

    The caller asserts that mu is F-concave on a class containing K and L.
    F'(mu(K)) = 0 short-circuits to a trivially holding report.
    """
    mK, eK = _measure_value(mu, K)
    mL, eL = _measure_value(mu, L)
    fp = profile.Fprime(mK)
    if fp == 0.0:
        return SlackReport.build(
            "minkowski_first", 0.0, 0.0, 0.0, inputs, notes="trivial: F'(mu(K)) = 0"
        )
    mKL = mixed_measure(mu, K, L)
    mKK = mixed_measure(mu, K, K)
    lhs = mKL
    rhs = mKK + (profile.F(mL) - profile.F(mK)) / fp
    # Propagate measure errors through F and through the mixed measures.
    dF = abs(profile.Fprime(mL)) * eL + abs(profile.Fprime(mK)) * eK
    dRatio = dF / abs(fp) + abs(profile.F(mL) - profile.F(mK)) * abs(profile.Fsecond(mK)) * eK / fp**2
    budget = dRatio + 1e-9 * (abs(lhs) + abs(rhs)) + 1e-12
    notes = ""
    report = SlackReport.build("minkowski_first", lhs, rhs, budget, inputs, notes)
    if report.verdict == INCONCLUSIVE:
        report.notes = "slack within budget: equality case of the concavity inequality"
    return report


def minkowski_second(
    mu: WeightedMeasure, profile: ConcavityProfile, K: ConvexBody, L: ConvexBody, inputs=None
) -> SlackReport:
    """slack of -F''/F' (mu(K;L) - mu(K;K))^2 >= mu(K;L,L) - 2mu(K;K,L) + mu(K;K,K).

    Requires a C^2_+ K (polytopal K is rejected, not smoothed silently).
    """
    from .bodies import is_smooth_2d

    if not is_smooth_2d(K):
        raise ValueError("minkowski_second requires a C^2_+ planar K")
    mK, eK = _measure_value(mu, K)
    fp = profile.Fprime(mK)
    fpp = profile.Fsecond(mK)
    if fp == 0.0:
        return SlackReport.build(
            "minkowski_second", 0.0, 0.0, 0.0, inputs, notes="trivial: F'(mu(K)) = 0"
        )
    mKL = mixed_measure(mu, K, L)
    mKK = mixed_measure(mu, K, K)
    sLL = mixed_second_2d(mu, K, L, L)
    sKL = mixed_second_2d(mu, K, K, L)
    sKK = mixed_second_2d(mu, K, K, K)
    lhs = -(fpp / fp) * (mKL - mKK) ** 2
    rhs = sLL - 2.0 * sKL + sKK
    scale = abs(lhs) + abs(rhs) + abs(fpp / fp) * (abs(mKL) + abs(mKK))
    budget = 1e-8 * max(1.0, scale) + abs(fpp / fp) * 2.0 * abs(mKL - mKK) * 1e-9 + 10.0 * eK
    return SlackReport.build("minkowski_second", lhs, rhs, budget, inputs)


def reverse_quadratic(
    mu: WeightedMeasure, profile: ConcavityProfile, A: ConvexBody, B: ConvexBody, C: ConvexBody,
    inputs=None,
) -> SlackReport:
    """Reverse quadratic inequality for mixed measures:

    F' mu(A;B,B) mu(A;C,C) + F'' (mu^2(A;B) mu(A;C,C) + mu^2(A;C) mu(A;B,B))
    >= F' mu^2(A;B,C) + 2 F'' mu(A;C) mu(A;B) mu(A;B,C).
    """
    mA, eA = _measure_value(mu, A)
    fp = profile.Fprime(mA)
    fpp = profile.Fsecond(mA)
    if fp == 0.0:
        return SlackReport.build(
            "reverse_quadratic", 0.0, 0.0, 0.0, inputs, notes="trivial: F'(mu(A)) = 0"
        )
    aB = mixed_measure(mu, A, B)
    aC = mixed_measure(mu, A, C)
    aBB = mixed_second_2d(mu, A, B, B)
    aCC = mixed_second_2d(mu, A, C, C)
    aBC = mixed_second_2d(mu, A, B, C)
    lhs = fp * aBB * aCC + fpp * (aB**2 * aCC + aC**2 * aBB)
    rhs = fp * aBC**2 + 2.0 * fpp * aC * aB * aBC
    scale = sum(abs(x) for x in (lhs, rhs)) + abs(fp) * (aBB**2 + aCC**2) + 1.0
    budget = 1e-8 * scale + 10.0 * abs(fpp) * eA * (abs(aB) + abs(aC)) ** 2
    return SlackReport.build("reverse_quadratic", lhs, rhs, budget, inputs)


def s_concave_bracket(
    mu: WeightedMeasure, s: float, A: ConvexBody, B: ConvexBody, C: ConvexBody, inputs=None
) -> SlackReport:
    """Two-sided bracket for s-concave measures, s in (0, 1):

    (1 - sqrt(1 + mu(A) Gamma)) (1-s) <= mu(A) mu(A;B,C) / (mu(A;C) mu(A;B))
                                      <= (1 + sqrt(1 + mu(A) Gamma)) (1-s).

    The slack reported is the distance from the ratio to the nearer bound
    (nonnegative iff the ratio lies inside the bracket).
    """
    if not 0.0 < s < 1.0:
        raise ValueError("s must lie in (0, 1)")
    mA, eA = _measure_value(mu, A)
    aB = mixed_measure(mu, A, B)
    aC = mixed_measure(mu, A, C)
    aBB = mixed_second_2d(mu, A, B, B)
    aCC = mixed_second_2d(mu, A, C, C)
    aBC = mixed_second_2d(mu, A, B, C)
    one_minus_s = 1.0 - s
    gamma = (
        mA * aBB * aCC / (one_minus_s**2 * aB**2 * aC**2)
        - aBB / (one_minus_s * aB**2)
        - aCC / (one_minus_s * aC**2)
    )
    disc = 1.0 + mA * gamma
    budget = 1e-7 * (1.0 + abs(gamma) * mA) + 10.0 * eA
    if disc < -budget:
        raise ValueError(f"bracket discriminant 1 + mu(A) Gamma = {disc} is negative beyond budget")
    root = math.sqrt(max(disc, 0.0))
    ratio = mA * aBC / (aC * aB)
    low = (1.0 - root) * one_minus_s
    high = (1.0 + root) * one_minus_s
    slack = min(ratio - low, high - ratio)
    report = SlackReport.build("s_concave_bracket", slack, 0.0, budget, inputs)
    report.lhs, report.rhs = ratio, low
    report.inputs = dict(report.inputs, bracket_low=low, bracket_high=high, gamma=gamma)
    return report


# -- log-submodularity ------------------------------------------------------------


def local_logsubmod(
    mu: WeightedMeasure, A: ConvexBody, B: ConvexBody, C: ConvexBody, inputs=None
) -> SlackReport:
    """slack of mu(A;B) mu(A;C) >= mu(A) mu(A;B,C) (the local form of
    log-submodularity; evidence for the fixed A only)."""
    mA, eA = _measure_value(mu, A)
    aB = mixed_measure(mu, A, B)
    aC = mixed_measure(mu, A, C)
    aBC = mixed_second_2d(mu, A, B, C)
    lhs = aB * aC
    rhs = mA * aBC
    budget = 1e-8 * (abs(lhs) + abs(rhs) + 1.0) + abs(aBC) * eA
    return SlackReport.build("local_logsubmod", lhs, rhs, budget, inputs,
                             notes="local evidence for this A only")


def logsubmod_ratio(A: ConvexBody, B: ConvexBody, C: ConvexBody) -> float:
    """c(A,B,C) = Vol(A) Vol(A+B+C) / (Vol(A+B) Vol(A+C)).

    The denominator follows the Vol(A+B)*Vol(A+C) reading (the symmetric
    form consistent with the surrounding submodularity results).
    """
    vol_a = lebesgue_volume(A)
    vol_abc = lebesgue_volume(Sum((A, B, C)))
    vol_ab = lebesgue_volume(Sum((A, B)))
    vol_ac = lebesgue_volume(Sum((A, C)))
    denom = vol_ab * vol_ac
    if denom == 0.0:
        raise ZeroDivisionError("degenerate bodies: Vol(A+B) Vol(A+C) = 0")
    return vol_a * vol_abc / denom


# -- zonoid / ball inequalities -----------------------------------------------------


def kappa_ratio(n: int) -> float:
    """kappa_{n-1}^2 / (kappa_{n-2} kappa_n)."""
    return unit_ball_volume(n - 1) ** 2 / (unit_ball_volume(n - 2) * unit_ball_volume(n))


def zonoid_constant(name: str, mu: WeightedMeasure, R: float, n: int) -> float:
    """The admissible constants in front of kappa ratio in the zonoid
    inequality: One (any rotationally invariant log-concave measure),
    AnuR / Anu (power-law densities alpha e^{-|x|^p / beta}), GafGaussian
    and SharpGaussian (Gaussian at R = 1)."""
    name_l = name.lower()
    if name_l == "one":
        return 1.0
    if name_l in ("anur", "anu"):
        if mu.name == "gaussian":
            p, beta = 2.0, 2.0
        elif mu.name == "power":
            _alpha, beta, p = mu.params
        else:
            raise ValueError(f"constant {name} needs a power-law (or Gaussian) measure")
        if name_l == "anur":
            if R**p >= beta * n / p:
                raise ValueError("AnuR requires R^p < beta n / p")
            return (1.0 - p * R**p / (p * beta + beta * n)) * (1.0 + p * R**p / (beta * n - p * R**p))
        if abs(R - 1.0) > 1e-12:
            raise ValueError("Anu is stated at R = 1")
        if p <= 1.0 or beta < 1.0 + 1.0 / (p - 1.0):
            raise ValueError("Anu requires beta >= 1 + 1/(p-1)")
        return math.exp(((n / (n + 1.0)) ** p - 1.0) / beta) * n / (n - 1.0)
    if name_l in ("gafgaussian", "sharpgaussian"):
        if mu.name != "gaussian":
            raise ValueError(f"constant {name} needs the Gaussian measure")
        if abs(R - 1.0) > 1e-12:
            raise ValueError(f"constant {name} is stated at R = 1")
        if name_l == "gafgaussian":
            return (n / (n - 1.0)) * (n + 1.0) / (n + 2.0)
        return math.exp(-(2.0 * n + 1.0) / (2.0 * (n + 1.0) ** 2)) * n / (n - 1.0)
    raise ValueError(f"unknown zonoid constant {name!r}")


def zonoid_ball_check(
    mu: WeightedMeasure, R: float, Z: ConvexBody, C: ConvexBody, constant: str = "One", inputs=None
) -> SlackReport:
    """slack of mu(RB;Z) mu(RB;C) >= const * kappa-ratio * mu(RB) mu(RB;Z,C)
    for a centered zonoid Z and arbitrary convex C."""
    n = mu.dim
    if n not in (2, 3):
        raise ValueError("zonoid_ball_check supports n in {2, 3}")
    const = zonoid_constant(constant, mu, R, n)
    from .measures import measure_of_scaled_ball

    mRB = measure_of_scaled_ball(mu, R)
    mZ = ball_mixed_measure(mu, R, Z)
    mC = ball_mixed_measure(mu, R, C)
    mZC = ball_mixed_second(mu, R, Z, C)
    lhs = mZ * mC
    rhs = const * kappa_ratio(n) * mRB * mZC
    quad_err = 1e-6 if n == 3 else 1e-10
    budget = quad_err * (abs(lhs) + abs(rhs) + abs(mRB) * abs(mZC) + 1.0)
    rep = SlackReport.build("zonoid_ball", lhs, rhs, budget, inputs)
    rep.inputs = dict(rep.inputs, constant=constant, constant_value=const, R=R)
    return rep


def scalar_zonoid_condition(
    mu: WeightedMeasure, R: float, a_candidate: float, inputs=None
) -> SlackReport:
    """slack of 1 >= A * J(R) * (1 - R W'(R)/n), the scalar sufficient
    condition behind the zonoid inequality; R W'(R) >= n short-circuits to
    holds (the right side is nonpositive).  The report carries the sharper
    admissible constant (n/(n+1)) (1 + 1/(n - R W'(R)))."""
    if mu.radial is None:
        raise ValueError("scalar_zonoid_condition requires a radial profile")
    n = mu.dim
    rwp = R * float(mu.radial.Wprime(np.asarray(R)))
    extras = {"R": R, "A_candidate": a_candidate}
    if rwp >= n:
        rep = SlackReport.build("scalar_zonoid_condition", 1.0, 0.0, 1e-12, inputs,
                                notes="R W'(R) >= n: right side nonpositive")
        rep.inputs = dict(rep.inputs, **extras, sharper_constant=float("inf"))
        return rep
    j = radial_profile_integral(mu, R)
    rhs = a_candidate * j * (1.0 - rwp / n)
    sharper = (n / (n + 1.0)) * (1.0 + 1.0 / (n - rwp))
    rep = SlackReport.build("scalar_zonoid_condition", 1.0, rhs, 1e-9 * (1.0 + abs(rhs)), inputs)
    rep.inputs = dict(rep.inputs, **extras, J=j, sharper_constant=sharper)
    return rep


# -- homogeneous-function Gaussian identity -------------------------------------------


def hom_integral_identity_check(k: float, n: int, f, resolution: int | None = None) -> float:
    """Residual of int f dgamma_n = 2^{(k-2)/2} Gamma((n+k)/2) / pi^{n/2}
    * int_{S^{n-1}} f du for a k-homogeneous f.

    The left side is computed by the radial reduction with the radial
    integral evaluated by adaptive quadrature (no Gamma identities), the
    right side from the closed constant; both share the same spherical
    quadrature of f.
    """
    if k <= -n:
        raise ValueError("need k > -n")
    from scipy.integrate import quad

    sphere = integrate(build_grid(n, resolution), f)
    radial, _err = quad(
        lambda r: r ** (n + k - 1.0) * math.exp(-0.5 * r * r), 0.0, np.inf, epsabs=1e-14
    )
    lhs = radial / (2.0 * math.pi) ** (n / 2.0) * sphere
    const = 2.0 ** ((k - 2.0) / 2.0) * math.gamma((n + k) / 2.0) / math.pi ** (n / 2.0)
    rhs = const * sphere
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


# -- supermodularity --------------------------------------------------------------------


@dataclass
class SupermodularityReport:
    """Monotonicity classification of b(r) = e^{-W(r)} r^{n-1}, whose
    monotone increase/decrease is equivalent to supermodularity resp.
    submodularity of mu on dilates of the ball."""

    classification: str  # supermodular | submodular | mixed
    turning_radius: float | None
    gaussian_reference: float | None
    second_difference_sign_change: bool
    grid: np.ndarray = field(repr=False, default=None)
    b_values: np.ndarray = field(repr=False, default=None)


def supermodularity_classify(mu: WeightedMeasure, n: int | None = None, r_max: float = 4.0) -> SupermodularityReport:
    if mu.radial is None:
        raise ValueError("supermodularity_classify requires a radial profile")
    n = n or mu.dim
    rs = np.linspace(r_max / 512.0, r_max, 512)
    b = np.exp(-np.asarray(mu.radial.W(rs))) * rs ** (n - 1)
    db = np.diff(b)
    increasing = np.all(db >= -1e-14 * np.abs(b[:-1]))
    decreasing = np.all(db <= 1e-14 * np.abs(b[:-1]))
    turning = None
    if not increasing and not decreasing:
        # (log b)'(r) = (n-1)/r - W'(r) crosses zero at the turning radius.
        def logb_prime(r):
            return (n - 1) / r - float(mu.radial.Wprime(np.asarray(r)))

        lo, hi = rs[0], rs[-1]
        try:
            turning = float(brentq(logb_prime, lo, hi, xtol=1e-14, rtol=1e-15))
        except ValueError:
            turning = float(rs[np.argmax(b)])
    if increasing:
        label = "supermodular"
    elif decreasing:
        label = "submodular"
    else:
        label = "mixed"

    # Cross-check via second differences of t -> mu(t B_2^n).
    from .measures import measure_of_scaled_ball

    ts = np.linspace(r_max / 64.0, r_max, 64)
    if n == mu.dim:
        f = np.array([measure_of_scaled_ball(mu, t) for t in ts])
    else:
        f = None
    sign_change = False
    if f is not None:
        d2 = np.diff(f, 2)
        sign_change = bool(np.any(d2 > 1e-12) and np.any(d2 < -1e-12))

    reference = math.sqrt(n - 1) if n >= 2 else None
    return SupermodularityReport(label, turning, reference, sign_change, rs, b)


def interval_submodularity_check(
    mu: WeightedMeasure, A: tuple, B: tuple, C: tuple, inputs=None
) -> SlackReport:
    """slack of mu(A+B) mu(A+C) >= mu(A) mu(A+B+C) for an interval A and
    symmetric intervals B, C on the line (log-concave mu)."""
    if mu.dim != 1:
        raise ValueError("interval_submodularity_check is one-dimensional")
    a1, a2 = A
    b1, b2 = B
    c1, c2 = C
    if abs(b1 + b2) > 1e-12 or abs(c1 + c2) > 1e-12:
        raise ValueError("B and C must be symmetric intervals")
    lhs = interval_mass(mu, a1 + b1, a2 + b2) * interval_mass(mu, a1 + c1, a2 + c2)
    rhs = interval_mass(mu, a1, a2) * interval_mass(mu, a1 + b1 + c1, a2 + b2 + c2)
    budget = 1e-12 * (1.0 + abs(lhs) + abs(rhs))
    return SlackReport.build("interval_submodularity", lhs, rhs, budget, inputs)
