"""Closed-form invasion rates of the switched competition model.

Along the x-axis the resident follows the switched logistic flow
``x' = alpha_i x (1 - a_i x)``. In the reciprocal variable ``1/x`` this flow is
linear, so after the growth-rate time change the normalized reciprocal
``y = (1/x - a0) / (a1 - a0)`` is stationary with law Beta(uv, (1-u)v), where
``(u, v)`` is the chart weighted by ``(alpha0, alpha1)``. The invasion rate of
species y is then a Beta expectation of

    phi(y) = m P(1/m),    m = a0 + (a1 - a0) y,

with ``P`` the quadratic returned by :func:`poly_P`. Writing
``P(x) = c2 x^2 + c1 x + c0`` gives ``phi = c0 m + c1 + c2 / m``, so the
expectation only needs the Beta means of ``m`` and ``1/m``. The latter is a
Gauss hypergeometric value, summed here as a positive geometric-rate series.

The invasion rate of x is the invasion rate of y for the pair with the two
species exchanged, read in the chart weighted by ``(beta0, beta1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .coords import JumpRates, UVCoords, rates_to_uv
from .envmodel import EnvPair

SIGN_TOL = 1e-12
SPECIES = ("x", "y")


class DegenerateLogistic(ValueError):
    """The two environments share the logistic coefficient; no closed form."""


@dataclass(frozen=True)
class Quadratic:
    c2: float
    c1: float
    c0: float

    def __call__(self, x):
        return (self.c2 * x + self.c1) * x + self.c0


@dataclass(frozen=True)
class BetaParams:
    shape1: float
    shape2: float

    def __post_init__(self):
        if not (self.shape1 > 0 and self.shape2 > 0):
            raise ValueError(
                f"Beta shape parameters must be positive, got ({self.shape1}, {self.shape2})"
            )

    @classmethod
    def from_uv(cls, u: float, v: float) -> BetaParams:
        return cls(u * v, (1 - u) * v)


@dataclass(frozen=True)
class QuadRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray


def beta_quadrature(params: BetaParams, order: int) -> QuadRule:
    """Gauss rule on (0, 1) for the Beta(shape1, shape2) probability density.

    Built with Golub-Welsch from the monic Jacobi recurrence; the weights are
    normalized so they sum to one, which avoids overflowing Beta-function
    prefactors at large shapes.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    p, q = params.shape1, params.shape2
    v = p + q
    n = np.arange(order, dtype=float)
    diag = np.empty(order)
    diag[0] = (p - q) / v
    k = n[1:]
    diag[1:] = (p - q) * (v - 2) / ((2 * k + v - 2) * (2 * k + v))
    off = np.empty(order - 1)
    if order > 1:
        off[0] = 4 * p * q / (v * v * (v + 1))
        k = n[2:]
        off[1:] = (
            4 * k * (k + q - 1) * (k + p - 1) * (k + v - 2)
            / ((2 * k + v - 2) ** 2 * (2 * k + v - 1) * (2 * k + v - 3))
        )
    nodes, vecs = eigh_tridiagonal((1 + diag) / 2, np.sqrt(off) / 2)
    weights = vecs[0] ** 2
    return QuadRule(order, nodes, weights / weights.sum())


def beta_expectation(func: Callable, u: float, v: float, order: int = 40) -> float:
    """E[func(U)] for U ~ Beta(uv, (1-u)v) by Gauss quadrature."""
    rule = beta_quadrature(BetaParams.from_uv(u, v), order)
    return float(np.dot(rule.weights, func(rule.nodes)))


def _require_distinct(pair: EnvPair):
    if not pair.a0_ne_a1:
        raise DegenerateLogistic(
            f"a0 == a1 == {pair.env0.a}: the closed form does not apply, use Monte Carlo"
        )


def poly_P(pair: EnvPair) -> Quadratic:
    _require_distinct(pair)
    e0, e1 = pair.env0, pair.env1
    r0 = e0.beta / e0.alpha
    r1 = e1.beta / e1.alpha
    sign = 1.0 if e1.a > e0.a else -1.0
    return Quadratic(
        c2=sign * (r1 * e1.c * e0.a - r0 * e0.c * e1.a),
        c1=sign * (r0 * (e0.c + e1.a) - r1 * (e1.c + e0.a)),
        c0=sign * (r1 - r0),
    )


def coefficient_a(pair: EnvPair) -> float:
    """Degree-two coefficient of ``P``; its sign is the curvature sign of phi."""
    return poly_P(pair).c2


def phi(pair: EnvPair, y):
    poly = poly_P(pair)
    m = pair.env0.a + (pair.env1.a - pair.env0.a) * np.asarray(y, dtype=float)
    out = m * poly(1.0 / m)
    return float(out) if out.ndim == 0 else out


def mean_reciprocal(a0: float, a1: float, u, v, rtol: float = 1e-17):
    """E[1 / (a0 + (a1 - a0) U)] for U ~ Beta(uv, (1-u)v), vectorized.

    With ``far`` the larger of a0, a1 and ``w = |a1 - a0| / far`` this is
    ``2F1(1, b; v; w) / far``, where ``b`` is the shape attached to the
    smaller coefficient. Every term is positive and the term ratio is at most
    ``w``, which bounds the truncated tail.
    """
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    if np.any(v <= 0):
        raise ValueError("v must be positive")
    if a1 > a0:
        far, w, b = a1, (a1 - a0) / a1, (1 - u) * v
    elif a0 > a1:
        far, w, b = a0, (a0 - a1) / a0, u * v
    else:
        return np.full(u.shape, 1.0 / a0)[()]
    term = np.ones(u.shape)
    total = np.ones(u.shape)
    tail_factor = w / (1 - w)
    n_max = int(math.ceil(math.log(rtol) / math.log(w))) + 2
    for n in range(n_max):
        term = term * ((b + n) / (v + n) * w)
        total += term
        if np.all(term * tail_factor <= rtol * total):
            break
    return (total / far)[()]


def expected_phi(pair: EnvPair, u, v):
    """E[phi(U)] for U ~ Beta(uv, (1-u)v), exact up to rounding. Vectorized."""
    poly = poly_P(pair)
    a0, a1 = pair.env0.a, pair.env1.a
    u = np.asarray(u, dtype=float)
    mean_m = a0 + (a1 - a0) * u
    out = poly.c0 * mean_m + poly.c1 + poly.c2 * mean_reciprocal(a0, a1, u, v)
    return out[()] if isinstance(out, np.ndarray) else out


def expected_phi_quadrature(pair: EnvPair, u: float, v: float, order: int = 60) -> float:
    """Same expectation by Gauss-Jacobi quadrature, kept as an independent route."""
    return beta_expectation(lambda y: phi(pair, y), u, v, order)


def _prefactor(pair: EnvPair, u):
    e0, e1 = pair.env0, pair.env1
    return 1.0 / (abs(e1.a - e0.a) * ((1 - u) / e0.alpha + u / e1.alpha))


def lambda_y(pair: EnvPair, u, v):
    """Invasion rate of y at the point ``(u, v)`` of the alpha-weighted chart."""
    u = np.asarray(u, dtype=float)
    out = _prefactor(pair, u) * expected_phi(pair, u, v)
    return out[()] if isinstance(out, np.ndarray) else out


def lambda_x_uv(pair: EnvPair, u, v):
    """Invasion rate of x at ``(u, v)`` of the beta-weighted chart."""
    return invasion_rate_uv(pair, "x", u, v)


def lambda_x(pair: EnvPair, rates: JumpRates) -> float:
    coords = rates_to_uv(rates, pair.env0.beta, pair.env1.beta)
    return float(lambda_x_uv(pair, coords.u, coords.v))


def chart_weights(pair: EnvPair, species: str) -> tuple[float, float]:
    """Growth rates weighting the native chart of the given species' invasion rate."""
    if species == "y":
        return (pair.env0.alpha, pair.env1.alpha)
    if species == "x":
        return (pair.env0.beta, pair.env1.beta)
    raise ValueError(f"species must be 'x' or 'y', got {species!r}")


def native_pair(pair: EnvPair, species: str) -> EnvPair:
    """Pair in which the given species plays the role of the invader y."""
    chart_weights(pair, species)
    return pair if species == "y" else pair.swapped()


def has_closed_form(pair: EnvPair, species: str) -> bool:
    return native_pair(pair, species).a0_ne_a1


def invasion_rate_uv(pair: EnvPair, species: str, u, v):
    """Vectorized invasion rate with ``(u, v)`` in the species' native chart."""
    target = native_pair(pair, species)
    if not target.a0_ne_a1:
        coef = "d" if species == "x" else "a"
        raise DegenerateLogistic(
            f"{coef}0 == {coef}1 == {target.env0.a}: no closed form for species {species}, "
            "use Monte Carlo"
        )
    return lambda_y(target, u, v)


def invasion_rate(pair: EnvPair, species: str, where) -> float:
    """Invasion rate at ``where``: :class:`JumpRates` or native-chart :class:`UVCoords`."""
    w0, w1 = chart_weights(pair, species)
    if isinstance(where, JumpRates):
        where = rates_to_uv(where, w0, w1)
    elif isinstance(where, UVCoords):
        where.require_weights(w0, w1)
    else:
        raise TypeError(f"expected JumpRates or UVCoords, got {type(where).__name__}")
    return float(invasion_rate_uv(pair, species, where.u, where.v))


def _mixed_for_u(pair: EnvPair, u):
    e0, e1 = pair.env0, pair.env1
    u = np.asarray(u, dtype=float)
    s = u * e0.alpha / (u * e0.alpha + (1 - u) * e1.alpha)
    alpha = s * e1.alpha + (1 - s) * e0.alpha
    beta = s * e1.beta + (1 - s) * e0.beta
    a = (s * e1.alpha * e1.a + (1 - s) * e0.alpha * e0.a) / alpha
    c = (s * e1.beta * e1.c + (1 - s) * e0.beta * e0.c) / beta
    return a, c, beta


def limit_v_inf(pair: EnvPair, u):
    """Limit of the y invasion rate under infinitely fast switching."""
    a, c, beta = _mixed_for_u(pair, u)
    out = beta * (1 - c / a)
    return out[()]


def _g_coeffs(pair: EnvPair):
    e0, e1 = pair.env0, pair.env1
    g0 = e0.beta / e0.alpha * (1 - e0.c / e0.a)
    g1 = e1.beta / e1.alpha * (1 - e1.c / e1.a)
    return g0, g1


def limit_v_zero(pair: EnvPair, u):
    """Limit of the y invasion rate under infinitely slow switching."""
    g0, g1 = _g_coeffs(pair)
    u = np.asarray(u, dtype=float)
    out = ((g1 - g0) * u + g0) / ((1 - u) / pair.env0.alpha + u / pair.env1.alpha)
    return out[()]


@dataclass(frozen=True)
class ThresholdAnalysis:
    R: float
    A: float
    B: float
    C: float
    discriminant: float
    i_tilde: tuple[tuple[float, float], ...]
    t_nonnegative: tuple[tuple[float, float], ...]
    alpha_points: tuple[float, ...]
    alpha_bar: Optional[float]
    coeff_a: Optional[float]

    def T(self, u):
        return (self.A * np.asarray(u, dtype=float) + self.B) * u + self.C

    @property
    def alpha(self) -> Optional[float]:
        """The single boundary point of the positivity set of the fast limit, if unique."""
        return self.alpha_points[0] if len(self.alpha_points) == 1 else None


def _roots_in_unit_interval(A: float, B: float, C: float) -> list[float]:
    scale = abs(A) + abs(B) + abs(C)
    if scale == 0:
        return []
    if abs(A) <= 1e-14 * scale:
        roots = [] if B == 0 else [-C / B]
    else:
        disc = B * B - 4 * A * C
        if disc < 0:
            roots = []
        else:
            q = -0.5 * (B + math.copysign(math.sqrt(disc), B))
            roots = [q / A] + ([C / q] if q != 0 else [])
    return sorted({r for r in roots if 0.0 < r < 1.0})


def threshold_analysis(pair: EnvPair) -> ThresholdAnalysis:
    e0, e1 = pair.env0, pair.env1
    R = e0.beta * e1.alpha / (e0.alpha * e1.beta)
    A = (e1.a - e0.a) * (R - 1)
    B = (2 * e0.a - e0.c - e1.a) * R + (e1.c - e0.a)
    C = (e0.c - e0.a) * R
    roots = _roots_in_unit_interval(A, B, C)
    edges = [0.0, *roots, 1.0]
    negative, nonnegative = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        target = negative if (A * mid + B) * mid + C < 0 else nonnegative
        if target and target[-1][1] == lo:
            target[-1] = (target[-1][0], hi)
        else:
            target.append((lo, hi))
    boundary = sorted(
        {x for iv in negative for x in iv if 0.0 < x < 1.0}
    )
    g0, g1 = _g_coeffs(pair)
    alpha_bar = g0 / (g0 - g1) if g0 * g1 < 0 else None
    return ThresholdAnalysis(
        R=R,
        A=A,
        B=B,
        C=C,
        discriminant=B * B - 4 * A * C,
        i_tilde=tuple(negative),
        t_nonnegative=tuple(nonnegative),
        alpha_points=tuple(boundary),
        alpha_bar=alpha_bar,
        coeff_a=coefficient_a(pair) if pair.a0_ne_a1 else None,
    )


def alpha_type12(A: float, B: float, C: float) -> float:
    """Lower root ``(-B - sqrt(B^2 - 4AC)) / 2A`` used when T(0) > 0 > T(1)."""
    if A == 0:
        return -C / B
    return (-B - math.sqrt(B * B - 4 * A * C)) / (2 * A)


@dataclass(frozen=True)
class InvasionEstimate:
    value: float
    std_error: float
    provenance: str  # "closed-form" or "monte-carlo"


def estimate_invasion_rate(pair: EnvPair, species: str, rates: JumpRates, mc_config=None) -> InvasionEstimate:
    """Closed form when available, otherwise the ergodic Monte Carlo estimate.

    Raises :class:`DegenerateLogistic` when no closed form exists and no
    ``mc_config`` was given.
    """
    if has_closed_form(pair, species):
        return InvasionEstimate(invasion_rate(pair, species, rates), 0.0, "closed-form")
    if mc_config is None:
        raise DegenerateLogistic(
            f"no closed form for species {species} of this pair and no Monte Carlo config given"
        )
    from .sim import estimate_lambda

    stats = estimate_lambda(pair, rates, species, mc_config)
    return InvasionEstimate(stats.estimate, stats.std_error, "monte-carlo")
