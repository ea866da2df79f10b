"""Critical curves: for each u, the switching speed v at which an invasion rate vanishes.

Invasion rates are monotone in v at fixed u, so each u has at most one
crossing. Crossings are searched in the window ``[V_MIN, V_MAX]``: a sign
change across the decade grid brackets the root, which bisection in log v
then refines. Without a sign change the curve value is ``zero`` when the
rate is positive throughout the window and ``inf`` when it is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coords import convert_uv
from .envmodel import EnvPair
from .invasion import (
    SIGN_TOL,
    chart_weights,
    coefficient_a,
    invasion_rate_uv,
    limit_v_inf,
    limit_v_zero,
    native_pair,
    threshold_analysis,
)

V_MIN = 1e-6
V_MAX = 1e6
REL_TOL = 1e-10

ZERO, FINITE, INF = "zero", "finite", "inf"


class InternalContract(RuntimeError):
    """An invasion rate changed sign more than once along v."""


@dataclass(frozen=True)
class ExtendedV:
    """Curve value: ``zero``, ``inf``, or ``finite`` with ``v``.

    Finite values come from the window ``[V_MIN, V_MAX]`` of the native
    chart; after a chart change they may sit slightly outside it.
    """

    kind: str
    v: Optional[float] = None

    def __post_init__(self):
        if self.kind == FINITE:
            if self.v is None or not (0 < self.v < math.inf):
                raise ValueError(f"finite value must be positive, got {self.v}")
        elif self.kind in (ZERO, INF):
            if self.v is not None:
                raise ValueError("zero and inf carry no value")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def value(self) -> float:
        return {ZERO: 0.0, INF: math.inf}.get(self.kind, self.v)


def _signs(values):
    return np.where(values > SIGN_TOL, 1, np.where(values < -SIGN_TOL, -1, 0))


def _solve(pair: EnvPair, species: str, u: np.ndarray):
    """Vectorized search in the native chart. Returns kinds, values, sign below the root."""
    u = np.asarray(u, dtype=float)
    decades = np.logspace(math.log10(V_MIN), math.log10(V_MAX), 13)
    grid = invasion_rate_uv(pair, species, u[:, None], decades[None, :])
    signs = _signs(grid)
    kinds = np.empty(len(u), dtype=object)
    values = np.full(len(u), np.nan)
    below = np.zeros(len(u), dtype=int)
    pending = []
    for k, row in enumerate(signs):
        nz = row[row != 0]
        changes = np.count_nonzero(np.diff(nz))
        if changes > 1:
            raise InternalContract(
                f"invasion rate of {species} changes sign {changes} times in v at u={u[k]}"
            )
        if changes == 0:
            kinds[k] = ZERO if (len(nz) == 0 or nz[0] > 0) else INF
            continue
        j = int(np.flatnonzero(row != 0)[0])
        first = row[j]
        hi = j + int(np.flatnonzero(row[j:] == -first)[0])
        lo = hi - 1
        while row[lo] == 0 and lo > j:
            lo -= 1
        pending.append((k, math.log10(decades[lo]), math.log10(decades[hi]), first))
    if pending:
        idx = np.array([p[0] for p in pending])
        lo = np.array([p[1] for p in pending])
        hi = np.array([p[2] for p in pending])
        first = np.array([p[3] for p in pending])
        n_iter = int(math.ceil(math.log2((hi - lo).max() * math.log(10) / REL_TOL))) + 1
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            s = np.sign(invasion_rate_uv(pair, species, u[idx], 10.0 ** mid))
            same = s == first
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
            exact = s == 0
            lo = np.where(exact, mid, lo)
            hi = np.where(exact, mid, hi)
        kinds[idx] = FINITE
        values[idx] = 10.0 ** (0.5 * (lo + hi))
        below[idx] = first
    return kinds, values, below


def critical_v(pair: EnvPair, species: str, u: float) -> ExtendedV:
    """Critical v at ``u``; both are expressed in the species' native chart."""
    kinds, values, _ = _solve(pair, species, np.array([u]))
    return ExtendedV(kinds[0], float(values[0]) if kinds[0] == FINITE else None)


@dataclass
class CriticalCurve:
    species: str
    u_grid: np.ndarray
    values: list
    chart_weights: tuple[float, float]

    def __post_init__(self):
        if len(self.values) != len(self.u_grid):
            raise ValueError("values and grid lengths differ")
        if np.any(np.diff(self.u_grid) <= 0):
            raise ValueError("u_grid must be strictly increasing")

    @property
    def kinds(self) -> list[str]:
        return [ev.kind for ev in self.values]

    def finite(self):
        """Grid points and values of the finite part."""
        mask = np.array([ev.kind == FINITE for ev in self.values], dtype=bool)
        return self.u_grid[mask], np.array([ev.v for ev in self.values if ev.kind == FINITE])

    def to_csv(self) -> str:
        rows = ["u,v_kind,v_value"]
        for u, ev in zip(self.u_grid, self.values):
            rows.append(f"{u:.17g},{ev.kind},{'' if ev.v is None else format(ev.v, '.17g')}")
        return "\n".join(rows) + "\n"


def interior_grid(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("n must be >= 2")
    return np.arange(1, n + 1) / (n + 1)


def curve_grid(pair: EnvPair, species: str, n: int) -> CriticalCurve:
    """Critical curve sampled at ``u_k = k / (n + 1)`` of the alpha-weighted chart.

    The x-curve is solved in its beta-weighted chart and mapped back through
    the jump rates, so both curves share one plane.
    """
    u = interior_grid(n)
    wa = chart_weights(pair, "y")
    if species == "y":
        kinds, values, _ = _solve(pair, "y", u)
    else:
        wb = chart_weights(pair, "x")
        u_native, _ = convert_uv(u, 1.0, wa, wb)
        kinds, native_v, _ = _solve(pair, species, u_native)
        _, values = convert_uv(u_native, native_v, wb, wa)
    out = [ExtendedV(k, float(v)) if k == FINITE else ExtendedV(k) for k, v in zip(kinds, values)]
    return CriticalCurve(species, u, out, wa)


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    kind: str
    trend: Optional[str] = None  # "decreasing" / "increasing" for finite parts

    def contains(self, u: float) -> bool:
        return self.lo < u < self.hi


@dataclass
class ShapeSummary:
    """Predicted layout of a critical curve from the analytic limits, in the alpha chart."""

    species: str
    coeff_a: float
    alpha_points: tuple[float, ...]
    alpha_bar: Optional[float]
    segments: list

    def pattern(self) -> list[str]:
        return [s.trend if s.kind == FINITE and s.trend else s.kind for s in self.segments]

    def segment_at(self, u: float) -> Optional[int]:
        for i, seg in enumerate(self.segments):
            if seg.contains(u):
                return i
        return None

    def check(self, curve: CriticalCurve) -> list[str]:
        """Mismatches between the prediction and a computed curve (empty when they agree).

        Outside finite segments the kinds must agree exactly. Inside a finite
        segment, points whose crossing lies beyond the v-window carry the kind
        of the neighbouring segment and must sit at that side; the finite
        values must follow the predicted trend strictly.
        """
        problems = []
        by_segment: dict[int, list] = {}
        for u, ev in zip(curve.u_grid, curve.values):
            i = self.segment_at(float(u))
            if i is None:
                continue
            seg = self.segments[i]
            if seg.kind != FINITE:
                if ev.kind != seg.kind:
                    problems.append(f"u={u:.6g}: expected {seg.kind}, got {ev.kind}")
            else:
                by_segment.setdefault(i, []).append((float(u), ev))
        for i, points in by_segment.items():
            seg = self.segments[i]
            left = self.segments[i - 1].kind if i > 0 else None
            right = self.segments[i + 1].kind if i + 1 < len(self.segments) else None
            phase = 0
            for u, ev in points:
                if ev.kind == FINITE:
                    stage = 1
                elif ev.kind == left and phase == 0:
                    stage = 0
                elif ev.kind == right:
                    stage = 2
                else:
                    problems.append(f"u={u:.6g}: unexpected {ev.kind} inside finite segment")
                    continue
                if stage < phase:
                    problems.append(f"u={u:.6g}: {ev.kind} out of order inside finite segment")
                phase = max(phase, stage)
            finite = np.array([ev.v for _, ev in points if ev.kind == FINITE])
            steps = np.diff(finite)
            if seg.trend == "decreasing" and np.any(steps >= 0):
                problems.append(f"segment ({seg.lo:.6g}, {seg.hi:.6g}) is not strictly decreasing")
            if seg.trend == "increasing" and np.any(steps <= 0):
                problems.append(f"segment ({seg.lo:.6g}, {seg.hi:.6g}) is not strictly increasing")
        return problems


def shape_summary(pair: EnvPair, species: str) -> ShapeSummary:
    """Predicted Infinite / finite / Zero layout of the critical curve of ``species``.

    Breakpoints are the zeros of the fast-switching limit (where the critical
    v escapes to infinity) and of the slow-switching limit (where it drops to
    zero). A finite segment running from an infinity end to a zero end is
    monotone; the trend is left open otherwise.
    """
    target = native_pair(pair, species)
    analysis = threshold_analysis(target)
    to_alpha = _chart_map(pair, species)
    inf_ends = {to_alpha(x) for x in analysis.alpha_points}
    zero_ends = set() if analysis.alpha_bar is None else {to_alpha(analysis.alpha_bar)}
    edges = sorted({0.0, 1.0, *inf_ends, *zero_ends})
    segments: list[Segment] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid_native = _chart_inverse(pair, species)(0.5 * (lo + hi))
        slow = limit_v_zero(target, mid_native)
        fast = limit_v_inf(target, mid_native)
        if slow > 0 and fast > 0:
            kind = ZERO
        elif slow < 0 and fast < 0:
            kind = INF
        else:
            kind = FINITE
        trend = None
        if kind == FINITE:
            if lo in inf_ends and hi in zero_ends:
                trend = "decreasing"
            elif lo in zero_ends and hi in inf_ends:
                trend = "increasing"
        if segments and segments[-1].kind == kind and kind != FINITE:
            segments[-1] = Segment(segments[-1].lo, hi, kind)
        else:
            segments.append(Segment(lo, hi, kind, trend))
    return ShapeSummary(
        species=species,
        coeff_a=coefficient_a(target),
        alpha_points=tuple(sorted(inf_ends)),
        alpha_bar=next(iter(zero_ends), None),
        segments=segments,
    )


def _chart_map(pair: EnvPair, species: str):
    if species == "y":
        return lambda u: u
    wa, wb = chart_weights(pair, "y"), chart_weights(pair, "x")
    return lambda u: float(convert_uv(u, 1.0, wb, wa)[0])


def _chart_inverse(pair: EnvPair, species: str):
    if species == "y":
        return lambda u: u
    wa, wb = chart_weights(pair, "y"), chart_weights(pair, "x")
    return lambda u: float(convert_uv(u, 1.0, wa, wb)[0])
