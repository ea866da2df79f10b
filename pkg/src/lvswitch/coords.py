"""Charts for the switching intensities.

Jump rates ``(lambda0, lambda1)`` can be described by ``(s, t)`` with
``s t = lambda0`` and ``(1 - s) t = lambda1``, or by a weighted chart
``(u, v)`` with ``u v = lambda0 / w0`` and ``(1 - u) v = lambda1 / w1``.
The invasion rate of y lives in the chart weighted by ``(alpha0, alpha1)``,
the invasion rate of x in the one weighted by ``(beta0, beta1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class ChartMismatch(ValueError):
    """Coordinates were expressed in a chart other than the one required."""


def _positive(name, value):
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class JumpRates:
    lambda0: float
    lambda1: float

    def __post_init__(self):
        _positive("lambda0", self.lambda0)
        _positive("lambda1", self.lambda1)


@dataclass(frozen=True)
class STCoords:
    s: float
    t: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"s must lie in (0, 1), got {self.s}")
        _positive("t", self.t)

    @classmethod
    def from_rates(cls, rates: JumpRates) -> STCoords:
        t = rates.lambda0 + rates.lambda1
        return cls(rates.lambda0 / t, t)

    def to_rates(self) -> JumpRates:
        return JumpRates(self.s * self.t, (1 - self.s) * self.t)


@dataclass(frozen=True)
class UVCoords:
    """Point of a weighted chart.

    ``u`` may sit on the closed interval ``[0, 1]`` to describe limiting
    regimes, but only interior points correspond to actual jump rates.
    ``u_complement`` holds ``1 - u``; charts built from rates compute it
    without cancellation, which keeps round trips exact near ``u = 1``.
    """

    u: float
    v: float
    weights: tuple[float, float]
    u_complement: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.u <= 1.0:
            raise ValueError(f"u must lie in [0, 1], got {self.u}")
        if not (self.v >= 0 and math.isfinite(self.v)):
            raise ValueError(f"v must be nonnegative and finite, got {self.v}")
        w0, w1 = self.weights
        _positive("w0", w0)
        _positive("w1", w1)
        object.__setattr__(self, "weights", (float(w0), float(w1)))
        if self.u_complement is None:
            object.__setattr__(self, "u_complement", 1.0 - self.u)
        elif abs(self.u + self.u_complement - 1.0) > 1e-12:
            raise ValueError("u_complement must equal 1 - u")

    def require_weights(self, w0: float, w1: float) -> None:
        if self.weights != (float(w0), float(w1)):
            raise ChartMismatch(
                f"coordinates use chart weights {self.weights}, expected {(w0, w1)}"
            )


def rates_to_uv(rates: JumpRates, w0: float, w1: float) -> UVCoords:
    _positive("w0", w0)
    _positive("w1", w1)
    p = rates.lambda0 / w0
    q = rates.lambda1 / w1
    return UVCoords(p / (p + q), p + q, (w0, w1), q / (p + q))


def uv_to_rates(coords: UVCoords) -> JumpRates:
    if not 0.0 < coords.u < 1.0 or coords.v <= 0:
        raise ValueError(
            f"(u, v) = ({coords.u}, {coords.v}) is a boundary point and encodes no process"
        )
    w0, w1 = coords.weights
    return JumpRates(coords.u * coords.v * w0, coords.u_complement * coords.v * w1)


def xi(s, t, alpha0: float, alpha1: float):
    """Map ``(s, t)`` to the chart weighted by ``(alpha0, alpha1)``.

    Vectorized over ``s`` and ``t``; ``u`` depends on ``s`` only.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    mixed = (1 - s) * alpha0 + s * alpha1
    u = s * alpha1 / mixed
    v = t * mixed / (alpha0 * alpha1)
    if u.ndim == 0 and v.ndim == 0:
        return float(u), float(v)
    return u, v


def u_to_s(u, w0: float, w1: float):
    """Inverse of the ``u`` component of :func:`xi`."""
    u = np.asarray(u, dtype=float)
    s = u * w0 / (u * w0 + (1 - u) * w1)
    return float(s) if s.ndim == 0 else s


def convert_uv(u, v, from_weights, to_weights):
    """Re-express chart points under other weights, going through the jump rates.

    Vectorized; ``u`` must be in ``[0, 1]``. Boundary values map to boundary values.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    f0, f1 = from_weights
    t0, t1 = to_weights
    p = u * f0 / t0
    q = (1 - u) * f1 / t1
    u_new = p / (p + q)
    v_new = v * (p + q)
    if u_new.ndim == 0 and v_new.ndim == 0:
        return float(u_new), float(v_new)
    return u_new, v_new
