"""Single competition environments, their type, and convex mixtures of two."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields

import numpy as np

PARAM_NAMES = ("a", "b", "c", "d", "alpha", "beta")


class EnvType(str, enum.Enum):
    TYPE1 = "Type1"  # favorable to x
    TYPE2 = "Type2"  # favorable to y
    TYPE3 = "Type3"  # coexistence
    TYPE4 = "Type4"  # bistable
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Environment:
    """Lotka-Volterra competition parameters.

    The vector field is ``x' = alpha x (1 - a x - b y)``,
    ``y' = beta y (1 - c x - d y)``.
    """

    a: float
    b: float
    c: float
    d: float
    alpha: float
    beta: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float, np.floating, np.integer)):
                raise TypeError(f"{f.name} must be a real number, got {value!r}")
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{f.name} must be positive and finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))

    @classmethod
    def from_sequence(cls, values) -> Environment:
        values = list(values)
        if len(values) != 6:
            raise ValueError(f"expected 6 values (a,b,c,d,alpha,beta), got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c, self.d, self.alpha, self.beta)

    def to_dict(self) -> dict:
        return dict(zip(PARAM_NAMES, self.as_tuple()))

    @classmethod
    def from_dict(cls, data: dict) -> Environment:
        missing = [k for k in PARAM_NAMES if k not in data]
        if missing:
            raise ValueError(f"environment is missing {missing}")
        return cls(*(data[k] for k in PARAM_NAMES))


@dataclass(frozen=True)
class EnvPair:
    env0: Environment
    env1: Environment
    a0_ne_a1: bool = field(init=False)

    def __post_init__(self):
        for env in (self.env0, self.env1):
            if not isinstance(env, Environment):
                raise TypeError(f"expected Environment, got {type(env).__name__}")
        object.__setattr__(self, "a0_ne_a1", self.env0.a != self.env1.a)

    def __iter__(self):
        yield self.env0
        yield self.env1

    def swapped(self) -> EnvPair:
        """Pair with the roles of the two species exchanged in both environments."""
        return EnvPair(swap_species(self.env0), swap_species(self.env1))

    def to_dict(self) -> dict:
        return {"env0": self.env0.to_dict(), "env1": self.env1.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> EnvPair:
        try:
            return cls(Environment.from_dict(data["env0"]), Environment.from_dict(data["env1"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed environment pair: {exc}") from exc


def classify(env: Environment) -> EnvType:
    if env.a == env.c or env.b == env.d:
        return EnvType.DEGENERATE
    if env.a < env.c:
        return EnvType.TYPE1 if env.b < env.d else EnvType.TYPE4
    return EnvType.TYPE3 if env.b < env.d else EnvType.TYPE2


def vector_field(env: Environment, x, y):
    """Evaluate the competition vector field; ``x`` and ``y`` may be arrays."""
    fx = env.alpha * x * (1.0 - env.a * x - env.b * y)
    fy = env.beta * y * (1.0 - env.c * x - env.d * y)
    return fx, fy


def mix(pair: EnvPair, s: float) -> Environment:
    """Environment whose vector field is ``(1-s) F_0 + s F_1``."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    e0, e1 = pair.env0, pair.env1
    if s == 0.0:
        return e0
    if s == 1.0:
        return e1
    alpha = s * e1.alpha + (1 - s) * e0.alpha
    beta = s * e1.beta + (1 - s) * e0.beta
    return Environment(
        a=(s * e1.alpha * e1.a + (1 - s) * e0.alpha * e0.a) / alpha,
        b=(s * e1.alpha * e1.b + (1 - s) * e0.alpha * e0.b) / alpha,
        c=(s * e1.beta * e1.c + (1 - s) * e0.beta * e0.c) / beta,
        d=(s * e1.beta * e1.d + (1 - s) * e0.beta * e0.d) / beta,
        alpha=alpha,
        beta=beta,
    )


def swap_species(env: Environment) -> Environment:
    """Relabel x as y: the y-dynamics of the result are the x-dynamics of ``env``."""
    return Environment(a=env.d, b=env.c, c=env.b, d=env.a, alpha=env.beta, beta=env.alpha)
