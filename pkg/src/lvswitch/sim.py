"""Monte Carlo simulation of the switched competition process.

The mode chain is simulated exactly: unit exponentials drawn from a Philox
stream are scaled into holding times. Between jumps the deterministic flow is
integrated with classical RK4 in steps capped at ``dt_max``. Invasion rates are
estimated as ergodic time averages of the per-capita growth rate of the absent
species along the one-species boundary process, with batch-means error bars.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _kernels
from .coords import JumpRates
from .envmodel import EnvPair
from .regimes import Regime

HOLD_CHUNK = 1 << 16
NEAR_EXTINCT = 1e-4


class IntegratorBlowUp(RuntimeError):
    """The integrated state left its admissible box, usually because dt_max is too large."""


def max_workers() -> int:
    """Thread cap for replica and grid sweeps, from ``LVSWITCH_THREADS`` if set."""
    env = os.environ.get("LVSWITCH_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def default_dt_max(pair: EnvPair) -> float:
    return 0.01 / max(pair.env0.alpha, pair.env1.alpha, pair.env0.beta, pair.env1.beta)


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings. ``dt_max=None`` and ``burn_in=None`` pick the defaults
    ``0.01 / max growth rate`` and ``0.1 * t_max``."""

    t_max: float = 1e4
    dt_max: Optional[float] = None
    seed: int = 0
    x0: float = 0.5
    y0: float = 0.5
    i0: int = 0
    burn_in: Optional[float] = None
    batches: int = 50
    n_samples: int = 10001

    def __post_init__(self):
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise ValueError("t_max must be positive and finite")
        if self.dt_max is not None and not 0 < self.dt_max <= self.t_max:
            raise ValueError("dt_max must satisfy 0 < dt_max <= t_max")
        if self.burn_in is not None and not 0 <= self.burn_in < self.t_max:
            raise ValueError("burn_in must satisfy 0 <= burn_in < t_max")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.i0 not in (0, 1):
            raise ValueError("i0 must be 0 or 1")
        if self.x0 < 0 or self.y0 < 0:
            raise ValueError("initial populations must be nonnegative")
        if self.batches < 20:
            raise ValueError("at least 20 batches are required for batch means")
        if self.n_samples < 2:
            raise ValueError("n_samples must be >= 2")

    def step(self, pair: EnvPair) -> float:
        return self.dt_max if self.dt_max is not None else default_dt_max(pair)

    def burn(self) -> float:
        return self.burn_in if self.burn_in is not None else 0.1 * self.t_max


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 2) columns x, y
    modes: np.ndarray
    segments: np.ndarray  # (k, 3) rows t_start, t_end, mode
    status: str = "completed"

    def to_csv(self, stride: int = 1) -> str:
        rows = ["t,x,y,i"]
        for t, (x, y), i in zip(self.times[::stride], self.states[::stride], self.modes[::stride]):
            rows.append(f"{t:.17g},{x:.17g},{y:.17g},{int(i)}")
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class ErgodicStats:
    estimate: float
    std_error: float
    batches: int
    total_time: float

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "batches": self.batches,
            "total_time": self.total_time,
        }


@dataclass
class _Run:
    state: np.ndarray
    status: int
    marks: np.ndarray
    seg_ends: Optional[np.ndarray]
    i0: int


def _params(pair: EnvPair) -> np.ndarray:
    return np.array([pair.env0.as_tuple(), pair.env1.as_tuple()], dtype=float)


def _bound(pair: EnvPair) -> float:
    e0, e1 = pair.env0, pair.env1
    return 10.0 * max(1 / e0.a, 1 / e1.a, 1 / e0.d, 1 / e1.d)


def _rng(seed: int, replica: int = 0) -> np.random.Generator:
    # the second key word keeps ensembles with different base seeds disjoint
    key = np.array([seed ^ replica, seed], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _run(pair, rates, x0, y0, i0, t_end, dt_max, marks, rng, keep_segments=False):
    params = _params(pair)
    lam = np.array([rates.lambda0, rates.lambda1], dtype=float)
    bound = _bound(pair)
    if not (0 <= x0 <= bound and 0 <= y0 <= bound):
        raise ValueError(f"initial state ({x0}, {y0}) outside [0, {bound}]^2")
    # seg_end = 0 with the opposite mode makes the first loop pass enter mode i0
    state = np.array([0.0, x0, y0, 0.0, 0.0, 0.0, 1 - i0], dtype=float)
    out = np.zeros((len(marks), 6))
    h_idx = HOLD_CHUNK
    mark_idx = 0
    holds = seg_ends = None
    kept = []
    while True:
        if h_idx == HOLD_CHUNK:
            if keep_segments and seg_ends is not None:
                kept.append(seg_ends)
            holds = rng.standard_exponential(HOLD_CHUNK)
            seg_ends = np.empty(HOLD_CHUNK)
            h_idx = 0
        status, h_idx, mark_idx = _kernels.advance(
            state, params, lam, holds, seg_ends, h_idx, dt_max, t_end,
            marks, mark_idx, out, bound,
        )
        if status != _kernels.NEED_HOLDS:
            break
    if status == _kernels.BLOWUP:
        raise IntegratorBlowUp(
            f"state ({state[1]:.6g}, {state[2]:.6g}) left the admissible box at t={state[0]:.6g}; "
            f"reduce dt_max (currently {dt_max:.3g})"
        )
    if keep_segments:
        kept.append(seg_ends[:h_idx])
    return _Run(state, status, out[:mark_idx], np.concatenate(kept) if keep_segments else None, i0)


def _trajectory(run: _Run, t_max: float, status: str = "completed") -> Trajectory:
    ends = np.minimum(run.seg_ends, t_max)
    starts = np.concatenate([[0.0], ends[:-1]])
    modes = (run.i0 + np.arange(len(ends))) % 2
    segments = np.column_stack([starts, ends, modes])
    return Trajectory(
        times=run.marks[:, 0].copy(),
        states=run.marks[:, 1:3].copy(),
        modes=run.marks[:, 5].astype(np.int8),
        segments=segments,
        status=status,
    )


def simulate_pdmp(pair: EnvPair, rates: JumpRates, cfg: SimConfig) -> Trajectory:
    """Full process ``(X, Y, I)`` sampled at ``cfg.n_samples`` equally spaced times."""
    marks = np.linspace(0.0, cfg.t_max, cfg.n_samples)
    run = _run(pair, rates, cfg.x0, cfg.y0, cfg.i0, cfg.t_max, cfg.step(pair), marks,
               _rng(cfg.seed), keep_segments=True)
    return _trajectory(run, cfg.t_max)


def simulate_switched_logistic(pair: EnvPair, rates: JumpRates, axis: str, cfg: SimConfig) -> Trajectory:
    """One-species process on the x-axis (``axis='x'``) or the y-axis."""
    if axis == "x":
        x0, y0 = cfg.x0, 0.0
    elif axis == "y":
        x0, y0 = 0.0, cfg.y0
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return simulate_pdmp(pair, rates, replace(cfg, x0=x0, y0=y0))


def batch_means(batch_values: np.ndarray) -> tuple[float, float]:
    """Mean and standard error from equal-length batch averages."""
    k = len(batch_values)
    return float(np.mean(batch_values)), float(np.std(batch_values, ddof=1) / math.sqrt(k))


def estimate_lambda(pair: EnvPair, rates: JumpRates, species: str, cfg: SimConfig) -> ErgodicStats:
    """Ergodic estimate of the invasion rate of ``species``.

    The resident runs alone on its axis; the time average of the invader's
    per-capita growth rate after burn-in is split into ``cfg.batches`` batches.
    """
    if species not in ("x", "y"):
        raise ValueError(f"species must be 'x' or 'y', got {species!r}")
    mixing = 100 * (1 / rates.lambda0 + 1 / rates.lambda1)
    if cfg.t_max < mixing:
        raise ValueError(f"t_max={cfg.t_max} is below 100 mean switching cycles ({mixing:.4g})")
    if species == "y":
        x0, y0, col = cfg.x0, 0.0, 4
    else:
        x0, y0, col = 0.0, cfg.y0, 3
    burn = cfg.burn()
    edges = np.linspace(burn, cfg.t_max, cfg.batches + 1)
    run = _run(pair, rates, x0, y0, cfg.i0, cfg.t_max, cfg.step(pair), edges, _rng(cfg.seed))
    integral = run.marks[:, col]
    length = (cfg.t_max - burn) / cfg.batches
    estimate, se = batch_means(np.diff(integral) / length)
    return ErgodicStats(estimate, se, cfg.batches, cfg.t_max - burn)


@dataclass
class RegimeVotes:
    """Replica votes of an empirical regime detection run."""

    counts: dict
    replicas: int
    label: Regime
    inconclusive: bool
    near_extinct: int = 0
    outcomes: list = field(default_factory=list)

    def fraction(self, outcome: Regime) -> float:
        return self.counts.get(outcome, 0) / self.replicas

    def to_dict(self) -> dict:
        return {
            "replicas": self.replicas,
            "label": self.label.slug,
            "inconclusive": self.inconclusive,
            "near_extinct": self.near_extinct,
            "fractions": {r.slug: self.fraction(r) for r in Regime if r is not Regime.BOUNDARY},
        }


def _random_start(pair: EnvPair, rates: JumpRates, rng: np.random.Generator):
    e0, e1 = pair.env0, pair.env1
    x0 = rng.uniform(0.1, 1.0) * max(1 / e0.a, 1 / e1.a)
    y0 = rng.uniform(0.1, 1.0) * max(1 / e0.d, 1 / e1.d)
    p0 = rates.lambda1 / (rates.lambda0 + rates.lambda1)
    i0 = 0 if rng.uniform() < p0 else 1
    return x0, y0, i0


def _replica(pair, rates, cfg, r, threshold, random_start):
    rng = _rng(cfg.seed, r)
    if random_start:
        x0, y0, i0 = _random_start(pair, rates, rng)
    else:
        x0, y0, i0 = cfg.x0, cfg.y0, cfg.i0
    # no absorption at the threshold: a species may dip below it and recover
    run = _run(pair, rates, x0, y0, i0, cfg.t_max, cfg.step(pair), np.empty(0), rng)
    x, y = run.state[1], run.state[2]
    if min(x, y) < threshold:
        # ties broken by the more depleted species
        return (Regime.EXTINCTION_X if x < y else Regime.EXTINCTION_Y), False
    return Regime.PERSISTENCE, min(x, y) < NEAR_EXTINCT


def detect_regime(
    pair: EnvPair,
    rates: JumpRates,
    cfg: SimConfig,
    replicas: int = 50,
    extinction_threshold: float = 1e-9,
    split: float = 0.1,
    random_start: bool = True,
) -> RegimeVotes:
    """Vote on the long-time behaviour with independent replicas of the full process.

    Replica ``r`` draws from the Philox stream keyed by ``(cfg.seed ^ r, cfg.seed)``. With
    ``random_start`` each replica also draws its interior starting point and
    initial mode from that stream. Both extinction outcomes reaching a
    ``split`` share yields :attr:`Regime.RANDOM_EXTINCTION`.

    Votes read the state at ``t_max``: a species counts as extinct when it
    sits below ``extinction_threshold`` there, so transient dips followed by
    recovery do not count.
    """
    if replicas < 20:
        raise ValueError("at least 20 replicas are required")
    if extinction_threshold <= 0:
        raise ValueError("extinction_threshold must be positive")

    def work(r):
        return _replica(pair, rates, cfg, r, extinction_threshold, random_start)

    workers = min(max_workers(), replicas)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(work, range(replicas)))
    else:
        results = [work(r) for r in range(replicas)]
    outcomes = [o for o, _ in results]
    counts = {}
    for o in outcomes:
        counts[o] = counts.get(o, 0) + 1
    near = sum(1 for o, n in results if n)
    fx = counts.get(Regime.EXTINCTION_X, 0) / replicas
    fy = counts.get(Regime.EXTINCTION_Y, 0) / replicas
    if fx >= split and fy >= split:
        label = Regime.RANDOM_EXTINCTION
    else:
        label = max(counts, key=lambda k: (counts[k], -int(k)))
    inconclusive = near == replicas
    return RegimeVotes(counts, replicas, label, inconclusive, near, outcomes)
