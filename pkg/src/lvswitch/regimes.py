"""Regime labels from invasion-rate signs, regime maps, and the environment catalog."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .coords import JumpRates, convert_uv, uv_to_rates, UVCoords
from .envmodel import EnvPair, EnvType, classify
from .invasion import chart_weights, has_closed_form, invasion_rate_uv

DEFAULT_BAND = 1e-9


class Regime(enum.IntEnum):
    PERSISTENCE = 0
    EXTINCTION_Y = 1
    EXTINCTION_X = 2
    RANDOM_EXTINCTION = 3
    BOUNDARY = 4

    @property
    def slug(self) -> str:
        return self.name.lower()

    @classmethod
    def from_slug(cls, slug: str) -> Regime:
        return cls[slug.upper()]


FOUR_REGIMES = (
    Regime.PERSISTENCE,
    Regime.EXTINCTION_Y,
    Regime.EXTINCTION_X,
    Regime.RANDOM_EXTINCTION,
)


def classify_regime(lx, ly, band=0.0):
    """Label from the signs of the x and y invasion rates.

    Works elementwise on arrays; ``band`` may itself be an array (e.g. three
    Monte Carlo standard errors per cell).
    """
    if np.any(np.asarray(band) < 0):
        raise ValueError("band must be nonnegative")
    lx = np.asarray(lx, dtype=float)
    ly = np.asarray(ly, dtype=float)
    codes = np.where(
        lx > 0,
        np.where(ly > 0, Regime.PERSISTENCE, Regime.EXTINCTION_Y),
        np.where(ly > 0, Regime.EXTINCTION_X, Regime.RANDOM_EXTINCTION),
    )
    codes = np.where((np.abs(lx) <= band) | (np.abs(ly) <= band), Regime.BOUNDARY, codes)
    codes = codes.astype(np.int8)
    if codes.ndim == 0:
        return Regime(int(codes))
    return codes


@dataclass
class RegimeMap:
    """Regime labels on a (u, v) grid of the alpha-weighted chart; rows follow ``u_grid``."""

    u_grid: np.ndarray
    v_grid: np.ndarray
    labels: np.ndarray
    band: float
    lambda_x: np.ndarray
    lambda_y: np.ndarray

    def __post_init__(self):
        if self.labels.shape != (len(self.u_grid), len(self.v_grid)):
            raise ValueError("label matrix does not match the grids")

    def present(self) -> set:
        return {Regime(int(c)) for c in np.unique(self.labels)}

    def regimes(self) -> set:
        """Distinct labels other than Boundary."""
        return self.present() - {Regime.BOUNDARY}

    def to_csv(self) -> str:
        rows = ["u,v,label"]
        for i, u in enumerate(self.u_grid):
            for j, v in enumerate(self.v_grid):
                rows.append(f"{u:.17g},{v:.17g},{Regime(int(self.labels[i, j])).slug}")
        return "\n".join(rows) + "\n"

    def to_dict(self) -> dict:
        return {
            "u_grid": self.u_grid.tolist(),
            "v_grid": self.v_grid.tolist(),
            "band": self.band,
            "labels": [[Regime(int(c)).slug for c in row] for row in self.labels],
        }


def default_grid(n_u: int = 200, n_v: int = 200, v_min: float = 1e-2, v_max: float = 1e3):
    u = np.arange(1, n_u + 1) / (n_u + 1)
    v = np.logspace(np.log10(v_min), np.log10(v_max), n_v)
    return u, v


def _mc_rates(pair, species, U, V, mc_config):
    from .sim import estimate_lambda

    wa = chart_weights(pair, "y")
    values = np.empty(U.shape)
    errors = np.empty(U.shape)
    for idx in np.ndindex(U.shape):
        rates = uv_to_rates(UVCoords(float(U[idx]), float(V[idx]), wa))
        stats = estimate_lambda(pair, rates, species, mc_config)
        values[idx] = stats.estimate
        errors[idx] = stats.std_error
    return values, errors


def regime_map(pair: EnvPair, u_grid, v_grid, band: float = DEFAULT_BAND, mc_config=None) -> RegimeMap:
    """Evaluate both invasion rates on the grid and label each cell.

    A species without a closed form is estimated by Monte Carlo when
    ``mc_config`` is given; its cells then use three standard errors as band.
    """
    u_grid = np.asarray(u_grid, dtype=float)
    v_grid = np.asarray(v_grid, dtype=float)
    U, V = np.meshgrid(u_grid, v_grid, indexing="ij")
    wa = chart_weights(pair, "y")
    wb = chart_weights(pair, "x")
    bands = np.full(U.shape, float(band))
    rates = {}
    for species in ("x", "y"):
        if has_closed_form(pair, species):
            if species == "y":
                rates[species] = invasion_rate_uv(pair, "y", U, V)
            else:
                Ub, Vb = convert_uv(U, V, wa, wb)
                rates[species] = invasion_rate_uv(pair, "x", Ub, Vb)
        elif mc_config is not None:
            values, errors = _mc_rates(pair, species, U, V, mc_config)
            rates[species] = values
            bands = np.maximum(bands, 3 * errors)
        else:
            invasion_rate_uv(pair, species, U, V)  # raises DegenerateLogistic
    labels = classify_regime(rates["x"], rates["y"], bands)
    return RegimeMap(u_grid, v_grid, np.asarray(labels), band, rates["x"], rates["y"])


@dataclass(frozen=True)
class Witness:
    regime: Regime
    u: float
    v: float
    rates: JumpRates
    lambda_x: float
    lambda_y: float

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.slug,
            "u": self.u,
            "v": self.v,
            "lambda0": self.rates.lambda0,
            "lambda1": self.rates.lambda1,
            "Lambda_x": self.lambda_x,
            "Lambda_y": self.lambda_y,
        }


@dataclass
class WitnessSet:
    witnesses: dict

    @property
    def success(self) -> bool:
        return all(r in self.witnesses for r in FOUR_REGIMES)

    def missing(self) -> list:
        return [r for r in FOUR_REGIMES if r not in self.witnesses]

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "missing": [r.slug for r in self.missing()],
            "witnesses": [w.to_dict() for w in self.witnesses.values()],
        }


def witnesses_from_map(pair: EnvPair, rmap: RegimeMap) -> WitnessSet:
    """One witness per regime: the cell maximizing ``min(|Lx|, |Ly|)``."""
    margin = np.minimum(np.abs(rmap.lambda_x), np.abs(rmap.lambda_y))
    wa = chart_weights(pair, "y")
    found = {}
    for regime in FOUR_REGIMES:
        mask = rmap.labels == regime
        if not mask.any():
            continue
        i, j = np.unravel_index(np.argmax(np.where(mask, margin, -np.inf)), mask.shape)
        u, v = float(rmap.u_grid[i]), float(rmap.v_grid[j])
        found[regime] = Witness(
            regime, u, v, uv_to_rates(UVCoords(u, v, wa)),
            float(rmap.lambda_x[i, j]), float(rmap.lambda_y[i, j]),
        )
    return WitnessSet(found)


def four_regime_search(pair: EnvPair, u_grid=None, v_grid=None, band: float = DEFAULT_BAND) -> WitnessSet:
    if u_grid is None or v_grid is None:
        du, dv = default_grid()
        u_grid = du if u_grid is None else u_grid
        v_grid = dv if v_grid is None else v_grid
    if len(u_grid) == 0 or len(v_grid) == 0:
        raise ValueError("grid must be nonempty")
    return witnesses_from_map(pair, regime_map(pair, u_grid, v_grid, band))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    pair: EnvPair
    types: tuple[EnvType, EnvType]

    @property
    def slug(self) -> str:
        return "paper-" + self.name.split()[-1]

    def check_types(self) -> bool:
        return (classify(self.pair.env0), classify(self.pair.env1)) == self.types


_TYPE_BY_DIGIT = {"1": EnvType.TYPE1, "2": EnvType.TYPE2, "3": EnvType.TYPE3, "4": EnvType.TYPE4}
CATALOG_NAMES = ("1-1", "1-2", "1-3", "1-4", "3-3", "3-4", "4-4")


def load_pair(name: str) -> EnvPair:
    """Catalog pair by short name such as ``"1-2"``."""
    text = resources.files("lvswitch").joinpath("data", f"paper-{name}.json").read_text()
    return EnvPair.from_dict(json.loads(text))


def catalog() -> list[CatalogEntry]:
    entries = []
    for name in CATALOG_NAMES:
        t0, t1 = name.split("-")
        entries.append(CatalogEntry(f"Type {name}", load_pair(name), (_TYPE_BY_DIGIT[t0], _TYPE_BY_DIGIT[t1])))
    return entries
