from __future__ import annotations

import contextlib
import time
from dataclasses import dataclass

import numpy as np
import pytest

from lvswitch.envmodel import EnvPair, EnvType, Environment, classify


def rho_pair(rho: float) -> EnvPair:
    """Type 1 / Type 2 pair whose second environment has d = rho."""
    return EnvPair(Environment(1, 5, 2, 8, 3, 3), Environment(2, 11, 1, rho, 2, 1.8))


def random_type12_pair(rng: np.random.Generator, lo: float = 0.5, hi: float = 5.0) -> EnvPair:
    """Uniform coefficients, resampled until env0 is Type 1, env1 Type 2 and a0 != a1."""
    while True:
        e0 = Environment(*rng.uniform(lo, hi, 6))
        e1 = Environment(*rng.uniform(lo, hi, 6))
        if classify(e0) is EnvType.TYPE1 and classify(e1) is EnvType.TYPE2 and e0.a != e1.a:
            return EnvPair(e0, e1)


@pytest.fixture
def pair9():
    return rho_pair(9.0)


@pytest.fixture
def pair10():
    return rho_pair(10.0)


@pytest.fixture
def pair33():
    return EnvPair(Environment(6, 1, 4, 2, 1, 5), Environment(3, 3, 2, 5.5, 5, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool = False
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"criterion {self.number} {status} ({self.seconds:.1f} s) {self.title}: {self.detail}"


_OUTCOMES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_OUTCOMES] = []


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance outcome for the terminal summary."""

    @contextlib.contextmanager
    def record(number, title):
        out = Outcome(number, title)
        start = time.perf_counter()
        try:
            yield out
        except Exception as exc:
            out.ok = False
            out.detail = f"{type(exc).__name__}: {exc}"
            raise
        finally:
            out.seconds = time.perf_counter() - start
            request.config.stash[_OUTCOMES].append(out)

    return record


def pytest_terminal_summary(terminalreporter, config):
    outcomes = sorted(config.stash.get(_OUTCOMES, []), key=lambda o: o.number)
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for out in outcomes:
        terminalreporter.write_line(out.line())
