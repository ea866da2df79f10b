import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from lvswitch.coords import ChartMismatch, JumpRates, rates_to_uv, u_to_s
from lvswitch.envmodel import EnvPair, Environment, mix
from lvswitch.invasion import (
    BetaParams,
    DegenerateLogistic,
    alpha_type12,
    beta_expectation,
    beta_quadrature,
    chart_weights,
    coefficient_a,
    estimate_invasion_rate,
    expected_phi,
    expected_phi_quadrature,
    invasion_rate,
    lambda_x,
    lambda_x_uv,
    lambda_y,
    limit_v_inf,
    limit_v_zero,
    mean_reciprocal,
    phi,
    poly_P,
    threshold_analysis,
)
from lvswitch.sim import SimConfig, estimate_lambda

from conftest import random_type12_pair

# zero of c_s - a_s and of g(u) for the rho pair, found by the scans below
ALPHA_RHO = 0.5131670194948
ALPHA_BAR_RHO = 1 / 1.45
# complement of the negativity set of T for the Type 3-3 pair
T33_NONNEG = (0.7324717, 0.9480839)

# coeff_a == 0: r1 c1 a0 = r0 c0 a1 = 4
FLAT_PAIR = EnvPair(Environment(1, 5, 2, 8, 3, 3), Environment(2, 11, 1, 9, 0.5, 2))


def scan_roots(f, n=10_000, tol=1e-10):
    """Sign changes of ``f`` on a uniform grid of [0, 1], refined by bisection."""
    grid = np.linspace(0.0, 1.0, n + 1)
    vals = np.array([f(u) for u in grid])
    roots = []
    for k in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        lo, hi = grid[k], grid[k + 1]
        flo = vals[k]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if np.sign(f(mid)) == np.sign(flo):
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return roots


def c_minus_a(pair):
    w0, w1 = pair.env0.alpha, pair.env1.alpha

    def f(u):
        e = mix(pair, float(u_to_s(u, w0, w1)))
        return e.c - e.a

    return f


def g_scan(pair):
    e0, e1 = pair.env0, pair.env1
    return lambda u: (1 - u) * e0.beta / e0.alpha * (1 - e0.c / e0.a) + u * e1.beta / e1.alpha * (
        1 - e1.c / e1.a
    )


class TestOracles:
    """The frozen constants above are reproduced by the independent scans."""

    def test_rho_alpha_scan(self, pair9):
        assert scan_roots(c_minus_a(pair9)) == pytest.approx([ALPHA_RHO], abs=1e-9)

    def test_rho_alpha_bar_scan(self, pair9):
        assert scan_roots(g_scan(pair9)) == pytest.approx([ALPHA_BAR_RHO], abs=1e-9)

    def test_33_scan(self, pair33):
        assert scan_roots(c_minus_a(pair33)) == pytest.approx(T33_NONNEG, abs=1e-6)


class TestPoly:
    def test_coefficient_a_value(self, pair9):
        assert coefficient_a(pair9) == pytest.approx(-3.1, abs=1e-14)

    def test_33_coefficient(self, pair33):
        assert coefficient_a(pair33) == pytest.approx(57.6, rel=1e-14)

    @pytest.mark.parametrize("which", ["pair9", "pair33"])
    def test_expansion_matches_product(self, which, request):
        pair = request.getfixturevalue(which)
        e0, e1 = pair.env0, pair.env1
        sign = math.copysign(1.0, e1.a - e0.a)
        poly = poly_P(pair)
        for x in [-1.0, 0.0, 0.3, 1.7, 4.0]:
            direct = sign * (
                e1.beta / e1.alpha * (1 - e1.c * x) * (1 - e0.a * x)
                - e0.beta / e0.alpha * (1 - e0.c * x) * (1 - e1.a * x)
            )
            assert poly(x) == pytest.approx(direct, rel=1e-12, abs=1e-12)

    def test_common_root(self):
        pair = EnvPair(Environment(1, 1, 2, 2, 1, 2), Environment(3, 1, 2, 2, 2, 4))
        assert poly_P(pair)(0.5) == pytest.approx(0.0, abs=1e-14)

    def test_degenerate(self):
        env = Environment(1, 5, 2, 8, 3, 3)
        with pytest.raises(DegenerateLogistic):
            poly_P(EnvPair(env, env))


class TestPhi:
    def test_reciprocal_form(self, pair9, rng):
        y = rng.uniform(0, 1, 100)
        poly = poly_P(pair9)
        m = 1 + y
        assert np.allclose(phi(pair9, y), poly.c0 * m + poly.c1 + poly.c2 / m, rtol=1e-12, atol=1e-12)

    def test_concave_for_negative_a(self, pair9):
        y = np.linspace(0, 1, 1000)
        assert np.all(np.diff(phi(pair9, y), 2) <= 0)

    def test_endpoint_sign(self, pair9):
        assert np.sign(phi(pair9, 1.0)) == np.sign(limit_v_inf(pair9, 1.0)) == 1


class TestQuadrature:
    @pytest.mark.parametrize("p, q", [(0.3, 0.7), (2.0, 5.0), (60.0, 40.0), (1e3, 2e3)])
    def test_rule_normalized(self, p, q):
        rule = beta_quadrature(BetaParams(p, q), 20)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all((rule.nodes > 0) & (rule.nodes < 1))

    @pytest.mark.parametrize("p, q", [(0.3, 0.7), (2.0, 5.0), (6.0, 4.0)])
    def test_moments(self, p, q):
        rule = beta_quadrature(BetaParams(p, q), 10)
        for k in range(1, 8):
            exact = np.prod([(p + j) / (p + q + j) for j in range(k)])
            assert np.dot(rule.weights, rule.nodes**k) == pytest.approx(exact, rel=1e-12)

    def test_invalid_shape(self):
        with pytest.raises(ValueError):
            BetaParams(0.0, 1.0)

    def test_constant_and_linear(self):
        for u, v in [(0.2, 0.1), (0.6, 10.0), (0.9, 300.0)]:
            assert beta_expectation(lambda y: np.full_like(y, 2.5), u, v) == pytest.approx(2.5, rel=1e-13)
            assert beta_expectation(lambda y: 3 * y - 1, u, v) == pytest.approx(3 * u - 1, rel=1e-12, abs=1e-13)


class TestMeanReciprocal:
    @pytest.mark.parametrize("a0, a1", [(1.0, 2.0), (6.0, 3.0), (0.5, 4.5), (5.0, 4.9)])
    @pytest.mark.parametrize("u, v", [(0.05, 0.01), (0.5, 1.0), (0.3, 40.0), (0.95, 1e3)])
    def test_hypergeometric(self, a0, a1, u, v):
        far, near = max(a0, a1), min(a0, a1)
        b = (1 - u) * v if a1 > a0 else u * v
        want = float(mpmath.hyp2f1(1, b, v, (far - near) / far)) / far
        assert mean_reciprocal(a0, a1, u, v) == pytest.approx(want, rel=1e-13)

    @pytest.mark.parametrize("u, v", [(0.4, 3.0), (0.7, 12.0)])
    def test_against_density(self, u, v):
        dist = stats.beta(u * v, (1 - u) * v)
        want, _ = integrate.quad(lambda y: dist.pdf(y) / (2 + 3 * y), 0, 1)
        assert mean_reciprocal(2.0, 5.0, u, v) == pytest.approx(want, rel=1e-10)

    def test_equal_coefficients(self):
        assert mean_reciprocal(2.0, 2.0, 0.3, 1.0) == 0.5

    def test_vectorized(self):
        u = np.linspace(0.1, 0.9, 5)
        got = mean_reciprocal(1.0, 2.0, u[:, None], np.array([0.1, 1.0, 10.0])[None, :])
        assert got.shape == (5, 3)
        assert got[2, 1] == pytest.approx(mean_reciprocal(1.0, 2.0, u[2], 1.0), rel=1e-15)


class TestExpectedPhi:
    @pytest.mark.parametrize("which", ["pair9", "pair33"])
    @pytest.mark.parametrize("u, v", [(0.1, 0.5), (0.5, 2.0), (0.6, 10.0), (0.9, 200.0)])
    def test_quadrature_agrees(self, which, u, v, request):
        pair = request.getfixturevalue(which)
        assert expected_phi(pair, u, v) == pytest.approx(expected_phi_quadrature(pair, u, v), rel=1e-11, abs=1e-12)

    def test_beta_sampling(self, pair9):
        draws = np.random.default_rng(7).beta(6.0, 4.0, size=1_000_000)
        vals = phi(pair9, draws)
        se = vals.std(ddof=1) / math.sqrt(len(vals))
        assert abs(expected_phi(pair9, 0.6, 10.0) - vals.mean()) <= 3 * se

    def test_flat_pair_moment_formula(self):
        assert coefficient_a(FLAT_PAIR) == 0.0
        poly = poly_P(FLAT_PAIR)
        for u in [0.1, 0.5, 0.9]:
            want = poly.c0 * (1 + u) + poly.c1
            vals = [expected_phi(FLAT_PAIR, u, v) for v in np.logspace(-3, 4, 15)]
            assert np.allclose(vals, want, rtol=0, atol=1e-12)


class TestShapeProperties:
    """Monotone in v and concave in u when coeff_a < 0, both reversed when coeff_a > 0."""

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_random_type12(self, seed):
        pair = random_type12_pair(np.random.default_rng(seed))
        a = coefficient_a(pair)
        sgn = -np.sign(a)
        vs = np.logspace(-3, 4, 50)
        for u in (0.2, 0.5, 0.8):
            e = expected_phi(pair, u, vs)
            assert np.all(sgn * np.diff(e) >= -1e-12 * (1 + np.abs(e[:-1])))
        us = np.linspace(0.01, 0.99, 99)
        for v in (0.1, 1.0, 10.0):
            e = expected_phi(pair, us, v)
            assert np.all(sgn * np.diff(e, 2) <= 1e-12 * (1 + np.abs(e).max()))


class TestLambda:
    def test_sign_follows_expected_phi(self, pair9, pair33):
        for pair in (pair9, pair33):
            u = np.linspace(0.02, 0.98, 25)[:, None]
            v = np.logspace(-2, 3, 25)[None, :]
            assert np.array_equal(np.sign(lambda_y(pair, u, v)), np.sign(expected_phi(pair, u, v)))

    @pytest.mark.parametrize("which", ["pair9", "pair33"])
    @pytest.mark.parametrize("u", np.round(np.arange(0.05, 0.96, 0.05), 2))
    def test_limits(self, which, u, request):
        pair = request.getfixturevalue(which)
        hi = limit_v_inf(pair, u)
        lo = limit_v_zero(pair, u)
        assert abs(lambda_y(pair, u, 1e6) - hi) <= 1e-4 * max(1.0, abs(hi))
        assert abs(lambda_y(pair, u, 1e-6) - lo) <= 1e-4 * max(1.0, abs(lo))

    def test_vectorized(self, pair9):
        u = np.array([0.2, 0.7])
        v = np.array([0.5, 50.0])
        got = lambda_y(pair9, u, v)
        assert got[1] == lambda_y(pair9, 0.7, 50.0)

    def test_x_rate_is_swapped_y_rate(self, pair9):
        rates = JumpRates(2.0, 7.0)
        c = rates_to_uv(rates, pair9.env0.beta, pair9.env1.beta)
        assert lambda_x(pair9, rates) == lambda_y(pair9.swapped(), c.u, c.v)
        assert lambda_x_uv(pair9, c.u, c.v) == lambda_x(pair9, rates)

    def test_chart_guard(self, pair9):
        alpha_chart = rates_to_uv(JumpRates(2.0, 7.0), *chart_weights(pair9, "y"))
        with pytest.raises(ChartMismatch):
            invasion_rate(pair9, "x", alpha_chart)
        beta_chart = rates_to_uv(JumpRates(2.0, 7.0), *chart_weights(pair9, "x"))
        assert invasion_rate(pair9, "x", beta_chart) == lambda_x(pair9, JumpRates(2.0, 7.0))

    def test_degenerate_species(self):
        pair = EnvPair(Environment(1, 5, 2, 8, 3, 3), Environment(2, 11, 1, 8, 2, 1.8))
        with pytest.raises(DegenerateLogistic, match="d0 == d1"):
            invasion_rate(pair, "x", JumpRates(1.0, 1.0))
        assert estimate_invasion_rate(pair, "y", JumpRates(1.0, 1.0)).provenance == "closed-form"
        with pytest.raises(DegenerateLogistic):
            estimate_invasion_rate(pair, "x", JumpRates(1.0, 1.0))
        est = estimate_invasion_rate(pair, "x", JumpRates(1.0, 1.0), SimConfig(t_max=2e3))
        assert est.provenance == "monte-carlo" and est.std_error > 0


class TestMonteCarloAgreement:
    def test_rho_pair_y(self, pair9):
        rates = JumpRates(0.6 * 10 * 3, 0.4 * 10 * 2)
        s = estimate_lambda(pair9, rates, "y", SimConfig(t_max=1e4, burn_in=1e3, seed=11))
        assert abs(s.estimate - lambda_y(pair9, 0.6, 10.0)) <= 3 * s.std_error

    def test_33_pair_x(self, pair33):
        # a0 > a1 on both axes, where the sign of the prefactor matters
        rates = JumpRates(10.0, 10.0)
        s = estimate_lambda(pair33, rates, "x", SimConfig(t_max=1e4, burn_in=1e3, seed=12))
        assert abs(s.estimate - lambda_x(pair33, rates)) <= 3 * s.std_error

    def test_33_pair_y(self, pair33):
        rates = JumpRates(3.0, 4.0)
        s = estimate_lambda(pair33, rates, "y", SimConfig(t_max=1e4, burn_in=1e3, seed=13))
        assert abs(s.estimate - invasion_rate(pair33, "y", rates)) <= 3 * s.std_error


class TestLimits:
    def test_endpoint_values(self, pair9):
        assert limit_v_inf(pair9, 0.0) == pytest.approx(-3.0, abs=1e-14)
        assert limit_v_inf(pair9, 1.0) == pytest.approx(0.9, abs=1e-14)

    @given(st.integers(0, 2**32 - 1))
    def test_endpoints_coincide(self, seed):
        pair = random_type12_pair(np.random.default_rng(seed))
        for u in (0.0, 1.0):
            assert limit_v_zero(pair, u) == pytest.approx(limit_v_inf(pair, u), rel=1e-12, abs=1e-14)

    def test_sign_pattern(self, pair9):
        assert limit_v_inf(pair9, ALPHA_RHO - 0.01) < 0 < limit_v_inf(pair9, ALPHA_RHO + 0.01)
        assert limit_v_inf(pair9, ALPHA_RHO) == pytest.approx(0.0, abs=1e-9)
        assert limit_v_zero(pair9, ALPHA_BAR_RHO - 0.01) < 0 < limit_v_zero(pair9, ALPHA_BAR_RHO + 0.01)


class TestThresholds:
    def test_rho_pair(self, pair9):
        t = threshold_analysis(pair9)
        assert t.R == pytest.approx(10 / 9, rel=1e-14)
        assert (t.A, t.B, t.C) == pytest.approx((1 / 9, -20 / 9, 10 / 9), rel=1e-13)
        assert t.T(0.0) > 0 and t.T(1.0) == pytest.approx(-1.0, rel=1e-13)
        assert t.alpha == pytest.approx(ALPHA_RHO, abs=1e-10)
        assert t.alpha_bar == pytest.approx(ALPHA_BAR_RHO, abs=1e-14)
        assert t.coeff_a == pytest.approx(-3.1, abs=1e-14)
        assert t.alpha < t.alpha_bar
        assert t.i_tilde == ((pytest.approx(ALPHA_RHO, abs=1e-10), 1.0),)

    def test_33_pair(self, pair33):
        t = threshold_analysis(pair33)
        assert t.R == pytest.approx(25.0)
        assert (t.A, t.B, t.C) == pytest.approx((-72.0, 121.0, -50.0), rel=1e-13)
        assert t.discriminant == pytest.approx(241.0, rel=1e-13)
        (lo, hi), = t.t_nonnegative
        assert (lo, hi) == pytest.approx(T33_NONNEG, abs=1e-6)
        assert t.alpha_points == pytest.approx(T33_NONNEG, abs=1e-6)
        assert t.alpha is None
        assert len(t.i_tilde) == 2

    def test_t_matches_mixed_coefficients(self, pair33, pair9):
        for pair in (pair9, pair33):
            t = threshold_analysis(pair)
            f = c_minus_a(pair)
            for u in np.linspace(0.0, 1.0, 21):
                assert f(u) == pytest.approx(t.T(u) / (t.R * (1 - u) + u), rel=1e-10, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_type12_structure(self, seed):
        pair = random_type12_pair(np.random.default_rng(seed))
        t = threshold_analysis(pair)
        assert t.C > 0 and t.A + t.B + t.C < 0
        assert t.i_tilde == ((t.alpha, 1.0),)
        assert alpha_type12(t.A, t.B, t.C) == pytest.approx(t.alpha, abs=1e-10)
        assert t.alpha_bar is not None

    def test_flat_pair_equal_thresholds(self):
        t = threshold_analysis(FLAT_PAIR)
        assert t.alpha == pytest.approx(t.alpha_bar, abs=1e-9)

    def test_ordering_many_pairs(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            pair = random_type12_pair(rng)
            t = threshold_analysis(pair)
            a = t.coeff_a
            expected = 0 if abs(a) < 1e-9 else -np.sign(a)
            assert np.sign(t.alpha_bar - t.alpha) == expected
