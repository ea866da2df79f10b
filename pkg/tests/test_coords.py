import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lvswitch.coords import (
    ChartMismatch,
    JumpRates,
    STCoords,
    UVCoords,
    convert_uv,
    rates_to_uv,
    u_to_s,
    uv_to_rates,
    xi,
)

pos = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


class TestRates:
    @pytest.mark.parametrize("l0, l1", [(0.0, 1.0), (1.0, -1.0), (np.inf, 1.0)])
    def test_invalid(self, l0, l1):
        with pytest.raises(ValueError):
            JumpRates(l0, l1)

    def test_symmetric(self):
        c = rates_to_uv(JumpRates(3.0, 2.0), 3.0, 2.0)
        assert (c.u, c.v) == (0.5, 2.0)

    def test_worked_example(self):
        c = rates_to_uv(JumpRates(3.0, 5.0), 3.0, 2.0)
        assert c.u == pytest.approx(1 / 3.5, rel=1e-14)
        assert c.v == pytest.approx(3.5, rel=1e-14)
        r = uv_to_rates(c)
        assert (r.lambda0, r.lambda1) == pytest.approx((3.0, 5.0), rel=1e-14)

    @given(pos, pos, pos, pos)
    def test_roundtrip(self, l0, l1, w0, w1):
        r = uv_to_rates(rates_to_uv(JumpRates(l0, l1), w0, w1))
        assert r.lambda0 == pytest.approx(l0, rel=1e-14)
        assert r.lambda1 == pytest.approx(l1, rel=1e-14)

    @pytest.mark.parametrize("u, v", [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0)])
    def test_boundary_rejected(self, u, v):
        with pytest.raises(ValueError):
            uv_to_rates(UVCoords(u, v, (1.0, 1.0)))

    def test_uv_validation(self):
        with pytest.raises(ValueError):
            UVCoords(1.2, 1.0, (1.0, 1.0))
        with pytest.raises(ValueError):
            UVCoords(0.5, 1.0, (0.0, 1.0))

    def test_weight_guard(self):
        c = rates_to_uv(JumpRates(1.0, 1.0), 3.0, 2.0)
        c.require_weights(3.0, 2.0)
        with pytest.raises(ChartMismatch):
            c.require_weights(3.0, 1.8)


class TestST:
    @given(pos, pos)
    def test_roundtrip(self, l0, l1):
        st_ = STCoords.from_rates(JumpRates(l0, l1))
        assert st_.s * st_.t == pytest.approx(l0, rel=1e-14)
        assert (1 - st_.s) * st_.t == pytest.approx(l1, rel=1e-14)
        r = st_.to_rates()
        assert (r.lambda0, r.lambda1) == pytest.approx((l0, l1), rel=1e-14)


class TestXi:
    def test_endpoints(self):
        assert xi(0.0, 2.0, 3.0, 2.0)[0] == 0.0
        assert xi(1.0, 2.0, 3.0, 2.0)[0] == 1.0

    def test_equal_weights(self):
        u, v = xi(0.3, 4.0, 2.0, 2.0)
        assert (u, v) == pytest.approx((0.3, 2.0), rel=1e-15)

    def test_worked_example(self):
        u, v = xi(0.5, 1.0, 3.0, 2.0)
        assert u == pytest.approx(0.4, rel=1e-14)
        assert v == pytest.approx(2.5 / 6, rel=1e-14)

    @given(st.floats(0.001, 0.999), pos, pos, pos)
    def test_agrees_with_rates_chart(self, s, t, a0, a1):
        u, v = xi(s, t, a0, a1)
        c = rates_to_uv(JumpRates(s * t, (1 - s) * t), a0, a1)
        assert u == pytest.approx(c.u, rel=1e-14, abs=1e-15)
        assert v == pytest.approx(c.v, rel=1e-14)

    @given(st.floats(0.0, 1.0), pos, pos, pos, pos)
    def test_triangular(self, s, t1, t2, a0, a1):
        assert xi(s, t1, a0, a1)[0] == xi(s, t2, a0, a1)[0]

    @given(st.floats(0.0, 1.0), pos, pos)
    def test_u_to_s_inverts(self, s, a0, a1):
        u, _ = xi(s, 1.0, a0, a1)
        assert u_to_s(u, a0, a1) == pytest.approx(s, abs=1e-12)

    def test_vectorized(self):
        u, v = xi(np.array([0.2, 0.8]), np.array([1.0, 2.0]), 3.0, 2.0)
        assert u.shape == v.shape == (2,)


class TestConvert:
    @given(st.floats(0.01, 0.99), pos, pos, pos, pos, pos)
    def test_through_rates(self, u, v, f0, f1, t0, t1):
        nu, nv = convert_uv(u, v, (f0, f1), (t0, t1))
        want = rates_to_uv(uv_to_rates(UVCoords(u, v, (f0, f1))), t0, t1)
        assert float(nu) == pytest.approx(want.u, rel=1e-12, abs=1e-15)
        assert float(nv) == pytest.approx(want.v, rel=1e-12)

    def test_boundary_to_boundary(self):
        nu, _ = convert_uv(np.array([0.0, 1.0]), 1.0, (3.0, 2.0), (3.0, 1.8))
        assert nu.tolist() == [0.0, 1.0]
