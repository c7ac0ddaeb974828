"""Period arithmetic, spec validation and the tau-map helpers."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from periodize.core import (
    BasinGrid,
    DomainError,
    EquationSpec,
    PeriodClassification,
    as_rational,
    lcm_periods,
    period_T,
)
from periodize.trick import (
    TrickParams,
    UnsupportedError,
    lambda_second_order,
    lift,
    params_burgers,
    params_first_order,
    params_kdv,
    params_second_order,
    params_shock,
    realify,
    tau_circle,
    tau_circle_geometry,
    tau_exponential,
)


class TestPeriodT:
    def test_values(self):
        assert period_T(2 * math.pi) == pytest.approx(1.0)
        assert period_T(-2 * math.pi) == pytest.approx(1.0)
        assert period_T(1.0) == pytest.approx(6.283185307179586)

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            period_T(0.0)


class TestLcm:
    def test_examples(self):
        assert lcm_periods(Fraction(1, 2), 1) == 1
        assert lcm_periods(Fraction(2, 3), 1) == 2
        assert lcm_periods(1, 1) == 1

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            lcm_periods(0, 1)
        with pytest.raises(DomainError):
            lcm_periods(Fraction(-1, 2), 1)

    def test_floats_refused(self):
        with pytest.raises(DomainError):
            as_rational(0.5)

    @given(
        st.fractions(min_value=Fraction(1, 12), max_value=20, max_denominator=12),
        st.fractions(min_value=Fraction(1, 12), max_value=20, max_denominator=12),
    )
    def test_is_least_common_multiple(self, a, b):
        L = lcm_periods(a, b)
        assert (L / a).denominator == 1 and (L / b).denominator == 1
        # no smaller common multiple among the divisors of L/a
        k = int(L / a)
        for j in range(1, k):
            assert ((j * a) / b).denominator != 1


class TestSpecValidation:
    def test_p_equals_q_rejected(self):
        with pytest.raises(DomainError):
            EquationSpec("1.1", {"alpha": 1}, 1.0, {"p": 2, "q": 2})

    def test_non_coprime_rejected(self):
        with pytest.raises(DomainError):
            EquationSpec("1.1", {"alpha": 1}, 1.0, {"p": 4, "q": 2})

    def test_zero_omega_rejected(self):
        with pytest.raises(DomainError):
            EquationSpec("1.5", {"alpha": 1}, 0.0)

    def test_unknown_id_rejected(self):
        with pytest.raises(DomainError):
            EquationSpec("9.99", {}, 1.0)

    def test_accepts_catalog_instance(self):
        s = EquationSpec("1.1", {"alpha": 1}, -2.0, {"p": 3, "q": 2})
        assert s.T == pytest.approx(math.pi)

    def test_periodic_needs_positive_period(self):
        with pytest.raises(DomainError):
            PeriodClassification.periodic(0)

    def test_basin_grid_size(self):
        g = BasinGrid((-1, 1), (-1, 1), (3, 4))
        assert g.size == 12
        re, im = g.centers()
        assert len(re) == 3 and len(im) == 4
        with pytest.raises(DomainError):
            BasinGrid((-1, 1), (-1, 1), (-1, 2))


class TestTauMaps:
    def test_circle_values(self):
        assert tau_circle(0.0, 1.0) == 0
        assert abs(tau_circle(2 * math.pi / 3.0, 3.0)) < 1e-15
        assert tau_circle(math.pi, 1.0) == pytest.approx(2j)

    def test_geometry(self):
        c, r = tau_circle_geometry(1.0)
        assert c == pytest.approx(1j) and r == pytest.approx(1.0)
        c, r = tau_circle_geometry(2.0)
        assert c == pytest.approx(0.5j) and r == pytest.approx(0.5)

    @given(st.floats(0.1, 10.0), st.floats(-20.0, 20.0))
    def test_circle_radius(self, omega, t):
        c, r = tau_circle_geometry(omega)
        assert abs(abs(tau_circle(t, omega) - c) - r) < 1e-12 * (1 + r)

    def test_exponential(self):
        assert tau_exponential(0.0, 1.0) == pytest.approx(-1j)
        assert tau_exponential(math.pi, 1.0) == pytest.approx(1j)
        ts = np.linspace(0, 10, 100)
        assert np.allclose(np.abs(tau_exponential(ts, 2.5)), 1 / 2.5)

    def test_lift(self):
        p = TrickParams(omega=1.0, lam=1, omega_cap=1.0)
        assert lift(0.3 + 0.1j, 0.0, p) == 0.3 + 0.1j
        assert lift(1.0, math.pi, p) == pytest.approx(-1.0)
        p0 = TrickParams(omega=1.0, lam=0, omega_cap=1.0, check_relation=False)
        assert lift(2.0, 1.7, p0) == 2.0

    def test_relation_enforced(self):
        with pytest.raises(DomainError):
            TrickParams(omega=1.0, lam=2, omega_cap=1.0)
        with pytest.raises(DomainError):
            TrickParams(omega=-1.0, lam=1, omega_cap=-1.0)


class TestParams:
    @pytest.mark.parametrize(
        "p,q,lam,cap", [(2, 1, Fraction(1), 1.0), (3, 1, Fraction(1, 2), 0.5), (1, 2, Fraction(-2), -2.0)]
    )
    def test_first_order(self, p, q, lam, cap):
        tp = params_first_order(p, q, 1.0)
        assert tp.lam == lam and tp.omega_cap == pytest.approx(cap)

    def test_first_order_linear_case(self):
        with pytest.raises(DomainError):
            params_first_order(1, 1, 1.0)

    @pytest.mark.parametrize(
        "p,q,omega,lam,cap", [(1, 1, 1.0, Fraction(1), 1.0), (2, 1, 2.0, Fraction(1, 2), 1.0), (-1, 1, 1.0, Fraction(-1), -1.0)]
    )
    def test_shock(self, p, q, omega, lam, cap):
        tp = params_shock(p, q, omega)
        assert tp.lam == lam and tp.omega_cap == pytest.approx(cap)

    def test_shock_p_zero(self):
        with pytest.raises(DomainError):
            params_shock(0, 1, 1.0)

    def test_burgers(self):
        tp = params_burgers(1.0)
        assert tp.omega == 2.0 and tp.lam == tp.mu == Fraction(1, 2)
        assert params_burgers(math.pi).omega == pytest.approx(2 * math.pi)
        assert tp.t_p == pytest.approx(period_T(1.0) / 2)

    def test_kdv(self):
        tp = params_kdv(1, 1, 1.0)
        assert tp.lam == Fraction(2, 3) and tp.omega == 3.0
        # lam omega = 2 (q/p) Omega with omega = 3 Omega
        assert params_kdv(2, 1, 1.0).lam == Fraction(1, 3)

    def test_second_order(self):
        assert lambda_second_order(-3, 1, 3, 1) == 1
        for n in range(1, 4):
            for m in range(0, 4):
                assert lambda_second_order(m, 1, 2 * n + 1, n) == Fraction(-1, n * m + n + 1)
                if m >= 1:
                    assert lambda_second_order(-(2 * m + 1), 1, 2 * n + 1, n) == Fraction(1, 2 * n * m - 1)
        tp = params_second_order(-3, 1, 3, 1, 2.0)
        assert tp.omega == pytest.approx(2.0)


class TestRealify:
    def test_first_order_p2(self):
        s = EquationSpec("1.1", {"alpha": 1 + 2j}, 1.0, {"p": 2, "q": 1})
        r = realify(s)
        assert r.id == "1.3"
        assert r.param("a1") == 1 and r.param("a2") == 2

    def test_rational_family(self):
        s = EquationSpec("1.24", {"alpha": 1 + 1j, "beta": 0.5}, 1.0)
        assert realify(s).id == "1.27"

    def test_unsupported(self):
        with pytest.raises(UnsupportedError):
            realify(EquationSpec("1.1", {"alpha": 1}, 1.0, {"p": 1, "q": 2}))


def test_principal_branch_consistency():
    # the lift of a constant is a pure rotation with the lifted frequency
    tp = params_first_order(2, 1, 1.5)
    t = np.linspace(0, 3, 7)
    assert np.allclose(lift(1.0, t, tp), np.exp(1j * float(tp.lam) * 1.5 * t))
    assert cmath.isclose(lift(1.0, tp.t_p, tp), 1.0, abs_tol=1e-12)
