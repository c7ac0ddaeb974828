"""Shock, Burgers and KdV-type solutions and the finite-difference residual oracle."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from periodize import pde
from periodize.analytic.burgers import n2_poles
from periodize.core import DomainError, EquationSpec, SingularityError


def shock_spec(p, q, alpha=0.1, omega_cap=1.0):
    return EquationSpec("1.35", {"alpha": alpha}, omega_cap, {"p": p, "q": q})


DATUM = pde.RationalInitialDatum((1.0,), (1.0, 0.0, 1.0))  # 1/(x^2 + 1)
X = np.linspace(-4, 4, 17)


class TestShockIterative:
    def test_initial_time(self):
        w = pde.shock_solve_iterative(DATUM, shock_spec(1, 1), X, 0.0)
        assert np.allclose(w, DATUM(X), atol=1e-14)

    def test_linear_limit(self):
        spec = shock_spec(2, 1, alpha=0.0)
        t = 1.3
        w = pde.shock_solve_iterative(DATUM, spec, X, t)
        assert np.allclose(w, np.exp(1j * t) * DATUM(X), atol=1e-14)

    @pytest.mark.parametrize("p,q", [(1, 1), (2, 1)])
    def test_period(self, p, q):
        spec = shock_spec(p, q)
        w = pde.shock_solve_iterative(DATUM, spec, X, q * spec.T)
        assert np.max(np.abs(w - DATUM(X))) < 1e-10

    def test_large_datum_does_not_converge(self):
        big = pde.RationalInitialDatum((50.0,), (1.0, 0.0, 1.0))
        with pytest.raises(pde.ConvergenceError):
            pde.shock_solve_iterative(big, shock_spec(1, 1, alpha=1.0), X, np.pi)

    def test_other_equation_rejected(self):
        with pytest.raises(DomainError):
            pde.shock_solve_iterative(DATUM, EquationSpec("1.4", {"alpha": 1}, 1.0), X, 0.1)


class TestShockRational:
    def test_degree(self):
        assert pde.shock_polynomial_degree(1, 1, 0, 2) == 3
        assert pde.shock_polynomial_degree(2, 1, 0, 2) == 5
        assert pde.shock_polynomial_degree(-1, 1, 0, 2) == 2

    def test_datum_validation(self):
        with pytest.raises(DomainError):
            pde.RationalInitialDatum((1.0, 0.0), (1.0, 0.0))
        with pytest.raises(DomainError):
            pde.RationalInitialDatum((1.0,), (1.0, -1.0))  # real zero at x = 1

    def test_initial_time(self):
        w = pde.shock_solve_rational(DATUM, shock_spec(1, 1), X, 0.0)
        assert np.allclose(w, DATUM(X))

    @pytest.mark.parametrize("p,q", [(1, 1), (2, 1)])
    def test_period_and_agreement(self, p, q):
        spec = shock_spec(p, q)
        times = np.array([0.7, 2.1, q * spec.T])
        w = pde.shock_solve_rational(DATUM, spec, X, times)
        assert w.shape == (3, X.size)
        assert np.max(np.abs(w[-1] - DATUM(X))) < 1e-6
        for k, t in enumerate(times):
            ref = pde.shock_solve_iterative(DATUM, spec, X, t)
            assert np.max(np.abs(w[k] - ref)) < 1e-6

    @pytest.mark.parametrize("x0,t0", [(-1.0, 0.8), (0.5, 2.4)])
    def test_satisfies_pde(self, x0, t0):
        spec = shock_spec(1, 1)
        h = 1e-3
        grid_x = x0 + h * np.arange(9)
        grid_t = t0 + h * np.arange(9)
        vals = pde.shock_solve_rational(DATUM, spec, grid_x, grid_t).T
        assert pde.residual_verify(spec, vals, grid_x, grid_t, h=h) < 1e-5

    def test_large_alpha_is_singular(self):
        spec = shock_spec(1, 1, alpha=5.0)
        with pytest.raises(SingularityError):
            pde.shock_solve_rational(DATUM, spec, X, spec.T)


class TestColeHopf:
    def test_examples(self):
        assert pde.cole_hopf(2.0, 1.0, 1.0) == pytest.approx(0.5)
        assert pde.cole_hopf(2.0, 1.0, 1.0, beta=3.0) == pytest.approx(1.5)
        assert pde.cole_hopf(1.0, 1.0, 2.0) == pytest.approx(0.5)

    def test_failures(self):
        with pytest.raises(DomainError):
            pde.cole_hopf(1.0, 1.0, 0.0)
        with pytest.raises(SingularityError):
            pde.cole_hopf(0.0, 1.0, 1.0)


class TestHeatPolynomials:
    def test_n2(self):
        g = pde.heat_polynomial(2, 1, 0, 0.5, 3.0, gammas0=[0.25])
        assert g == [1, 0, pytest.approx(0.25 + 2 * 0.5 * 3.0)]

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_exact_heat_equation(self, N):
        beta = Fraction(2, 3)
        initial = [Fraction(1)] + [Fraction(m, 7) for m in range(1, N + 1)]
        polys = pde.heat_gamma_polynomials(N, initial, beta)
        for m in range(N + 1):
            d_tau = [j * c for j, c in enumerate(polys[m])][1:]
            if m < 2:
                rhs = []
            else:
                k = (N - m + 2) * (N - m + 1)
                rhs = [beta * k * c for c in polys[m - 2]]
            width = max(len(d_tau), len(rhs))
            pad = lambda a: list(a) + [Fraction(0)] * (width - len(a))  # noqa: E731
            assert pad(d_tau) == pad(rhs)

    def test_argument_checks(self):
        with pytest.raises(DomainError):
            pde.heat_gamma_polynomials(-1, [], 1)
        with pytest.raises(DomainError):
            pde.heat_polynomial(3, 1, 0, 1, 0.0, gammas0=[1])

    def test_lifted_burgers_residual(self):
        W, alpha, beta = 1.0, 0.5, 1.0
        # x^2 = i beta/W - 0.1 exp(-2 i W t) at the poles stays off the real axis
        polys = pde.heat_gamma_polynomials(2, [1, 0, 0.1 - 1j * beta / W], beta)
        w = pde.burgers_from_heat(polys, alpha, beta, W)
        x = np.linspace(-3, 3, 31)
        t = np.linspace(0.1, 6.0, 21)
        r = pde.residual_verify("2.45", w, x, t, alpha=alpha, beta=beta, omega_cap=W)
        assert r < 1e-6
        X_, T_ = np.meshgrid(x, t)
        assert np.max(np.abs(w(X_, T_ + np.pi) - w(X_, T_))) < 1e-10


class TestPoles:
    def test_single_pole_rotates(self):
        cfg = pde.PoleConfiguration((1.0 + 0.5j,), 0.3, 1.0)
        final, _ = pde.pole_dynamics_step(cfg, 0.0, 1.7)
        assert final.poles[0] == pytest.approx((1.0 + 0.5j) * np.exp(-1.7j), abs=1e-10)

    def test_center_of_mass(self):
        cfg = pde.PoleConfiguration((1.0 + 1j, -0.5 + 0.8j, 0.2 - 1.2j), 0.2, 1.0)
        final, _ = pde.pole_dynamics_step(cfg, 0.0, 2.0)
        assert final.center == pytest.approx(cfg.center * np.exp(-2.0j), abs=1e-10)

    def test_two_poles_match_closed_form(self):
        a, b, beta, W = 0.1, 0.2, 1.0, 1.0
        z0 = n2_poles(a, b, beta, W, 0.0)[0]
        t = np.linspace(0.25, 6.0, 24)
        _, tr = pde.pole_dynamics_step(pde.PoleConfiguration(tuple(z0), beta, W), 0.0, 6.0, t_eval=t)
        ref = n2_poles(a, b, beta, W, t)
        # the closed form may swap labels; compare as sets
        for k in range(t.size):
            got, want = sorted(tr.y[k], key=lambda z: z.real), sorted(ref[k], key=lambda z: z.real)
            assert np.allclose(got, want, atol=1e-8)

    def test_field_solves_lifted_burgers(self):
        a, b, beta, alpha, W = 0.1, 0.2, 1.0, 0.7, 1.0

        def w(x, t):
            poles = n2_poles(a, b, beta, W, np.ravel(t)).reshape(np.shape(t) + (2,))
            return (beta / alpha) * np.sum(1.0 / (np.asarray(x)[..., None] - poles), axis=-1)

        x = np.linspace(-3, 3, 25)
        t = np.linspace(0.0, 6.0, 25)
        assert pde.residual_verify("2.45", w, x, t, alpha=alpha, beta=beta, omega_cap=W) < 1e-6
        # rational decay: x w tends to 2 beta/alpha
        far = np.array([1e3, -1e3, 1e4])
        assert np.allclose(far * w(far, np.zeros(3)), 2 * beta / alpha, rtol=1e-2)

    def test_coincident_poles_rejected(self):
        with pytest.raises(SingularityError):
            pde.PoleConfiguration((1j, 1j), 1.0, 1.0)


class TestResidualOracle:
    def test_zero_solution(self):
        x, t = np.linspace(-1, 1, 5), np.linspace(0, 1, 5)
        zero = lambda x, t: 0 * x  # noqa: E731
        assert pde.residual_verify("2.45", zero, x, t, alpha=1.0, beta=1.0) == 0.0
        assert pde.residual_verify(shock_spec(2, 1), zero, x, t) == 0.0

    def test_grid_too_small(self):
        x, t = np.linspace(0, 4e-3, 5), np.linspace(0, 4e-3, 5)
        with pytest.raises(DomainError):
            pde.residual_verify("2.45", np.zeros((5, 5)), x, t, h=1e-3, alpha=1.0, beta=1.0)

    def test_wrong_solution_detected(self):
        x, t = np.linspace(-1, 1, 5), np.linspace(0.1, 1, 5)
        bad = lambda x, t: x + 0j * t  # noqa: E731
        assert pde.residual_verify("2.38", bad, x, t, alpha=1.0, beta=1.0) > 0.1

    @pytest.mark.parametrize("profile,p,q,lifted", [(pde.kdv_soliton, 1, 1, "1.41"), (pde.mkdv_soliton, 2, 1, "1.43")])
    def test_solitons(self, profile, p, q, lifted):
        alpha, beta, kappa, W = 1.0, 1.0, 0.25, 1.0
        phi = lambda xi, tau: profile(kappa, alpha, beta, xi, tau)  # noqa: E731
        x = np.linspace(-5, 5, 41)
        assert pde.residual_verify("3.46", phi, x, np.linspace(0, 1, 5), alpha=alpha, beta=beta, p=p, q=q) < 1e-6
        w = pde.gkdv_lift(phi, p, q, W)
        t = np.linspace(0, 2 * np.pi, 21)
        assert pde.residual_verify(lifted, w, x, t, alpha=alpha, beta=beta, omega_cap=W) < 1e-4
        X_, T_ = np.meshgrid(x, t)
        assert np.max(np.abs(w(X_, T_ + 2 * np.pi) - w(X_, T_))) < 1e-8

    def test_kp(self):
        alpha, beta, gamma, W = 0.7, 0.4, 1.3, 1.0
        phi = pde.kp_polynomial(0.5, -0.2, 0.3, alpha, gamma)
        x, y, t = np.linspace(-1, 1, 5), np.linspace(-1, 1, 5), np.linspace(0, 3, 5)
        params = dict(alpha=alpha, beta=beta, gamma=gamma)
        assert pde.residual_verify("3.49", phi, x, t, y_grid=y, h=1e-2, **params) < 1e-6
        w = pde.kp_lift(phi, W)
        assert pde.residual_verify("1.45", w, x, t, y_grid=y, h=1e-2, omega_cap=W, **params) < 1e-6
        Xg, Yg, Tg = np.meshgrid(x, y, t, indexing="ij")
        assert np.max(np.abs(w(Xg, Yg, Tg + 4 * np.pi) - w(Xg, Yg, Tg))) < 1e-10
        with pytest.raises(DomainError):
            pde.residual_verify("3.49", phi, x, t, **params)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.1, 0.5), st.floats(-2.0, 2.0))
    def test_soliton_localized(self, kappa, shift):
        x = np.array([-200.0, 200.0]) + shift
        v = pde.kdv_soliton(kappa, 1.0, 1.0, x, 0.0)
        assert np.all(np.abs(x * v) < 1e-6)
