"""Right-hand sides, the adaptive integrator and cross-checks between equation pairs."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from periodize import analytic as an
from periodize.core import BLOWUP_NORM, DomainError, EquationSpec, Status
from periodize.integrate import integrate_adaptive, make_system, rhs, third_order_consistency
from periodize.trick import realify


def run(spec, y0, t1, t0=0.0, rel=1e-11, ab=1e-12, t_eval=None):
    system = make_system(spec)
    return system, integrate_adaptive(system, system.initial(y0, t0), t0, t1, rel, ab, t_eval=t_eval)


class TestRhs:
    def test_first_order(self):
        spec = EquationSpec("1.1", {"alpha": 1.0}, 1.0, {"p": 2, "q": 1})
        assert rhs(spec, 0.0, [1.0])[0] == pytest.approx(1 + 1j)

    def test_oscillator_equilibrium(self):
        spec = EquationSpec("1.4", {"a": 1.0}, 2.0)
        assert rhs(spec, 0.0, [1.0, 0.0])[1] == pytest.approx(0.0)

    def test_weierstrass_fixed_point(self):
        spec = EquationSpec("1.13", {"alpha": 1.0}, 1.0)
        assert np.all(rhs(spec, 0.3, [0.0, 0.0]) == 0)


class TestIntegrator:
    def test_linear_limit(self):
        spec = EquationSpec("1.1", {"alpha": 0.0}, 1.3, {"p": 2, "q": 1})
        t = np.linspace(0.5, 10 * spec.T, 40)
        _, tr = run(spec, [0.4 - 0.2j], t[-1], t_eval=t)
        exact = (0.4 - 0.2j) * np.exp(1.3j * tr.t)
        assert np.max(np.abs(tr.y[:, 0] - exact)) < 1e-10

    def test_samples_hit_exactly(self):
        spec = EquationSpec("1.5", {"alpha": 0.2, "gamma": 0.1}, 1.0)
        t = [0.1, 0.7, 3.0]
        _, tr = run(spec, [0.1, 0.0], 3.0, t_eval=t)
        assert list(tr.t) == t

    def test_times_increasing(self):
        spec = EquationSpec("1.8", {"alpha": 0.3, "gamma": 0.1, "delta": 0.1}, 1.0)
        _, tr = run(spec, [0.1, 0.05], 2 * math.pi)
        assert np.all(np.diff(tr.t) > 0)

    def test_step_count_scales_like_fifth_order(self):
        # accepted steps grow like tol^(-1/5): a factor 32 in tol doubles them
        spec = EquationSpec("1.1", {"alpha": 0.5}, 1.0, {"p": 2, "q": 1})
        steps, errors = [], []
        ref = an.solve_1_1(0.2, spec, 2 * spec.T)
        for tol in (1e-6, 1e-6 / 32, 1e-6 / 32**2):
            _, tr = run(spec, [0.2], 2 * spec.T, rel=tol, ab=tol * 1e-2)
            steps.append(tr.n_steps)
            errors.append(abs(tr.y[-1][0] - ref))
        r1, r2 = steps[1] / steps[0], steps[2] / steps[1]
        assert 1.6 < r1 < 2.5 and 1.6 < r2 < 2.5
        assert errors[0] > errors[1] > errors[2]

    def test_bad_interval(self):
        spec = EquationSpec("1.5", {"alpha": 1.0}, 1.0)
        with pytest.raises(DomainError):
            integrate_adaptive(make_system(spec), [0.1, 0.0], 1.0, 1.0)


class TestOscillator:
    spec = EquationSpec("1.4", {"a": 1.0}, 2.0)

    @staticmethod
    def energy(x, xd, W=2.0, a=1.0):
        return xd**2 / 2 + (W / 2) ** 2 * x**2 / 2 + a * a / (2 * x * x)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.3, 3.0), st.floats(-2.0, 2.0))
    def test_period_and_energy(self, x0, v0):
        T = self.spec.T
        t = np.linspace(T / 7, 10 * T, 70)
        _, tr = run(self.spec, [x0, v0], 10 * T, rel=1e-12, ab=1e-13, t_eval=np.union1d(t, [T]))
        k = int(np.argmin(np.abs(tr.t - T)))
        assert abs(tr.y[k][0] - x0) < 1e-7 and abs(tr.y[k][1] - v0) < 1e-7
        e0 = self.energy(x0, v0)
        e = self.energy(tr.y[:, 0].real, tr.y[:, 1].real)
        assert np.max(np.abs(e - e0)) < 1e-8 * max(1.0, e0)


class TestRealAvatars:
    @pytest.mark.parametrize(
        "spec,y0",
        [
            (EquationSpec("1.1", {"alpha": 0.7 + 0.3j}, 1.0, {"p": 2, "q": 1}), [0.3 + 0.1j]),
            (EquationSpec("1.1", {"alpha": 0.5 - 0.2j}, 1.0, {"p": 3, "q": 1}), [0.2 + 0.3j]),
            (EquationSpec("1.5", {"alpha": 0.4 + 0.1j, "gamma": 0.2j}, 1.0), [0.1 + 0.05j, 0.02j]),
            (EquationSpec("1.6", {"alpha": 0.3, "gamma": 0.1 + 0.1j}, 1.0), [0.1j, 0.05]),
            (EquationSpec("1.7", {"alpha": 0.2j, "gamma": 0.1}, 1.0), [0.1, 0.1j]),
            (EquationSpec("1.8", {"alpha": 0.3, "gamma": 0.1j, "delta": 0.1}, 1.0), [0.1 - 0.1j, 0.0]),
            (EquationSpec("1.13", {"alpha": 1.0 + 0.5j}, 1.0), [0.1, 0.1j]),
            (EquationSpec("1.14a", {"alpha": 0.5}, 1.0), [0.1 + 0.2j, 0.1]),
            (EquationSpec("1.24", {"alpha": 0.5 + 0.2j, "beta": 0.1}, 1.0), [0.1, 0.05j]),
            (EquationSpec("1.29", {"alpha": 0.3}, 1.0), [0.05, 0.02j, 0.01]),
        ],
    )
    def test_equivalence(self, spec, y0):
        T = spec.T
        t = np.linspace(0.1, T, 25)
        _, a = run(spec, y0, T, t_eval=t)
        real = realify(spec)
        n = len(y0)
        ry = []
        for z in y0:
            ry += [z.real if isinstance(z, complex) else z, z.imag if isinstance(z, complex) else 0.0]
        # real layout is (u, v, u', v', ...)
        _, b = run(real, ry, T, t_eval=t)
        w = b.y[:, 0].real + 1j * b.y[:, 1].real
        assert len(a.t) == len(b.t) == len(t) and n >= 1
        assert np.max(np.abs(w - a.y[:, 0])) < 1e-8


class TestBlowup:
    @pytest.mark.parametrize("pq,angle", [((2, 1), 0.5), ((3, 1), 0.9), ((3, 2), 2.0), ((1, 2), 1.0)])
    def test_singular_datum(self, pq, angle):
        spec = EquationSpec("1.1", {"alpha": 1.0}, 1.0, {"p": pq[0], "q": pq[1]})
        try:
            w0 = an.singular_datum(spec, angle)
        except DomainError:
            pytest.skip("angle not reachable on the principal branch")
        _, tr = run(spec, [w0], 4 * spec.T)
        if pq[0] < pq[1]:
            # w vanishes at t_b while its derivative blows up
            assert tr.status is Status.BLOWUP
        else:
            assert tr.status is Status.BLOWUP
            assert np.max(np.abs(tr.y[-1])) > 1e4
        assert abs(tr.t_b - an.blowup_time(w0, spec)) < 1e-3 * spec.T
        if np.max(np.abs(tr.y[-1])) > BLOWUP_NORM:
            assert tr.t_b <= tr.t[-1]


class TestThirdOrderPairs:
    def test_linear_pair(self):
        d = third_order_consistency(("1.29", "1.6"), 0.1, 0.05j, 0.0, alpha=0.0)
        assert d < 1e-9

    @pytest.mark.parametrize("seed", range(4))
    def test_129_vs_16(self, seed):
        rng = np.random.default_rng(seed)
        w0, wd0 = (rng.normal(size=2) + 1j * rng.normal(size=2)) * 0.05
        d = third_order_consistency(("1.29", "1.6"), w0, wd0, 0.1 * rng.normal(), alpha=0.3)
        assert d < 1e-6

    @pytest.mark.parametrize("seed", range(3))
    def test_131_vs_17(self, seed):
        rng = np.random.default_rng(10 + seed)
        w0, wd0 = 0.3 + 0.1j * rng.normal(), 0.05 * rng.normal() + 0.02j
        d = third_order_consistency(("1.31", "1.7"), w0, wd0, 0.2, gamma=0.1)
        assert d < 1e-6

    @pytest.mark.parametrize("second", ["1.5", "3.45"])
    def test_132(self, second):
        d = third_order_consistency(("1.32", second), 0.2 + 0.1j, 0.05, 0.3, eta=0.5)
        assert d < 1e-6

    def test_shifted_reduction(self):
        W, alpha = 1.0, 0.5
        c = -6 * W * W / alpha
        # the shifted equation coincides with the unshifted one when alpha c = -6 Omega^2
        d = third_order_consistency(("1.30", "3.44"), 0.05, 0.02j, c, alpha=alpha, wddot0=0.01)
        assert d < 1e-6


class TestPainleveDerived:
    cases = {
        "1.5": {"alpha": 0.5, "gamma": 0.2},
        "1.6": {"alpha": 0.5, "gamma": 0.2},
        "1.7": {"alpha": 0.5, "gamma": 0.2},
        "1.8": {"alpha": 0.5, "gamma": 0.2, "delta": 0.1},
    }

    @pytest.mark.parametrize("sid", ["1.5", "1.6", "1.7", "1.8"])
    def test_complex_forms(self, sid):
        rng = np.random.default_rng(hash(sid) % 2**32)
        for _ in range(5):
            params = {k: v * (1 + 0.3j * rng.normal()) for k, v in self.cases[sid].items()}
            spec = EquationSpec(sid, params, 1.0)
            y0 = list(0.05 * (rng.normal(size=2) + 1j * rng.normal(size=2)))
            system, tr = run(spec, y0, spec.T, t_eval=[spec.T])
            assert tr.status is Status.COMPLETED
            assert np.max(np.abs(tr.y[-1] - np.asarray(y0))) < 1e-6
