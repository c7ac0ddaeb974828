"""Right-hand sides for every ODE in the catalog.

States are complex numpy vectors. Second-order equations carry (w, w'),
third-order ones (w, w', w''); real avatars carry (u, v[, u', v'[, u'', v'']])
stored with zero imaginary part.

Fractional powers are continued along the trajectory: every base quantity
``z`` raised to a non-integer power gets one extra state entry holding its
accumulated argument, advanced by Im(z'/z). The principal branch is used at
the initial time only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from ..catalog import BASE_ODES, COMPLEX_ODES, REAL_ODES
from ..core import DomainError, EquationSpec, SingularityError, UnsupportedError
from ..trick import TauMap, TrickParams

TWO_PI = 2.0 * math.pi


def branch_power(z: complex, theta: float, r: float) -> complex:
    """z**r on the sheet selected by the accumulated argument ``theta``."""
    if z == 0:
        if r > 0:
            return 0j
        raise SingularityError("power of zero on a tracked branch")
    a = cmath.phase(z)
    a += TWO_PI * round((theta - a) / TWO_PI)
    return abs(z) ** r * cmath.exp(1j * r * a)


def _ipow(z: complex, k: int) -> complex:
    if k < 0 and z == 0:
        raise SingularityError("negative power of zero")
    return z**k


@dataclass(frozen=True)
class Branch:
    """A tracked fractional power ``base(t, y) ** exponent``."""

    exponent: Fraction
    base: Callable[[float, np.ndarray], complex]


@dataclass(frozen=True)
class OdeSystem:
    spec: EquationSpec
    dimension: int
    rhs_full: Callable[[float, list], list]  # plain Python scalars in and out
    branches: tuple = ()
    real: bool = False

    @property
    def state_size(self) -> int:
        return self.dimension + len(self.branches)

    def rhs(self, t: float, state) -> np.ndarray:
        return np.asarray(self.rhs_full(t, list(state)), dtype=complex)

    def initial(self, y0: Sequence[complex], t0: float = 0.0) -> np.ndarray:
        """Full integrator state from physical initial data (principal branches)."""
        y0 = np.asarray(y0, dtype=complex).ravel()
        if y0.size == self.state_size:
            return y0.copy()
        if y0.size != self.dimension:
            raise DomainError(f"{self.spec.id} expects {self.dimension} initial values, got {y0.size}")
        full = np.zeros(self.state_size, dtype=complex)
        full[: self.dimension] = y0
        for j, br in enumerate(self.branches):
            z = br.base(t0, list(full))
            if z == 0:
                raise SingularityError(f"{self.spec.id}: fractional power of zero in the initial data")
            full[self.dimension + j] = cmath.phase(z)
        return full

    def observe(self, state: np.ndarray) -> np.ndarray:
        """Quantities that must all recur for the motion to be periodic.

        The physical components plus, for every tracked branch z**(a/b), the
        sheet indicator exp(i*theta/b).
        """
        phys = np.asarray(state[: self.dimension])
        if not self.branches:
            return phys
        extra = [
            cmath.exp(1j * state[self.dimension + j].real / br.exponent.denominator)
            for j, br in enumerate(self.branches)
        ]
        return np.concatenate([phys, np.asarray(extra)])


def _arg_rate(z: complex, zdot: complex) -> float:
    if z == 0:
        raise SingularityError("branch base passed through zero")
    return (zdot / z).imag


# --------------------------------------------------------------------------
# complex equations
# --------------------------------------------------------------------------


def _first_order(spec: EquationSpec) -> OdeSystem:
    W = spec.omega_cap
    alpha = complex(spec.param("alpha"))
    p, q = spec.exp("p"), spec.exp("q")
    r = p / q
    iW = 1j * W
    if q == 1:

        def f(t, y):
            w = complex(y[0])
            return [iW * w + alpha * _ipow(w, p)]

        return OdeSystem(spec, 1, f)

    def f(t, y):
        w = complex(y[0])
        wd = iW * w + alpha * branch_power(w, y[1].real, r)
        return [wd, _arg_rate(w, wd)]

    return OdeSystem(spec, 1, f, (Branch(Fraction(p, q), lambda t, y: complex(y[0])),))


def _second(spec: EquationSpec, acc: Callable[[float, complex, complex], complex]) -> OdeSystem:
    def f(t, y):
        w, wd = complex(y[0]), complex(y[1])
        return [wd, acc(t, w, wd)]

    return OdeSystem(spec, 2, f)


def _third(spec: EquationSpec, jerk) -> OdeSystem:
    def f(t, y):
        w, wd, wdd = complex(y[0]), complex(y[1]), complex(y[2])
        return [wd, wdd, jerk(t, w, wd, wdd)]

    return OdeSystem(spec, 3, f)


def _general_1_20(spec: EquationSpec, p1, q1, p2, q2, alpha) -> OdeSystem:
    W = spec.omega_cap
    iW = 1j * W
    c1 = Fraction(3 * q1 * q2 + p1 * q2 - p2 * q1, q1 * (p2 - 2 * q2))
    c2 = Fraction(q2 * (p1 + q1), q1 * (p2 - 2 * q2))
    k1, k2 = 1j * float(c1) * W, float(c2) * W * W
    r1, r2 = Fraction(p1, q1), Fraction(p2, q2)
    frac_w, frac_v = r1.denominator != 1, r2.denominator != 1
    branches = []
    if frac_w:
        branches.append(Branch(r1, lambda t, y: complex(y[0])))
    if frac_v:
        branches.append(Branch(r2, lambda t, y: complex(y[1]) - iW * complex(y[0])))
    jw = 2 if frac_w else None
    jv = 2 + int(frac_w) if frac_v else None

    def f(t, y):
        w, wd = complex(y[0]), complex(y[1])
        v = wd - iW * w
        pw = branch_power(w, y[jw].real, float(r1)) if frac_w else _ipow(w, r1.numerator)
        pv = branch_power(v, y[jv].real, float(r2)) if frac_v else _ipow(v, r2.numerator)
        wdd = -k1 * wd - k2 * w + alpha * pv * pw
        out = [wd, wdd]
        if frac_w:
            out.append(_arg_rate(w, wd))
        if frac_v:
            out.append(_arg_rate(v, wdd - iW * wd))
        return out

    return OdeSystem(spec, 2, f, tuple(branches))


def _complex_system(spec: EquationSpec) -> OdeSystem:
    sid = spec.id
    W = spec.omega_cap
    iW = 1j * W
    W2 = W * W
    P = lambda k: complex(spec.param(k))  # noqa: E731
    alpha, beta, gamma, delta, eta = P("alpha"), P("beta"), P("gamma"), P("delta"), P("eta")

    if sid == "1.1":
        return _first_order(spec)
    if sid == "1.5":
        return _second(spec, lambda t, w, wd: -W2 * w + (alpha * w * w + gamma) * cmath.exp(5j * W * t))
    if sid == "3.45":
        return _second(spec, lambda t, w, wd: -W2 * w + alpha * (w * w + eta) * cmath.exp(5j * W * t))
    if sid == "1.6":
        return _second(
            spec, lambda t, w, wd: 5 * iW * wd + 6 * W2 * w + alpha * w * w + gamma * cmath.exp(5j * W * t)
        )
    if sid == "1.7":
        return _second(
            spec, lambda t, w, wd: -5 * iW * wd + 6 * W2 * w + alpha * w * w * cmath.exp(5j * W * t) + gamma
        )
    if sid == "1.8":
        return _second(
            spec,
            lambda t, w, wd: 3 * iW * wd + 2 * W2 * w + alpha * w**3 + (gamma * w + delta) * cmath.exp(3j * W * t),
        )
    if sid == "1.13":
        return _second(spec, lambda t, w, wd: 2.5 * iW * wd + 1.5 * W2 * w + alpha * w * w)
    if sid == "1.14a":
        return _second(spec, lambda t, w, wd: iW * wd + 2 * W2 + alpha * cmath.exp(w))
    if sid == "1.14b":
        return _second(spec, lambda t, w, wd: iW * wd - 2 * W2 * w + (wd - iW * w) * w)
    if sid == "1.15":
        return _second(spec, lambda t, w, wd: 3 * iW * wd + 2 * W2 * w + (wd - iW * w) * w)
    if sid in ("1.24", "1.25", "1.26"):
        b = beta if sid == "1.24" else (-(alpha**2) / 9 if sid == "1.25" else 0j)
        return _second(spec, lambda t, w, wd: 3 * iW * wd + 2 * W2 * w + alpha * w * (wd - iW * w) + b * w**3)
    if sid == "1.20":
        e = spec.exponents
        return _general_1_20(spec, e["p1"], e["q1"], e["p2"], e["q2"], alpha)
    if sid == "1.21":
        return _general_1_20(spec, -3, 1, 3, 1, alpha)
    if sid == "1.22":
        n, m = spec.exp("n"), spec.exp("m")
        return _general_1_20(spec, m, 1, 2 * n + 1, n, alpha)
    if sid == "1.23":
        n, m = spec.exp("n"), spec.exp("m")
        return _general_1_20(spec, -(2 * m + 1), 1, 2 * n + 1, n, alpha)
    if sid == "1.29":
        return _third(
            spec,
            lambda t, w, wd, wdd: 10 * iW * wdd + 31 * W2 * wd - 30j * W**3 * w + alpha * (2 * wd - 5 * iW * w) * w,
        )
    if sid == "1.30":
        return _third(
            spec,
            lambda t, z, zd, zdd: 10 * iW * zdd + 19 * W2 * zd + 30j * W**3 * z + alpha * (2 * zd - 5 * iW * z) * z,
        )
    if sid == "3.44":
        c = P("c")
        ac = alpha * c

        def jerk(t, z, zd, zdd):
            return (
                10 * iW * zdd
                + (31 * W2 + 2 * ac) * zd
                - 10j * (3 * W2 + ac) * W * z
                - 5j * (6 * W2 + ac) * W * c
                + alpha * (2 * zd - 5 * iW * z) * z
            )

        return _third(spec, jerk)
    if sid == "1.31":

        def jerk(t, w, wd, wdd):
            if w == 0:
                raise SingularityError("(1.31) divides by w")
            return -31 * W2 * wd - 30j * W**3 * w - 5 * iW * gamma + 2 * (wdd + 5 * iW * wd - gamma) * wd / w

        return _third(spec, jerk)
    if sid == "1.32":

        def jerk(t, w, wd, wdd):
            den = w * w + eta
            if den == 0:
                raise SingularityError("(1.32) divides by w^2 + eta")
            return 5 * iW * wdd - W2 * wd + 5j * W**3 * w + 2 * w * wd * (wdd + W2 * w) / den

        return _third(spec, jerk)
    raise UnsupportedError(f"no right-hand side for {sid}")


# --------------------------------------------------------------------------
# real avatars
# --------------------------------------------------------------------------


def _binomial_parts(u: float, v: float, p: int) -> tuple[float, float]:
    U = sum((-1) ** m * math.comb(p, 2 * m) * u ** (p - 2 * m) * v ** (2 * m) for m in range(p // 2 + 1))
    V = sum(
        (-1) ** m * math.comb(p, 2 * m + 1) * u ** (p - 2 * m - 1) * v ** (2 * m + 1) for m in range((p - 1) // 2 + 1)
    )
    return U, V


def _real_system(spec: EquationSpec) -> OdeSystem:
    sid = spec.id
    W = spec.omega_cap
    W2 = W * W
    g = lambda k: float(np.real(spec.param(k)))  # noqa: E731
    a1, a2, b1, b2, c1, c2, d1, d2 = (g(k) for k in ("a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2"))
    order, ncomp = REAL_ODES[sid]

    def second(acc):
        def f(t, y):
            u, v, ud, vd = y[0].real, y[1].real, y[2].real, y[3].real
            au, av = acc(t, u, v, ud, vd)
            return [ud, vd, au, av]

        return OdeSystem(spec, 4, f, real=True)

    if sid in ("1.2", "1.3"):
        p = 2 if sid == "1.3" else spec.exp("p")

        def f(t, y):
            u, v = y[0].real, y[1].real
            if sid == "1.3":
                U, V = u * u - v * v, 2 * u * v
            else:
                U, V = _binomial_parts(u, v, p)
            return [-W * v + a1 * U - a2 * V, W * u + a1 * V + a2 * U]

        return OdeSystem(spec, 2, f, real=True)

    if sid == "1.4":
        a = g("a")

        def f(t, y):
            x, xd = y[0].real, y[1].real
            if x == 0:
                raise SingularityError("(1.4) at x = 0")
            return [xd, -(W / 2) ** 2 * x + a * a / x**3]

        return OdeSystem(spec, 2, f, real=True)

    if sid == "1.9":

        def acc(t, u, v, ud, vd):
            cs, sn = math.cos(5 * W * t), math.sin(5 * W * t)
            Xr = a1 * (u * u - v * v) - 2 * a2 * u * v + c1
            Xi = a2 * (u * u - v * v) + 2 * a1 * u * v + c2
            return -W2 * u + cs * Xr - sn * Xi, -W2 * v + sn * Xr + cs * Xi

        return second(acc)
    if sid == "1.10":

        def acc(t, u, v, ud, vd):
            cs, sn = math.cos(5 * W * t), math.sin(5 * W * t)
            return (
                -5 * W * vd + 6 * W2 * u + a1 * (u * u - v * v) - 2 * a2 * u * v + c1 * cs - c2 * sn,
                5 * W * ud + 6 * W2 * v + a2 * (u * u - v * v) + 2 * a1 * u * v + c2 * cs + c1 * sn,
            )

        return second(acc)
    if sid == "1.11":

        def acc(t, u, v, ud, vd):
            cs, sn = math.cos(5 * W * t), math.sin(5 * W * t)
            Xr = a1 * (u * u - v * v) - 2 * a2 * u * v
            Xi = a2 * (u * u - v * v) + 2 * a1 * u * v
            return 5 * W * vd + 6 * W2 * u + Xr * cs - Xi * sn + c1, -5 * W * ud + 6 * W2 * v + Xr * sn + Xi * cs + c2

        return second(acc)
    if sid == "1.12":

        def acc(t, u, v, ud, vd):
            cs, sn = math.cos(3 * W * t), math.sin(3 * W * t)
            Lr, Li = c1 * u - c2 * v + d1, c2 * u + c1 * v + d2
            return (
                -3 * W * vd + 2 * W2 * u + a1 * u * (u * u - 3 * v * v) - a2 * v * (3 * u * u - v * v) + Lr * cs - Li * sn,
                3 * W * ud + 2 * W2 * v + a2 * u * (u * u - 3 * v * v) + a1 * v * (3 * u * u - v * v) + Lr * sn + Li * cs,
            )

        return second(acc)
    if sid == "1.16":

        def acc(t, u, v, ud, vd):
            return (
                -2.5 * W * vd + 1.5 * W2 * u + a1 * (u * u - v * v) - 2 * a2 * u * v,
                2.5 * W * ud + 1.5 * W2 * v + a2 * (u * u - v * v) + 2 * a1 * u * v,
            )

        return second(acc)
    if sid == "1.17":

        def acc(t, u, v, ud, vd):
            e = math.exp(u)
            return (
                -W * vd + 2 * W2 + e * (a1 * math.cos(v) - a2 * math.sin(v)),
                W * ud + e * (a2 * math.cos(v) + a1 * math.sin(v)),
            )

        return second(acc)
    if sid in ("1.18", "1.19"):
        k = 1 if sid == "1.18" else 3
        s = -2 if sid == "1.18" else 2  # sign of the 2 Omega^2 (u, v) term on the right

        def acc(t, u, v, ud, vd):
            return (
                -k * W * vd + s * W2 * u + ud * u - vd * v + 2 * W * u * v,
                k * W * ud + s * W2 * v + ud * v + u * vd - W * (u * u - v * v),
            )

        return second(acc)
    if sid == "1.27":

        def acc(t, u, v, ud, vd):
            R = u * ud - v * vd + 2 * W * u * v
            I = ud * v + u * vd - W * (u * u - v * v)
            cu, cv = u * (u * u - 3 * v * v), v * (3 * u * u - v * v)
            return (
                -3 * W * vd + 2 * W2 * u + a1 * R - a2 * I + b1 * cu - b2 * cv,
                3 * W * ud + 2 * W2 * v + a2 * R + a1 * I + b2 * cu + b1 * cv,
            )

        return second(acc)
    if sid in ("1.33", "1.34"):
        k = 31 if sid == "1.33" else 19
        s = -1 if sid == "1.33" else 1

        def f(t, y):
            u, v, ud, vd, udd, vdd = (y[i].real for i in range(6))
            R = 2 * (ud * u - vd * v + 5 * W * u * v)
            I = 2 * (ud * v + vd * u) - 5 * W * (u * u - v * v)
            uddd = -10 * W * vdd + k * W2 * ud - s * 30 * W**3 * v + a1 * R - a2 * I
            vddd = 10 * W * udd + k * W2 * vd + s * 30 * W**3 * u + a2 * R + a1 * I
            return [ud, vd, udd, vdd, uddd, vddd]

        return OdeSystem(spec, 6, f, real=True)
    raise UnsupportedError(f"no right-hand side for {sid}")


# --------------------------------------------------------------------------
# base equations along a complexified-time path
# --------------------------------------------------------------------------


def _base_system(spec: EquationSpec, params: TrickParams) -> OdeSystem:
    """d/dt of (phi(tau(t)), phi'(tau(t))) = tau_dot(t) * (phi', phi'')."""
    sid = spec.id
    P = lambda k: complex(spec.param(k))  # noqa: E731
    alpha, beta, delta = P("alpha"), P("beta"), P("delta")
    w = params.omega
    iw = 1j * w
    if params.tau_map is TauMap.CIRCLE:
        tau = lambda t: (cmath.exp(iw * t) - 1.0) / iw  # noqa: E731
    else:
        tau = lambda t: -cmath.exp(iw * t) / w * 1j  # noqa: E731
    if sid == "2.5":
        p, q = spec.exp("p"), spec.exp("q")
        r = p / q

        def f(t, y):
            phi = complex(y[0])
            td = cmath.exp(1j * w * t)
            pw = branch_power(phi, y[1].real, r) if q != 1 else _ipow(phi, p)
            dphi = td * alpha * pw
            return [dphi, _arg_rate(phi, dphi) if q != 1 else 0.0]

        br = (Branch(Fraction(p, q), lambda t, y: complex(y[0])),) if q != 1 else ()
        if q == 1:

            def f1(t, y):
                phi = complex(y[0])
                return [cmath.exp(1j * w * t) * alpha * _ipow(phi, p)]

            return OdeSystem(spec, 1, f1)
        return OdeSystem(spec, 1, f, br)

    if sid == "3.18":
        e = spec.exponents
        r1, r2 = Fraction(e["p1"], e["q1"]), Fraction(e["p2"], e["q2"])
        frac1, frac2 = r1.denominator != 1, r2.denominator != 1
        branches = []
        if frac1:
            branches.append(Branch(r1, lambda t, y: complex(y[0])))
        if frac2:
            branches.append(Branch(r2, lambda t, y: complex(y[1])))
        j1, j2 = 2, 2 + int(frac1)

        def f(t, y):
            phi, dphi = complex(y[0]), complex(y[1])
            td = cmath.exp(1j * w * t)
            p1 = branch_power(phi, y[j1].real, float(r1)) if frac1 else _ipow(phi, r1.numerator)
            p2 = branch_power(dphi, y[j2].real, float(r2)) if frac2 else _ipow(dphi, r2.numerator)
            dd = alpha * p2 * p1
            out = [td * dphi, td * dd]
            if frac1:
                out.append(_arg_rate(phi, td * dphi))
            if frac2:
                out.append(_arg_rate(dphi, td * dd))
            return out

        return OdeSystem(spec, 2, f, tuple(branches))

    def second(F):
        def f(t, y):
            phi, dphi = complex(y[0]), complex(y[1])
            td = cmath.exp(1j * w * t)
            return [td * dphi, td * F(tau(t), phi, dphi)]

        return OdeSystem(spec, 2, f)

    if sid == "3.1":
        return second(lambda s, phi, dphi: alpha * phi * phi + beta * s)
    if sid == "3.5":
        return second(lambda s, phi, dphi: alpha * phi**3 + beta * s * phi + delta)
    if sid == "3.7":
        return second(lambda s, phi, dphi: alpha * phi * phi)
    if sid == "3.13":
        return second(lambda s, phi, dphi: alpha * cmath.exp(phi))
    if sid == "3.31":
        return second(lambda s, phi, dphi: alpha * dphi * phi + beta * phi**3)
    raise UnsupportedError(f"no base equation {sid}")


def make_system(spec: EquationSpec, params: Optional[TrickParams] = None) -> OdeSystem:
    """Build the integrable system for a catalog id.

    Base equations (those posed in complex time) need ``params`` to fix the
    path tau(t) along which they are integrated.
    """
    if spec.id in COMPLEX_ODES:
        return _complex_system(spec)
    if spec.id in REAL_ODES:
        return _real_system(spec)
    if spec.id in BASE_ODES:
        if params is None:
            raise DomainError("base equations need TrickParams for the tau(t) path")
        return _base_system(spec, params)
    raise UnsupportedError(f"{spec.id} is not an ODE in the catalog")


def rhs(spec: EquationSpec, t: float, state: Sequence[complex], params: Optional[TrickParams] = None) -> np.ndarray:
    """Time derivative of the physical state (branches at their principal values)."""
    system = make_system(spec, params)
    full = system.initial(state, t)
    return system.rhs(t, full)[: system.dimension]
