"""Complexified time maps, phase lifts and the transformation parameters.

A base equation in a complex variable ``tau`` becomes a modified equation in
real time ``t`` once ``tau`` is made to run around a closed curve and the
dependent variable is multiplied by a phase ``exp(i*lam*omega*t)``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import DomainError, EquationSpec, UnsupportedError, as_rational


class TauMap(enum.Enum):
    CIRCLE = "circle"  # tau = (exp(i w t) - 1)/(i w), circle through the origin
    EXPONENTIAL = "exponential"  # tau = -(i/w) exp(i w t), circle around the origin


@dataclass(frozen=True)
class TrickParams:
    omega: float
    lam: Fraction
    mu: Fraction = Fraction(0)
    omega_cap: float = 1.0
    tau_map: TauMap = TauMap.CIRCLE
    check_relation: bool = True

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise DomainError("omega must be a positive real number")
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "mu", as_rational(self.mu))
        if self.omega_cap == 0:
            raise DomainError("Omega must be nonzero")
        if self.check_relation:
            expected = float(self.lam) * self.omega
            if not math.isclose(expected, self.omega_cap, rel_tol=1e-12, abs_tol=0.0):
                raise DomainError(f"Omega={self.omega_cap} violates Omega = lam*omega = {expected}")

    @property
    def t_p(self) -> float:
        return 2.0 * math.pi / self.omega

    def tau(self, t):
        if self.tau_map is TauMap.CIRCLE:
            return tau_circle(t, self.omega)
        return tau_exponential(t, self.omega)

    def tau_dot(self, t):
        """d tau/dt; the same for both maps."""
        return np.exp(1j * self.omega * np.asarray(t, dtype=float))


def tau_circle(t, omega: float):
    """tau(t) = (exp(i*omega*t) - 1)/(i*omega); returns 0 at t = 0 and t = 2*pi/omega."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    t = np.asarray(t, dtype=float)
    z = omega * t
    # half-angle form of exp(iz) - 1 keeps full relative accuracy near t = 0
    val = -2.0 * np.sin(z / 2.0) ** 2 + 1j * np.sin(z)
    out = val / (1j * omega)
    return out[()] if out.ndim == 0 else out


def tau_circle_geometry(omega: float) -> tuple[complex, float]:
    """Center and radius of the circle traced by ``tau_circle``."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    return 1j / omega, 1.0 / omega


def tau_exponential(t, omega: float):
    if not omega > 0:
        raise DomainError("omega must be positive")
    t = np.asarray(t, dtype=float)
    out = -(1j / omega) * np.exp(1j * omega * t)
    return out[()] if out.ndim == 0 else out


def lift(phi_value, t, params: TrickParams):
    """w(t) = exp(i*lam*omega*t) * phi."""
    return np.exp(1j * float(params.lam) * params.omega * np.asarray(t, dtype=float)) * phi_value


def params_first_order(p: int, q: int, omega: float) -> TrickParams:
    """phi' = alpha phi^(p/q)  ->  dw/dt - i Omega w = alpha w^(p/q)."""
    if q <= 0 or math.gcd(p, q) != 1:
        raise DomainError("need q > 0 and gcd(p, q) = 1")
    if p == q:
        raise DomainError("p == q is the excluded linear case")
    lam = Fraction(q, p - q)
    return TrickParams(omega=omega, lam=lam, omega_cap=float(lam) * omega)


def params_shock(p: int, q: int, omega: float) -> TrickParams:
    if p == 0:
        raise DomainError("p must be nonzero")
    if q <= 0 or math.gcd(p, q) != 1:
        raise DomainError("need q > 0 and gcd(p, q) = 1")
    lam = Fraction(q, p)
    return TrickParams(omega=omega, lam=lam, omega_cap=float(lam) * omega)


def params_burgers(omega_cap: float) -> TrickParams:
    if omega_cap == 0:
        raise DomainError("Omega must be nonzero")
    if omega_cap < 0:
        raise DomainError("omega = 2*Omega must be positive, so Omega > 0 is required here")
    half = Fraction(1, 2)
    return TrickParams(omega=2.0 * omega_cap, lam=half, mu=half, omega_cap=omega_cap)


def params_kdv(p: int, q: int, omega_cap: float) -> TrickParams:
    """mu = 1/3, omega = 3*Omega and lam = 2q/(3p).

    This value of lam is the one that removes the explicit time dependence of
    the nonlinear term and reproduces the coefficient 2(q/p) of w in the
    generalized KdV equation; for p = q it equals 2/3.
    """
    if q <= 0 or p == 0:
        raise DomainError("need q > 0 and p != 0")
    if omega_cap <= 0:
        raise DomainError("omega = 3*Omega must be positive, so Omega > 0 is required here")
    return TrickParams(
        omega=3.0 * omega_cap,
        lam=Fraction(2 * q, 3 * p),
        mu=Fraction(1, 3),
        omega_cap=omega_cap,
        check_relation=False,
    )


def lambda_second_order(p1: int, q1: int, p2: int, q2: int) -> Fraction:
    den = q1 * q2 - p1 * q2 - p2 * q1
    if den == 0:
        raise DomainError("q1*q2 - p1*q2 - p2*q1 vanishes")
    return Fraction(-q1 * (2 * q2 - p2), den)


def params_second_order(p1: int, q1: int, p2: int, q2: int, omega_cap: float) -> TrickParams:
    lam = lambda_second_order(p1, q1, p2, q2)
    if lam == 0:
        raise DomainError("lam = 0 (p2 = 2 q2) leaves omega undetermined")
    omega = omega_cap / float(lam)
    if omega <= 0:
        raise DomainError(
            f"omega = Omega/lam = {omega} must be positive; pick Omega with the sign of lam = {lam}"
        )
    return TrickParams(omega=omega, lam=lam, omega_cap=omega_cap)


def params_painleve(spec_id: str, omega_cap: float) -> TrickParams:
    """Exponential-map parameters behind the Painleve-derived equations."""
    if omega_cap <= 0:
        raise DomainError("these maps need omega > 0, hence Omega > 0")
    table = {
        "1.5": (Fraction(-1, 2), 2.0),
        "1.6": (Fraction(2), 1.0),
        "1.7": (Fraction(-3), 1.0),
        "1.8": (Fraction(1), 1.0),
    }
    try:
        lam, scale = table[spec_id]
    except KeyError:
        raise UnsupportedError(f"no Painleve map for {spec_id}") from None
    return TrickParams(
        omega=scale * omega_cap,
        lam=lam,
        omega_cap=omega_cap,
        tau_map=TauMap.EXPONENTIAL,
        check_relation=False,
    )


# --------------------------------------------------------------------------
# Real avatars
# --------------------------------------------------------------------------

REAL_AVATARS = {
    # complex id -> real id; (1.1) is special-cased on q and p
    "1.5": "1.9",
    "1.6": "1.10",
    "1.7": "1.11",
    "1.8": "1.12",
    "1.13": "1.16",
    "1.14a": "1.17",
    "1.14b": "1.18",
    "1.15": "1.19",
    "1.24": "1.27",
    "1.29": "1.33",
    "1.30": "1.34",
    "1.38": "1.39",
    "2.45": "1.39",
    "1.41": "1.42",
    "1.43": "1.44",
    "1.45": "1.46",
}

_SPLIT = {"alpha": "a", "beta": "b", "gamma": "c", "delta": "d"}


def realify(spec: EquationSpec) -> EquationSpec:
    """Map a complex catalog equation to its real avatar (w = u + i v)."""
    sid = spec.id
    exps: dict = {}
    if sid == "1.1":
        if spec.exp("q") != 1 or spec.exp("p") < 2:
            raise UnsupportedError("(1.1) has a real avatar only for q = 1, p > 1")
        p = spec.exp("p")
        target = "1.3" if p == 2 else "1.2"
        if target == "1.2":
            exps = {"p": p}
    elif sid == "1.35":
        if spec.exp("q") != 1 or spec.exp("p") not in (1, 2):
            raise UnsupportedError("(1.35) has real avatars only for q = 1, p in {1, 2}")
        target = "1.36" if spec.exp("p") == 1 else "1.37"
    elif sid in ("1.25", "1.26"):
        # special cases of (1.24)
        alpha = complex(spec.param("alpha"))
        beta = -(alpha**2) / 9 if sid == "1.25" else 0j
        return realify(EquationSpec("1.24", {"alpha": alpha, "beta": beta}, spec.omega_cap))
    elif sid in REAL_AVATARS:
        target = REAL_AVATARS[sid]
    else:
        raise UnsupportedError(f"equation {sid} has no real avatar")
    params = {}
    for name, value in spec.params.items():
        if name in _SPLIT:
            value = complex(value)
            params[_SPLIT[name] + "1"] = value.real
            params[_SPLIT[name] + "2"] = value.imag
        else:
            params[name] = value
    return EquationSpec(target, params, spec.omega_cap, exps)


def principal_power(z: complex, r: Fraction) -> complex:
    """exp(r * Log z), principal branch."""
    if z == 0:
        if r > 0:
            return 0j
        raise DomainError("zero raised to a non-positive power")
    return cmath.exp(float(r) * cmath.log(z))
