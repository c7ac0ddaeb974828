"""Closed-form solution and period classification for w' - i Omega w = alpha w^(p/q)."""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..core import DomainError, EquationSpec, SingularityError, lcm_periods
from .branches import TWO_PI, circle_log, continued_power, principal_power


class CircleVerdict(enum.Enum):
    OUTSIDE = "outside"  # branch point outside the tau circle: period T1
    INSIDE = "inside"  # inside: period T2
    ON_CIRCLE = "on_circle"  # singular at a real time t_b


@dataclass(frozen=True)
class FirstOrderClassification:
    tau_b: complex
    verdict: CircleVerdict
    T1: Fraction  # multiples of T = 2 pi/|Omega|
    T2: Fraction
    t_b: Optional[float] = None
    margin: float = 0.0  # |Omega| * |z - i/Omega| - 1, negative inside

    @property
    def predicted_period(self) -> Optional[Fraction]:
        if self.verdict is CircleVerdict.OUTSIDE:
            return self.T1
        if self.verdict is CircleVerdict.INSIDE:
            return self.T2
        return None


def tau_branch_point(phi0: complex, alpha: complex, p: int, q: int) -> complex:
    """tau_b = [q/(p-q)] alpha^-1 phi0^((q-p)/q), principal power."""
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    if p == q:
        raise DomainError("p == q is the excluded linear case")
    if phi0 == 0:
        raise SingularityError("phi(0) = 0 has no branch point")
    return q / (p - q) / alpha * principal_power(phi0, Fraction(q - p, q))


def solve_2_6(phi0: complex, alpha: complex, p: int, q: int, tau):
    """phi(tau) = phi0 (1 - tau/tau_b)^(q/(q-p)) solving phi' = alpha phi^(p/q).

    A scalar ``tau`` uses the principal branch. An array is read as a path
    starting at (or near) tau = 0 and the power is continued along it.
    """
    tau_b = tau_branch_point(phi0, alpha, p, q)
    r = Fraction(q, q - p)
    tau_arr = np.asarray(tau, dtype=complex)
    base = 1.0 - tau_arr / tau_b
    if np.any(np.abs(base) < 1e-15):
        raise SingularityError("evaluation at the branch point tau_b")
    if tau_arr.ndim == 0:
        return phi0 * principal_power(complex(base), r)
    return phi0 * continued_power(base, r)


def _check_first_order(spec: EquationSpec) -> tuple[complex, int, int, float]:
    if spec.id != "1.1":
        raise DomainError("expected equation (1.1)")
    alpha = complex(spec.param("alpha"))
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    return alpha, spec.exp("p"), spec.exp("q"), spec.omega_cap


def classify_first_order(w0: complex, spec: EquationSpec, on_tol: float = 1e-12) -> FirstOrderClassification:
    """Decide the period class of the datum w(0) = w0.

    Compares |z - i/Omega| with 1/|Omega| for z = alpha^-1 w0^((q-p)/q)
    (principal power). Data within ``on_tol`` (relative to the radius) of
    the circle are reported as singular.
    """
    alpha, p, q, W = _check_first_order(spec)
    if w0 == 0:
        raise SingularityError("w(0) = 0 is a fixed point with no branch point")
    z = principal_power(w0, Fraction(q - p, q)) / alpha
    margin = abs(W) * abs(z - 1j / W) - 1.0
    lam = Fraction(q, p - q)
    T1 = lcm_periods(abs(lam), 1)
    T2 = Fraction(q)
    tau_b = float(lam) * z
    if abs(margin) <= on_tol:
        nu = W / float(lam)  # frequency of the tau map
        t_b = (cmath.phase(1 + 1j * W * z) / nu) % (TWO_PI / abs(nu))
        return FirstOrderClassification(tau_b, CircleVerdict.ON_CIRCLE, T1, T2, t_b, margin)
    verdict = CircleVerdict.INSIDE if margin < 0 else CircleVerdict.OUTSIDE
    return FirstOrderClassification(tau_b, verdict, T1, T2, None, margin)


def blowup_time(w0: complex, spec: EquationSpec) -> float:
    """Real time t_b in [0, t_p) at which the solution would hit the branch point.

    Only meaningful for data on the singular circle; elsewhere this is the
    time at which tau comes closest in argument to tau_b.
    """
    alpha, p, q, W = _check_first_order(spec)
    z = principal_power(w0, Fraction(q - p, q)) / alpha
    nu = W * (p - q) / q
    return (cmath.phase(1 + 1j * W * z) / nu) % (TWO_PI / abs(nu))


def solve_1_1(w0: complex, spec: EquationSpec, t):
    """Closed-form solution, continued in t from the principal branch at t = 0."""
    alpha, p, q, W = _check_first_order(spec)
    if w0 == 0:
        return np.zeros_like(np.asarray(t, dtype=float), dtype=complex)[()]
    nu = W * (p - q) / q
    c = alpha * principal_power(w0, Fraction(p - q, q)) / (1j * W)
    # bracket = 1 - c (exp(i nu t) - 1)
    log_bracket = circle_log(1 + c, -c, nu, t)
    if np.any(np.real(log_bracket) < -700):
        raise SingularityError("evaluation at a blow-up time")
    t = np.asarray(t, dtype=float)
    out = w0 * np.exp(1j * W * t + (q / (q - p)) * log_bracket)
    return out[()] if np.ndim(out) == 0 else out


def singular_datum(spec: EquationSpec, angle: float) -> complex:
    """A datum on the singular circle, z = i/Omega + exp(i angle)/|Omega|.

    The principal power used by the classifier must reproduce z, which is
    only possible for some angles; unreachable ones raise DomainError.
    """
    alpha, p, q, W = _check_first_order(spec)
    z = 1j / W + cmath.exp(1j * angle) / abs(W)
    target = alpha * z
    if target == 0:
        raise DomainError("angle hits z = 0")
    s = q / (q - p)
    L = cmath.log(target)
    for k in range(-abs(q - p), abs(q - p) + 1):
        w0 = cmath.exp(s * (L + 1j * TWO_PI * k))
        back = principal_power(w0, Fraction(q - p, q))
        if abs(back - target) <= 1e-12 * abs(target):
            return w0
    raise DomainError("no datum reaches this point of the circle through the principal branch")
