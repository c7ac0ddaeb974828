"""Explicit solutions of the second-order autonomous equations and their
nonsingularity predicates."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..core import DomainError, SingularityError
from .branches import TWO_PI, circle_log


def _t(t):
    return np.asarray(t, dtype=float)


def _out(x):
    return x[()] if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class LogBranchCheck:
    """Outcome of comparing |A| with |L + 2 pi i k| over every branch k."""

    holds: bool  # True: no branch makes the two moduli equal
    margin: float  # min_k | |A| - |L + 2 pi i k| |
    k: int  # branch attaining the minimum
    unresolved: bool = False  # margin below the tolerance


def log_branch_condition(A: complex, L: complex, tol: float = 1e-10, k_min: int = 10) -> LogBranchCheck:
    """Check |A| != |L + 2 pi i k| for all integers k.

    Branches beyond |k| > (|A| + |L|)/(2 pi) + 1 cannot reach equality, so
    the scan covers max(k_min, that bound) on each side and is exhaustive.
    """
    bound = int(math.ceil((abs(A) + abs(L)) / TWO_PI)) + 1
    kmax = max(k_min, bound)
    best, best_k = math.inf, 0
    for k in range(-kmax, kmax + 1):
        m = abs(abs(A) - abs(L + 1j * TWO_PI * k))
        if m < best:
            best, best_k = m, k
    unresolved = best <= tol
    return LogBranchCheck(holds=not unresolved, margin=best, k=best_k, unresolved=unresolved)


# ---------------------------------------------------------------- (1.14a)


def solve_1_14a(a: complex, b: complex, alpha: complex, omega_cap: float, t):
    """General solution of w'' - i Omega w' - 2 Omega^2 = alpha exp(w).

    Returns (w, w'). The logarithm in w is taken on the principal branch;
    exp(w) and w' do not depend on that choice.
    """
    if alpha == 0 or a == 0:
        raise DomainError("need alpha != 0 and a != 0")
    W = omega_cap
    t = _t(t)
    E = np.exp(1j * W * t)
    K = (alpha / W**2) / (2 * a * a) * cmath.exp(b)
    ex = np.exp(a * E)
    den = K + ex
    if np.any(np.abs(den) < 1e-300):
        raise SingularityError("vanishing denominator")
    w = a * E + b + 2j * W * t - 2 * np.log(den)
    wd = 1j * W * a * E + 2j * W * (1 - a * E * ex / den)
    return _out(w), _out(wd)


def nonsingular_1_14a(a: complex, b: complex, alpha: complex, omega_cap: float, tol: float = 1e-10) -> LogBranchCheck:
    """Sufficient condition for (1.14a) to be regular: |a| != |b - log(-2 a^2 Omega^2/alpha)|."""
    L = b - cmath.log(-2 * a * a * omega_cap**2 / alpha)
    return log_branch_condition(a, L, tol)


# ---------------------------------------------------------------- (1.21)


def _sqrt_a2(a2: complex) -> complex:
    if a2 == 0:
        raise DomainError("a^2 must be nonzero")
    return cmath.sqrt(a2)


def solve_1_21_family(a2: complex, b: complex, alpha: complex, omega_cap: float, t, derivative: bool = False):
    """w(t) = exp(i Omega t) phi(tau(t)) with the quadratic root

        phi = [c - (c^2 + 4 a^2)^(1/2)]/(2 a^2),  c = b + 2 tau/alpha,

    the square root continued in t from its principal value at t = 0.
    """
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    W = omega_cap
    a = _sqrt_a2(a2)
    t = _t(t)
    E = np.exp(1j * W * t)
    kappa = 2.0 / (alpha * 1j * W)  # c = (b - kappa) + kappa E
    c = b - kappa + kappa * E
    # c^2 + 4a^2 = (c - 2ia)(c + 2ia); continue each linear factor separately
    logD = circle_log(b - kappa - 2j * a, kappa, W, t) + circle_log(b - kappa + 2j * a, kappa, W, t)
    D0 = (b - 2j * a) * (b + 2j * a)
    shift = cmath.log(D0) - (circle_log(b - kappa - 2j * a, kappa, W, 0.0) + circle_log(b - kappa + 2j * a, kappa, W, 0.0))
    logD = logD + 1j * TWO_PI * round(shift.imag / TWO_PI)
    s = np.exp(0.5 * logD)
    phi = (c - s) / (2 * a2)
    w = E * phi
    if not derivative:
        return _out(w)
    if np.any(np.abs(s) < 1e-300):
        raise SingularityError("branch point of the square root")
    dphi = (1 - c / s) / (alpha * a2)  # d phi / d tau
    wd = 1j * W * w + E * E * dphi
    return _out(w), _out(wd)


def initial_data_1_21(a2: complex, b: complex, alpha: complex, omega_cap: float) -> tuple[complex, complex]:
    """(w(0), w'(0)) generated by the constants a^2, b."""
    r = cmath.sqrt(b * b + 4 * a2)
    w0 = (b - r) / (2 * a2)
    return w0, (1 - b / r) / (alpha * a2) + 1j * omega_cap * w0


def constants_1_21(w0: complex, wd0: complex, alpha: complex, omega_cap: float) -> tuple[complex, complex]:
    """Invert the initial-data map: the (a^2, b) producing given (w(0), w'(0)).

    From the quadratic, -1/phi + a^2 phi = c at tau = 0 and
    phi' (1/phi^2 + a^2) = 2/alpha.
    """
    if w0 == 0:
        raise DomainError("w(0) must be nonzero")
    dphi = wd0 - 1j * omega_cap * w0
    if dphi == 0:
        raise DomainError("phi'(0) must be nonzero")
    a2 = 2 / (alpha * dphi) - 1 / w0**2
    b = a2 * w0 - 1 / w0
    return a2, b


def branch_data_1_21(a2: complex, b: complex, alpha: complex, omega_cap: float) -> list[complex]:
    """The two values 1 + i Omega tau_pm at the square-root branch points.

    Their moduli decide the solution's behavior: modulus 1 means a real
    blow-up time t_b with exp(i Omega t_b) equal to that value.
    """
    a = _sqrt_a2(a2)
    return [1 + 1j * omega_cap * alpha * (s * 1j * a - b / 2) for s in (1, -1)]


def blowup_times_1_21(a2, b, alpha, omega_cap, tol: float = 1e-9) -> list[float]:
    T = TWO_PI / abs(omega_cap)
    out = []
    for v in branch_data_1_21(a2, b, alpha, omega_cap):
        if abs(abs(v) - 1) <= tol:
            out.append((cmath.phase(v) / omega_cap) % T)
    return out


def period_1_21(a2, b, alpha, omega_cap) -> Fraction:
    """Period in units of T.

    The quadratic's square root changes sign once per branch point inside
    the circle traced by tau, so with exactly one branch point inside the
    two roots are exchanged after one turn and the period is 2T.
    """
    inside = sum(abs(v) < 1 for v in branch_data_1_21(a2, b, alpha, omega_cap))
    return Fraction(2) if inside == 1 else Fraction(1)


# ---------------------------------------------------------------- (1.25)


def solve_1_25(A: complex, B: complex, alpha: complex, omega_cap: float, t):
    """General solution of (1.24) with beta = -alpha^2/9."""
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    W = omega_cap
    E = np.exp(1j * W * _t(t))
    num = (2 - B) * E - 2 * E * E
    den = 1 - A - B + (B - 2) * E + E * E
    if np.any(np.abs(den) < 1e-14 * (1 + np.abs(num))):
        raise SingularityError("vanishing denominator")
    return _out(3j * (W / alpha) * num / den)


def denominator_roots_1_25(A: complex, B: complex) -> tuple[complex, complex]:
    """Values of exp(i Omega t) where the (1.25) denominator vanishes."""
    r = cmath.sqrt(B * B / 4 + A)
    return 1 - B / 2 + r, 1 - B / 2 - r


def nonsingular_1_25(A: complex, B: complex, tol: float = 1e-10) -> tuple[bool, float]:
    """(holds, margin) for |1 - B/2 +- [(B/2)^2 + A]^(1/2)| != 1."""
    margin = min(abs(abs(E) - 1) for E in denominator_roots_1_25(A, B))
    return margin > tol, margin


# ---------------------------------------------------------------- (1.26)


def solve_1_26(A: complex, B: complex, alpha: complex, omega_cap: float, t):
    """General solution of (1.24) with beta = 0."""
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    W = omega_cap
    E = np.exp(1j * W * _t(t))
    ex = np.exp(A * E)
    den = B - ex
    if np.any(np.abs(den) < 1e-14 * (1 + np.abs(B))):
        raise SingularityError("vanishing denominator")
    return _out(1j * W * (A / alpha) * E * (B + ex) / den)


def nonsingular_1_26(A: complex, B: complex, tol: float = 1e-10) -> LogBranchCheck:
    """|A| != |log B| over every branch of the logarithm."""
    if B == 0:
        return LogBranchCheck(holds=True, margin=math.inf, k=0)
    return log_branch_condition(A, cmath.log(B), tol)
