"""Explicit solutions of w_t = (beta w_x + i Omega x w + alpha w^2)_x.

Both families come from the heat equation psi_tau = beta psi_xixi through
phi = (beta/alpha) psi_xi/psi, then w = exp(i Omega t) phi(x exp(i Omega t), tau(t))
with tau = (exp(2 i Omega t) - 1)/(2 i Omega).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..core import DomainError, SingularityError


def _grid(x, t):
    return np.asarray(x, dtype=float), np.asarray(t, dtype=float)


def _out(v):
    return v[()] if np.ndim(v) == 0 else v


def kink_exponent(k, beta, omega_cap, x, t):
    """Y = exp(-k x E + i beta k^2 E^2/(2 Omega)), E = exp(i Omega t)."""
    x, t = _grid(x, t)
    E = np.exp(1j * omega_cap * t)
    return np.exp(-k * x * E + 1j * beta * k * k * E * E / (2 * omega_cap))


def kink_B_from_A(A: complex, k: complex, beta: complex, omega_cap: float) -> complex:
    """B for the heat solution psi = A - exp(k xi + beta k^2 tau)."""
    if A == 0:
        raise DomainError("A must be nonzero")
    return cmath.exp(1j * beta * k * k / (2 * omega_cap)) / A


def burgers_kink(k, B, alpha, beta, omega_cap, x, t):
    """w = (beta k B/alpha) E / (B - Y).

    Broadcasts over x and t. The prefactor carries beta and a plus sign;
    both are fixed by substituting into the PDE.
    """
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    x, t = _grid(x, t)
    E = np.exp(1j * omega_cap * t)
    den = B - kink_exponent(k, beta, omega_cap, x, t)
    if np.any(np.abs(den) < 1e-300):
        raise SingularityError("kink denominator vanishes")
    return _out(beta * k * B / alpha * E / den)


def kink_denominator(k, B, beta, omega_cap, x, t):
    return _out(B - kink_exponent(k, beta, omega_cap, x, t))


def locator_constants(k: complex, B: complex, beta: complex, omega_cap: float) -> tuple[complex, complex]:
    """a = -log(B)/k and b = i beta k/(2 Omega); singular points solve x = a/E + b E."""
    if k == 0 or B == 0:
        raise DomainError("need k != 0 and B != 0")
    return -cmath.log(B) / k, 1j * beta * k / (2 * omega_cap)


def singularity_locator(k, B, beta, omega_cap) -> tuple[float, float]:
    """A real point (x*, t*) where the kink's denominator vanishes.

    With x = a exp(-i Omega t) + b exp(i Omega t), Im x vanishes when
    sin(Omega t) = (Im a + Im b)/D and cos(Omega t) = (Re a - Re b)/D, and
    then x = (|a|^2 - |b|^2)/D. t* is reduced to [0, 2 pi/|Omega|).
    """
    a, b = locator_constants(k, B, beta, omega_cap)
    s = a.imag + b.imag
    c = a.real - b.real
    D = math.hypot(s, c)
    if D == 0:
        raise SingularityError("degenerate configuration: D = 0")
    T = 2 * math.pi / abs(omega_cap)
    t_star = (math.atan2(s / D, c / D) / omega_cap) % T
    x_star = (abs(a) ** 2 - abs(b) ** 2) / D
    return x_star, t_star


def locator_x(k, B, beta, omega_cap, t):
    """The complex root x(t) = a exp(-i Omega t) + b exp(i Omega t)."""
    a, b = locator_constants(k, B, beta, omega_cap)
    t = np.asarray(t, dtype=float)
    return _out(a * np.exp(-1j * omega_cap * t) + b * np.exp(1j * omega_cap * t))


# ---------------------------------------------------------------- N = 2 rational solution


def burgers_rational_n2(a, b, beta, omega_cap, x, t, alpha=1.0):
    """w = (beta/alpha) 2 (x - a e) / [(x - a e)^2 - i beta/Omega - b e^2], e = exp(-i Omega t).

    This is the N = 2 pole sum (beta/alpha) sum_s 1/(x - x_s(t)); the
    beta/alpha factor is what makes it solve the PDE.
    """
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    x, t = _grid(x, t)
    e = np.exp(-1j * omega_cap * t)
    y = x - a * e
    den = y * y - 1j * beta / omega_cap - b * e * e
    if np.any(np.abs(den) < 1e-300):
        raise SingularityError("real pole of the rational solution")
    return _out((beta / alpha) * 2 * y / den)


def n2_poles(a, b, beta, omega_cap, t) -> np.ndarray:
    """x_pm(t) = a e +- (i beta/Omega + b e^2)^(1/2); shape (len(t), 2)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    e = np.exp(-1j * omega_cap * t)
    r = np.sqrt(1j * beta / omega_cap + b * e * e)
    return np.stack([a * e + r, a * e - r], axis=-1)


def n2_bound(a, b, beta, omega_cap) -> float:
    """(|Re beta/Omega| - |b|)^(1/2)/2 - |a|; requires |Re beta/Omega| > |b|."""
    R = abs((beta / omega_cap).real)
    if not R > abs(b):
        raise DomainError("bound undefined: need |Re(beta)/Omega| > |b|")
    return math.sqrt(R - abs(b)) / 2 - abs(a)


def n2_nonsingular_condition(a, b, beta, omega_cap) -> bool:
    return abs((beta / omega_cap).real) > abs(b) + 4 * abs(a) ** 2


def n2_pole_bound_check(a, b, beta, omega_cap, n_samples: int = 1000) -> tuple[float, float]:
    """(min over t of |Im x_s(t)|, analytic lower bound).

    The bound is nan when |Re(beta)/Omega| <= |b|. The caller decides what
    to assert: the lower bound is not valid for every parameter set that
    satisfies the sufficient condition (see the tests).
    """
    T = 2 * math.pi / abs(omega_cap)
    t = np.linspace(0.0, T, n_samples, endpoint=False)
    min_imag = float(np.min(np.abs(n2_poles(a, b, beta, omega_cap, t).imag)))
    try:
        bound = n2_bound(a, b, beta, omega_cap)
    except DomainError:
        bound = float("nan")
    return min_imag, bound
