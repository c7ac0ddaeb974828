"""Weierstrass elliptic function by Laurent series plus argument doubling."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..core import SingularityError

_N_TERMS = 9  # c_2 .. c_9, i.e. through z^16
_SERIES_RADIUS = 0.35  # in units of 1/scale; truncation error ~ 1e-13 there


@dataclass(frozen=True)
class WeierstrassParams:
    g2: complex = 0j
    g3: complex = 0j

    @property
    def discriminant(self) -> complex:
        return complex(self.g2) ** 3 - 27 * complex(self.g3) ** 2

    @property
    def scale(self) -> float:
        """Size of the lattice's inverse: the series converges for |z| < ~1/scale."""
        return max(abs(self.g2) ** 0.25, abs(self.g3) ** (1 / 6), 1e-300)


@lru_cache(maxsize=256)
def laurent_coefficients(g2: complex, g3: complex) -> tuple:
    """c_k with P(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)."""
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, _N_TERMS + 1):
        c[k] = 3.0 / ((2 * k + 1) * (k - 3)) * sum(c[m] * c[k - m] for m in range(2, k - 1))
    return tuple(c[k] for k in range(2, _N_TERMS + 1))


def _series(z: complex, coeffs) -> tuple[complex, complex]:
    z2 = z * z
    p = 1.0 / z2
    dp = -2.0 / (z2 * z)
    zp = z2  # z^(2k-2) for k = 2
    for k, ck in enumerate(coeffs, start=2):
        p += ck * zp
        dp += ck * (2 * k - 2) * zp / z
        zp *= z2
    return p, dp


def weierstrass_pair(z: complex, params: WeierstrassParams) -> tuple[complex, complex]:
    """(P(z), P'(z)) for invariants g2, g3."""
    z = complex(z)
    if z == 0:
        raise SingularityError("pole of P at z = 0")
    g2, g3 = complex(params.g2), complex(params.g3)
    coeffs = laurent_coefficients(g2, g3)
    r0 = _SERIES_RADIUS / params.scale
    n = 0
    zs = z
    while abs(zs) > r0:
        zs /= 2.0
        n += 1
    p, dp = _series(zs, coeffs)
    for _ in range(n):
        if dp == 0:
            raise SingularityError("argument lands on a lattice point")
        ddp = 6 * p * p - g2 / 2
        dddp = 12 * p * dp
        p_new = ddp * ddp / (4 * dp * dp) - 2 * p
        dp = 0.5 * (ddp * dddp / (2 * dp * dp) - ddp**3 / (2 * dp**3) - 2 * dp)
        p = p_new
    if not (cmath.isfinite(p) and cmath.isfinite(dp)):
        raise SingularityError("argument lands on a lattice point")
    return p, dp


def weierstrass_p(z, params: WeierstrassParams):
    if np.ndim(z) == 0:
        return weierstrass_pair(complex(z), params)[0]
    return np.array([weierstrass_pair(complex(v), params)[0] for v in np.ravel(z)]).reshape(np.shape(z))


def weierstrass_p_prime(z, params: WeierstrassParams):
    if np.ndim(z) == 0:
        return weierstrass_pair(complex(z), params)[1]
    return np.array([weierstrass_pair(complex(v), params)[1] for v in np.ravel(z)]).reshape(np.shape(z))


def solve_1_13(beta: complex, g3: complex, alpha: complex, omega_cap: float, t, derivative: bool = False):
    """w(t) = (6/alpha) exp(i Omega t) P(beta - (2i/Omega) exp(i Omega t/2); 0, g3).

    With ``derivative=True`` returns (w, w').
    """
    params = WeierstrassParams(0j, g3)
    W = omega_cap
    t_arr = np.asarray(t, dtype=float)
    e = np.exp(1j * W * t_arr)
    h = np.exp(0.5j * W * t_arr)
    zarg = beta - (2j / W) * h
    pairs = [weierstrass_pair(complex(v), params) for v in np.ravel(zarg)]
    P = np.array([a for a, _ in pairs]).reshape(t_arr.shape)
    dP = np.array([b for _, b in pairs]).reshape(t_arr.shape)
    w = (6 / alpha) * e * P
    if not derivative:
        return w[()] if w.ndim == 0 else w
    # d/dt of the argument is (-(2i/Omega))(i Omega/2) h = h
    wd = (6 / alpha) * e * (1j * W * P + dP * h)
    if w.ndim == 0:
        return w[()], wd[()]
    return w, wd


def nonsingular_1_13(beta: complex, omega_cap: float, tol: float = 0.0) -> bool:
    """|beta| != |2/Omega|; exact for the pole at the origin of the lattice."""
    return abs(abs(beta) - abs(2.0 / omega_cap)) > tol
