"""Continuous logarithms and fractional powers along real-time paths."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from ..core import SingularityError

TWO_PI = 2.0 * math.pi


def circle_log(A: complex, B: complex, nu: float, t) -> np.ndarray:
    """Continuous log of X(t) = A + B*exp(i*nu*t), principal at t = 0.

    X traces a circle; writing it as A(1 + u) or B e^{i nu t}(1 + 1/u) with
    |u| <= 1 makes the continuation explicit, with no sampling involved.
    Raises SingularityError where X vanishes.
    """
    t = np.asarray(t, dtype=float)
    A, B = complex(A), complex(B)
    e = np.exp(1j * nu * t)
    X = A + B * e
    if np.any(np.abs(X) <= 1e-300) or (A == 0 and B == 0):
        raise SingularityError("logarithm of zero along the path")
    if abs(A) >= abs(B):
        # arg(1 + u) stays in (-pi/2, pi/2] when |u| <= 1
        val = cmath.log(A) + np.log1p(B * e / A)
        at0 = cmath.log(A) + cmath.log(1 + B / A)
    else:
        val = cmath.log(B) + 1j * nu * t + np.log1p(A / (B * e))
        at0 = cmath.log(B) + cmath.log(1 + A / B)
    shift = cmath.log(A + B) - at0
    k = round(shift.imag / TWO_PI)
    out = val + 1j * TWO_PI * k
    return out[()] if out.ndim == 0 else out


def unwrapped_log(values) -> np.ndarray:
    """Log of a sampled path, continued from the principal value at index 0.

    The samples must be dense enough that consecutive arguments differ by
    less than pi.
    """
    z = np.asarray(values, dtype=complex)
    if np.any(z == 0):
        raise SingularityError("logarithm of zero along the path")
    ang = np.unwrap(np.angle(z))
    return np.log(np.abs(z)) + 1j * ang


def continued_power(values, r) -> np.ndarray:
    """values**r following the sampled path continuously from the principal branch."""
    return np.exp(float(Fraction(r)) * unwrapped_log(values))


def principal_power(z: complex, r) -> complex:
    if z == 0:
        if float(r) > 0:
            return 0j
        raise SingularityError("zero raised to a non-positive power")
    return cmath.exp(float(Fraction(r)) * cmath.log(z))
