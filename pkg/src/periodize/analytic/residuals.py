"""Finite-difference residuals of closed-form ODE solutions against the catalog right-hand sides."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from ..catalog import COMPLEX_ODES
from ..core import DomainError, EquationSpec

# 4th-order central stencils, offsets -3..3
_W = {
    0: np.array([0, 0, 0, 1, 0, 0, 0], dtype=float),
    1: np.array([0, 1, -8, 0, 8, -1, 0]) / 12,
    2: np.array([0, -1, 16, -30, 16, -1, 0]) / 12,
    3: np.array([1, -8, 13, 0, -13, 8, -1]) / 8,
}
_OFFSETS = np.arange(-3, 4)


def derivatives(w_of_t: Callable, t, order: int, h: float) -> list[np.ndarray]:
    """[w, w', ..., w^(order)] at the points ``t`` by central differences."""
    if order > 3:
        raise DomainError("derivatives up to third order only")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    vals = np.stack([np.asarray(w_of_t(t + o * h), dtype=complex) for o in _OFFSETS])
    return [np.tensordot(_W[k], vals, axes=1) / h**k for k in range(order + 1)]


def _all_derivatives(w_of_t, dw_of_t, t, order, h):
    if dw_of_t is None or order == 0:
        return derivatives(w_of_t, t, order, h)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return [np.asarray(w_of_t(t), dtype=complex)] + derivatives(dw_of_t, t, order - 1, h)


def ode_residual(
    spec: EquationSpec,
    w_of_t: Callable,
    t_samples,
    h: float = 1e-3,
    n_path: int = 4000,
    dw_of_t: Optional[Callable] = None,
) -> float:
    """max_t |w^(n)(t) - F(t, w, ..., w^(n-1))| for a complex catalog ODE of order n.

    The right-hand side is the one the integrator uses. Fractional powers
    are evaluated on the sheet reached by continuing their bases from the
    principal value at t = 0 along [0, max t], which is how the closed
    forms are defined. When ``dw_of_t`` supplies w' the higher derivatives
    are differenced from it, so evaluation noise in special functions is
    amplified by 1/h^(n-1) only.
    """
    from ..integrate import make_system

    if spec.id not in COMPLEX_ODES:
        raise DomainError(f"{spec.id} is not a complex catalog ODE")
    if not h > 0:
        raise DomainError("h must be positive")
    order = COMPLEX_ODES[spec.id]
    system = make_system(spec)
    t_samples = np.atleast_1d(np.asarray(t_samples, dtype=float))
    if t_samples.size == 0:
        raise DomainError("no sample times")
    if np.any(t_samples < 0):
        raise DomainError("sample times must be non-negative")
    D = _all_derivatives(w_of_t, dw_of_t, t_samples, order, h)
    thetas = np.zeros((len(system.branches), t_samples.size))
    if system.branches:
        t_end = float(t_samples.max())
        path = np.union1d(np.linspace(0.0, t_end, max(n_path, 2)), t_samples)
        Dp = _all_derivatives(w_of_t, dw_of_t, path, order - 1, h)
        for j, br in enumerate(system.branches):
            base = np.array([br.base(tt, [Dp[k][i] for k in range(order)]) for i, tt in enumerate(path)])
            theta = np.unwrap(np.angle(base))
            theta += -2 * math.pi * round((theta[0] - np.angle(base[0])) / (2 * math.pi))
            thetas[j] = theta[np.searchsorted(path, t_samples)]
    worst = 0.0
    for i, tt in enumerate(t_samples):
        state = [D[k][i] for k in range(order)] + list(thetas[:, i])
        f = system.rhs(float(tt), state)
        worst = max(worst, abs(D[order][i] - f[order - 1]))
    return float(worst)
