"""Cross-checks between third-order equations and the second-order ones they came from."""

from __future__ import annotations

import logging

import numpy as np

from ..core import DomainError, EquationSpec, Status, period_T
from .solver import integrate_adaptive
from .systems import make_system

log = logging.getLogger(__name__)

# third-order id -> (second-order id, role of the scalar the caller supplies)
_PAIRS = {
    ("1.29", "1.6"): "gamma",  # alpha shared, gamma eliminated by differentiation
    ("1.31", "1.7"): "alpha",  # gamma shared, alpha eliminated
    ("1.32", "1.5"): "alpha",  # (1.5) with gamma = alpha*eta, alpha eliminated
    ("1.32", "3.45"): "alpha",
    ("1.30", "3.44"): "c",  # shifted equation at alpha*c = -6 Omega^2
}


def _specs(pair, value, omega_cap, alpha, gamma, eta):
    third, second = pair
    if third == "1.29":
        return EquationSpec("1.29", {"alpha": alpha}, omega_cap), EquationSpec(
            "1.6", {"alpha": alpha, "gamma": value}, omega_cap
        )
    if third == "1.31":
        return EquationSpec("1.31", {"gamma": gamma}, omega_cap), EquationSpec(
            "1.7", {"alpha": value, "gamma": gamma}, omega_cap
        )
    if third == "1.32":
        two = (
            EquationSpec("1.5", {"alpha": value, "gamma": value * eta}, omega_cap)
            if second == "1.5"
            else EquationSpec("3.45", {"alpha": value, "eta": eta}, omega_cap)
        )
        return EquationSpec("1.32", {"eta": eta}, omega_cap), two
    if third == "1.30":
        return EquationSpec("1.30", {"alpha": alpha}, omega_cap), EquationSpec(
            "3.44", {"alpha": alpha, "c": value}, omega_cap
        )
    raise DomainError(f"unsupported pair {pair}")


def third_order_consistency(
    spec_pair,
    w0: complex,
    wdot0: complex,
    gamma_or_alpha: complex,
    *,
    omega_cap: float = 1.0,
    alpha: complex = 1.0,
    gamma: complex = 0.0,
    eta: complex = 0.0,
    wddot0: complex | None = None,
    n_samples: int = 401,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-13,
) -> float:
    """Integrate both members of a pair over [0, 2T] and return max |w3 - w2|.

    The third-order system is seeded with the acceleration that the
    second-order equation assigns to (w0, wdot0). For the (1.30)/(3.44)
    pair both are third order and ``wddot0`` must be given; ``gamma_or_alpha``
    is then the shift c, and ``alpha`` must satisfy alpha*c = -6 Omega^2 for
    the two to coincide.

    If either run blows up the comparison stops at the earlier blow-up time
    and that truncation is logged.
    """
    pair = tuple(spec_pair)
    if pair not in _PAIRS:
        raise DomainError(f"unsupported pair {pair}; known: {sorted(_PAIRS)}")
    three, two = _specs(pair, complex(gamma_or_alpha), omega_cap, complex(alpha), complex(gamma), complex(eta))
    sys3, sys2 = make_system(three), make_system(two)
    if sys2.dimension == 2:
        acc = sys2.rhs(0.0, np.array([w0, wdot0], dtype=complex))[1]
        y3, y2 = [w0, wdot0, acc], [w0, wdot0]
    else:
        if wddot0 is None:
            raise DomainError("a third-order partner needs wddot0")
        y3 = y2 = [w0, wdot0, wddot0]
    t1 = 2.0 * period_T(omega_cap)
    ts = np.linspace(0.0, t1, n_samples)
    a = integrate_adaptive(sys3, y3, 0.0, t1, rel_tol, abs_tol, t_eval=ts)
    b = integrate_adaptive(sys2, y2, 0.0, t1, rel_tol, abs_tol, t_eval=ts)
    n = min(len(a.t), len(b.t))
    if a.status is Status.BLOWUP or b.status is Status.BLOWUP:
        log.warning("comparison truncated at t=%g by a blow-up", a.t[n - 1] if n else 0.0)
        # the final recorded state of a blown-up run is past the sentinel
        n = max(n - 1, 0)
    if n == 0:
        return float("nan")
    return float(np.max(np.abs(a.y[:n, 0] - b.y[:n, 0])))
