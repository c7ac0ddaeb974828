"""Continuous tracking of polynomial roots and the implicit-solution period bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ..core import DomainError, SingularityError, lcm_periods

AMBIGUITY_FACTOR = 10.0
_MAX_HALVINGS = 20


@dataclass
class RootPaths:
    t: np.ndarray
    roots: np.ndarray  # (len(t), degree); inf marks a root that left through infinity
    collisions: list = field(default_factory=list)  # times where two roots met
    refinements: int = 0


def _roots(coeffs, degree: int) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(np.abs(c) > 0)
    if nz.size == 0:
        raise SingularityError("identically vanishing polynomial")
    r = np.roots(c[nz[0]:]) if nz[0] < len(c) - 1 else np.zeros(0, dtype=complex)
    pad = degree - r.size
    return np.concatenate([r, np.full(pad, np.inf + 0j)]) if pad > 0 else r


def _chordal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise chordal distance on the Riemann sphere; infinity is an ordinary point."""
    fa, fb = np.isfinite(a), np.isfinite(b)
    A = np.where(fa, a, 0)[:, None]
    B = np.where(fb, b, 0)[None, :]
    sa = np.sqrt(1 + np.abs(A) ** 2)
    sb = np.sqrt(1 + np.abs(B) ** 2)
    d = np.abs(A - B) / (sa * sb)
    d = np.where(~fa[:, None] & fb[None, :], 1 / sb, d)
    d = np.where(fa[:, None] & ~fb[None, :], 1 / sa, d)
    d = np.where(~fa[:, None] & ~fb[None, :], 0.0, d)
    return d


def _match(prev: np.ndarray, new: np.ndarray, follow=None):
    """Greedy nearest pairing; returns (ordered new roots, ambiguity ratio).

    Distances are chordal, so roots escaping through infinity when the
    leading coefficient vanishes pair up naturally. The ratio compares each
    root's assigned displacement with the distance to the nearest competing
    candidate; small ratios mean a clean match.
    """
    n = prev.size
    d = _chordal(prev, new)
    order = np.argsort(d, axis=None, kind="stable")
    taken_p, taken_n = np.zeros(n, bool), np.zeros(n, bool)
    assign = np.full(n, -1)
    for flat in order:
        i, j = divmod(int(flat), n)
        if taken_p[i] or taken_n[j]:
            continue
        assign[i] = j
        taken_p[i] = taken_n[j] = True
    out = new[assign]
    worst = 0.0
    for i in range(n) if follow is None else follow:
        own = d[i, assign[i]]
        # distance to the closest other candidate root
        others = np.delete(d[i], assign[i])
        rival = others.min() if others.size else np.inf
        if own == 0:
            continue
        worst = max(worst, own * AMBIGUITY_FACTOR / rival if rival > 0 else np.inf)
    return out, worst


def root_track_polynomial(
    coeffs_of_t: Callable[[float], Sequence[complex]],
    t_range: tuple[float, float],
    samples: Union[int, Sequence[float]],
    follow: Optional[Sequence[int]] = None,
) -> RootPaths:
    """Follow every root of sum_k c_k(t) z^(n-k) continuously in t.

    Roots are paired greedily by distance between consecutive samples. When
    a pairing is ambiguous (a rival root lies within AMBIGUITY_FACTOR times
    the pairing distance) the interval is halved and retried; if halving
    does not separate them, two roots nearly coincide and a collision is
    recorded at that time.

    ``follow`` restricts the ambiguity test (and so the refinement and the
    collision records) to the roots with those indices in the ordering of
    numpy.roots at the first sample; the other roots are still continued
    by nearest pairing.
    """
    if np.ndim(samples) == 0:
        n = int(samples)
        if n < 2:
            raise DomainError("need at least two samples")
        grid = np.linspace(t_range[0], t_range[1], n)
    else:
        grid = np.asarray(samples, dtype=float)
    degree = len(coeffs_of_t(float(grid[0]))) - 1
    if degree < 1:
        raise DomainError("polynomial must have degree >= 1")
    cur = _roots(coeffs_of_t(float(grid[0])), degree)
    out = [cur]
    collisions = []
    refinements = 0

    for k in range(1, grid.size):
        t_prev, t_goal = float(grid[k - 1]), float(grid[k])
        state = cur
        t_here = t_prev
        while t_here < t_goal:
            full = t_goal - t_here
            h = full
            for _ in range(_MAX_HALVINGS):
                cand = _roots(coeffs_of_t(t_here + h), degree)
                matched, worst = _match(state, cand, follow)
                if worst < 1.0:
                    break
                h /= 2
                refinements += 1
                if h <= 1e-12 * (abs(t_here) + full):
                    break
            if worst >= 1.0:
                # halving never separated the candidates: two roots (nearly)
                # meet here; step across with plain nearest pairing
                collisions.append(t_here)
                h = full
                matched, _ = _match(state, _roots(coeffs_of_t(t_here + h), degree), follow)
            state = matched
            t_here = t_goal if h == full else t_here + h
        cur = state
        out.append(cur)
    return RootPaths(grid, np.array(out), collisions, refinements)


# --------------------------------------------------------------------------
# period bounds for the implicitly solved equations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Eq122:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise DomainError("(1.22) needs n >= 1 and m >= 0")

    @property
    def degree(self) -> int:
        return self.n * self.m + self.n + 1


@dataclass(frozen=True)
class Eq123:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DomainError("(1.23) needs n >= 1 and m >= 1")


def implicit_period_bounds(case) -> tuple[Fraction, Fraction]:
    """(lower, upper) period bounds in units of T, exact.

    (1.22): t_p = T/(nm+n+1), lower = lcm(T, t_p), upper = lcm(T, T (nm+n)!).
    (1.23): t_p = T/(2nm-1), lower = lcm(T, t_p), upper = lcm(T, T (2nm-2)!).
    """
    if isinstance(case, Eq122):
        n, m = case.n, case.m
        t_p = Fraction(1, n * m + n + 1)
        upper = Fraction(math.factorial(n * m + n))
    elif isinstance(case, Eq123):
        n, m = case.n, case.m
        t_p = Fraction(1, 2 * n * m - 1)
        upper = Fraction(math.factorial(2 * n * m - 2))
    else:
        raise DomainError("case must be Eq122 or Eq123")
    return lcm_periods(1, t_p), lcm_periods(1, upper)


def quadrature_polynomial_1_22(n: int, m: int, a2: complex) -> np.ndarray:
    """Coefficients (highest first) of P(phi) = integral_0^phi (x^(m+1) + a^2)^n dx."""
    deg = n * m + n + 1
    c = np.zeros(deg + 1, dtype=complex)
    for j in range(n + 1):
        # C(n, j) x^((m+1) j) a^(2(n-j)) integrates to x^((m+1)j+1)/((m+1)j+1)
        power = (m + 1) * j + 1
        c[deg - power] += math.comb(n, j) * a2 ** (n - j) / power
    return c


def rhs_coefficient_1_22(n: int, m: int, alpha: complex) -> complex:
    """kappa in P(phi) = b + kappa tau."""
    return (-alpha / (n * (m + 1))) ** (-n)
