"""Shared value types and exact period bookkeeping."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .catalog import KNOWN_IDS

Rational = Fraction

# Blow-up sentinel shared by every integration in the package.
BLOWUP_NORM = 1e8
BLOWUP_STEP_FRACTION = 1e-13


class DomainError(ValueError):
    """An input lies outside the domain of the requested operation."""


class SingularityError(ArithmeticError):
    """Evaluation hit a pole, branch point or other singular point."""

    def __init__(self, message: str, where: Optional[float] = None):
        super().__init__(message)
        self.where = where


class UnsupportedError(NotImplementedError):
    pass


def period_T(omega_cap: float) -> float:
    """Return T = 2*pi/|Omega|."""
    if omega_cap == 0 or not math.isfinite(omega_cap):
        raise DomainError("Omega must be real, finite and nonzero")
    return 2.0 * math.pi / abs(omega_cap)


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise DomainError("refusing to convert a float to an exact rational")
    return Fraction(value)


def lcm_periods(a, b) -> Fraction:
    """Smallest positive rational that is an integer multiple of both ``a`` and ``b``.

    For reduced fractions n1/d1 and n2/d2 this is lcm(n1, n2) / gcd(d1, d2).
    """
    a, b = as_rational(a), as_rational(b)
    if a <= 0 or b <= 0:
        raise DomainError("periods must be positive")
    return Fraction(math.lcm(a.numerator, b.numerator), math.gcd(a.denominator, b.denominator))


def gcd_periods(a, b) -> Fraction:
    a, b = as_rational(a), as_rational(b)
    if a <= 0 or b <= 0:
        raise DomainError("periods must be positive")
    return Fraction(math.gcd(a.numerator, b.numerator), math.lcm(a.denominator, b.denominator))


# --------------------------------------------------------------------------
# Equation catalog entries
# --------------------------------------------------------------------------

EXPONENT_NAMES = ("p", "q", "p1", "q1", "p2", "q2", "n", "m")


@dataclass(frozen=True)
class EquationSpec:
    """A catalog equation id together with its constants.

    ``params`` holds the named constants: complex ones (alpha, beta, gamma,
    delta, eta, c) for complex equations, real ones (a1, a2, b1, ...) for the
    real avatars, and ``a`` for the oscillator.
    """

    id: str
    params: Mapping[str, complex] = field(default_factory=dict)
    omega_cap: float = 1.0
    exponents: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "exponents", {k: int(v) for k, v in self.exponents.items()})
        validate_spec(self)

    def param(self, name: str, default: complex = 0.0) -> complex:
        return self.params.get(name, default)

    def exp(self, name: str) -> int:
        try:
            return self.exponents[name]
        except KeyError:
            raise DomainError(f"equation {self.id} needs exponent {name!r}") from None

    @property
    def T(self) -> float:
        return period_T(self.omega_cap)

    def to_dict(self) -> dict:
        def enc(v):
            v = complex(v)
            return [v.real, v.imag]

        return {
            "id": self.id,
            "omega_cap": self.omega_cap,
            "params": {k: enc(self.params[k]) for k in sorted(self.params)},
            "exponents": {k: self.exponents[k] for k in sorted(self.exponents)},
        }


# ids for which (p, q) must be a coprime pair with q > 0
_PQ_IDS = {"1.1", "2.5", "1.35", "2.22", "1.40", "3.46"}


def validate_spec(spec: EquationSpec) -> None:
    if spec.id not in KNOWN_IDS:
        raise DomainError(f"unknown equation id {spec.id!r}")
    W = spec.omega_cap
    if not isinstance(W, (int, float)) or W == 0 or not math.isfinite(W):
        raise DomainError("omega_cap must be real, finite and nonzero")
    for k, v in spec.params.items():
        if not np.isfinite(complex(v)):
            raise DomainError(f"parameter {k} must be finite")
    for k in spec.exponents:
        if k not in EXPONENT_NAMES:
            raise DomainError(f"unknown exponent name {k!r}")
    if spec.id in _PQ_IDS:
        p, q = spec.exp("p"), spec.exp("q")
        if q <= 0:
            raise DomainError("q must be positive")
        if math.gcd(p, q) != 1:
            raise DomainError("p and q must be coprime")
        if spec.id in ("1.1", "2.5") and p == q:
            raise DomainError("p == q is the excluded linear case")
        if spec.id in ("1.35", "2.22") and p == 0:
            raise DomainError("p must be nonzero")
    if spec.id == "1.2":
        if spec.exp("p") < 2:
            raise DomainError("(1.2) needs an integer p > 1")
    if spec.id in ("1.20", "3.18"):
        for a, b in (("p1", "q1"), ("p2", "q2")):
            if spec.exp(b) <= 0:
                raise DomainError(f"{b} must be positive")
            if math.gcd(spec.exp(a), spec.exp(b)) != 1:
                raise DomainError(f"{a} and {b} must be coprime")
        if spec.id == "1.20" and spec.exp("p2") == 2 * spec.exp("q2"):
            raise DomainError("p2 == 2 q2 makes (1.20) degenerate")
    if spec.id == "1.22":
        if spec.exp("n") < 1 or spec.exp("m") < 0:
            raise DomainError("(1.22) needs n >= 1 and m >= 0")
    if spec.id == "1.23":
        if spec.exp("n") < 1 or spec.exp("m") < 1:
            raise DomainError("(1.23) needs n >= 1 and m >= 1")


# --------------------------------------------------------------------------
# Trajectories and classifications
# --------------------------------------------------------------------------


class Status(enum.Enum):
    COMPLETED = "completed"
    BLOWUP = "blowup"
    STIFF = "stiff"


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # shape (len(t), dim), complex or real
    status: Status = Status.COMPLETED
    t_b: Optional[float] = None
    equation: Optional[EquationSpec] = None
    n_steps: int = 0
    n_rejected: int = 0

    @property
    def blew_up(self) -> bool:
        return self.status is Status.BLOWUP

    def final(self) -> np.ndarray:
        return self.y[-1]


class Verdict(enum.Enum):
    PERIODIC = "periodic"
    SINGULAR = "singular"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class PeriodClassification:
    """Outcome of a period analysis.

    ``period`` is a rational multiple of T (the equation's own 2*pi/|Omega|);
    ``t_b`` is a real blow-up time reduced modulo ``t_p`` when that is known.
    """

    kind: Verdict
    period: Optional[Fraction] = None
    t_b: Optional[float] = None
    predicted: Optional[object] = None
    diagnostic: str = ""

    def __post_init__(self):
        if self.kind is Verdict.PERIODIC and (self.period is None or self.period <= 0):
            raise DomainError("periodic classification needs a positive period")

    @classmethod
    def periodic(cls, period, **kw) -> "PeriodClassification":
        return cls(Verdict.PERIODIC, period=as_rational(period), **kw)

    @classmethod
    def singular(cls, t_b, **kw) -> "PeriodClassification":
        return cls(Verdict.SINGULAR, t_b=float(t_b), **kw)

    @classmethod
    def unresolved(cls, diagnostic="", **kw) -> "PeriodClassification":
        return cls(Verdict.UNRESOLVED, diagnostic=diagnostic, **kw)


@dataclass
class BasinGrid:
    re_range: tuple[float, float]
    im_range: tuple[float, float]
    resolution: tuple[int, int]  # (n_re, n_im)
    cells: Optional[list[list[PeriodClassification]]] = None  # cells[j][i]: im index j, re index i

    def __post_init__(self):
        n_re, n_im = self.resolution
        if n_re < 0 or n_im < 0:
            raise DomainError("resolution must be non-negative")
        if n_re > 2048 or n_im > 2048:
            raise DomainError("resolution is capped at 2048 x 2048")
        if self.cells is not None:
            if len(self.cells) != n_im or any(len(row) != n_re for row in self.cells):
                raise DomainError("cells do not match resolution")

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        n_re, n_im = self.resolution
        (r0, r1), (i0, i1) = self.re_range, self.im_range
        re = r0 + (np.arange(n_re) + 0.5) * (r1 - r0) / max(n_re, 1)
        im = i0 + (np.arange(n_im) + 0.5) * (i1 - i0) / max(n_im, 1)
        return re, im

    @property
    def size(self) -> int:
        return self.resolution[0] * self.resolution[1]


def state_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b))) if a.size else 0.0
