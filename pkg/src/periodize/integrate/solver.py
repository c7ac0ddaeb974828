"""Adaptive Dormand-Prince 5(4) integration with blow-up detection."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from ..core import (
    BLOWUP_NORM,
    BLOWUP_STEP_FRACTION,
    DomainError,
    SingularityError,
    Status,
    Trajectory,
)
from .systems import OdeSystem

# Dormand-Prince coefficients
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = _A[6]
# difference between the 5th and embedded 4th order weights
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_MAX_STEPS = 2_000_000
_UNDERFLOW_RATIO = 1e6


def _dopri_step(f, t, y, k1, h):
    """One Dormand-Prince step on plain lists of Python scalars."""
    n = len(y)
    r = range(n)
    a = _A
    k2 = f(t + _C[1] * h, [y[i] + h * (a[1][0] * k1[i]) for i in r])
    k3 = f(t + _C[2] * h, [y[i] + h * (a[2][0] * k1[i] + a[2][1] * k2[i]) for i in r])
    k4 = f(t + _C[3] * h, [y[i] + h * (a[3][0] * k1[i] + a[3][1] * k2[i] + a[3][2] * k3[i]) for i in r])
    k5 = f(
        t + _C[4] * h,
        [y[i] + h * (a[4][0] * k1[i] + a[4][1] * k2[i] + a[4][2] * k3[i] + a[4][3] * k4[i]) for i in r],
    )
    k6 = f(
        t + h,
        [y[i] + h * (a[5][0] * k1[i] + a[5][1] * k2[i] + a[5][2] * k3[i] + a[5][3] * k4[i] + a[5][4] * k5[i]) for i in r],
    )
    b = _B5
    y5 = [y[i] + h * (b[0] * k1[i] + b[2] * k3[i] + b[3] * k4[i] + b[4] * k5[i] + b[5] * k6[i]) for i in r]
    # FSAL: the 5th order weights are the last stage, so k7 = f(t+h, y5)
    k7 = f(t + h, y5)
    e = _E
    err = [h * (e[0] * k1[i] + e[2] * k3[i] + e[3] * k4[i] + e[4] * k5[i] + e[5] * k6[i] + e[6] * k7[i]) for i in r]
    return y5, err, k7


def _err_norm(y, y_new, err, rel_tol, abs_tol):
    acc = 0.0
    for a, b, e in zip(y, y_new, err):
        sc = abs_tol + rel_tol * max(abs(a), abs(b))
        acc += (abs(e) / sc) ** 2
    return math.sqrt(acc / len(y))


_NEAR_NORM = 1e4  # sqrt of the blow-up sentinel
_NEAR_SCALE = 1e-9


def _growth_scale(y, k, dim):
    """|y_i| / (d|y_i|/dt) for the largest physical component, or nan."""
    i = max(range(dim), key=lambda j: abs(y[j]))
    rate = (y[i].conjugate() * k[i]).real
    return abs(y[i]) ** 2 / rate if rate > 0 else math.nan


def _extrapolated_blowup(t_prev, g_prev, t, g):
    """Blow-up time from two samples of g = |y|/|y|'.

    For |y| ~ C (t_b - t)^(-gamma), g = (t_b - t)/gamma is linear in t, so
    two values fix both gamma and t_b. Falls back to ``t`` when the samples
    do not look like a power-law blow-up.
    """
    if t_prev is None or not (math.isfinite(g_prev) and math.isfinite(g)) or t <= t_prev:
        return t
    slope = (g - g_prev) / (t - t_prev)
    if not slope < 0:
        return t
    return t - g / slope


def _finite(y):
    return all(math.isfinite(abs(v)) for v in y)


def integrate_adaptive(
    system: OdeSystem,
    y0: Sequence[complex],
    t0: float,
    t1: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    t_eval: Optional[Sequence[float]] = None,
    max_steps: int = _MAX_STEPS,
) -> Trajectory:
    """Integrate ``system`` from t0 to t1.

    Steps are clipped so that every requested sample time is hit exactly, so
    samples carry the full order of the method. Without ``t_eval`` every
    accepted step is recorded. The returned state includes tracked branch
    arguments; ``system.observe`` strips them to comparable quantities.

    The run stops with ``Status.BLOWUP`` when the physical state norm exceeds
    ``BLOWUP_NORM`` or when the step size collapses while the solution or
    its derivative is growing without bound. After a norm blow-up ``t_b`` is
    extrapolated from the growth rate over the last step; after a step
    collapse it is the last accepted time plus half the final attempted step. A step collapse with
    bounded state and derivative is reported as ``Status.STIFF``.
    """
    if not t1 > t0:
        raise DomainError("need t1 > t0")
    if not (1e-14 < rel_tol < 1e-2) or not (1e-14 < abs_tol < 1e-2):
        raise DomainError("tolerances must lie in (1e-14, 1e-2)")
    f = system.rhs_full
    dim = system.dimension
    y = [complex(v) for v in system.initial(y0, t0)]
    span = t1 - t0
    h_min = BLOWUP_STEP_FRACTION * span

    if t_eval is None:
        samples = None
        ts, ys = [t0], [y]
    else:
        samples = np.asarray(t_eval, dtype=float)
        if samples.ndim != 1 or np.any(np.diff(samples) < 0) or samples[0] < t0 or samples[-1] > t1:
            raise DomainError("t_eval must be sorted and lie within [t0, t1]")
        samples = [float(v) for v in samples]
        ts, ys = [], []
        i_sample = 0
        while i_sample < len(samples) and samples[i_sample] == t0:
            ts.append(t0)
            ys.append(y)
            i_sample += 1

    def finish(status, t_b=None, n=0, rej=0):
        y_arr = np.array(ys, dtype=complex) if ys else np.zeros((0, len(y)), dtype=complex)
        if system.real:
            y_arr = y_arr.real
        return Trajectory(np.array(ts), y_arr, status, t_b, system.spec, n, rej)

    try:
        k1 = f(t0, y)
    except SingularityError:
        return finish(Status.BLOWUP, t0)

    # initial step guess from the derivative scale
    zero = [0j] * len(y)
    d0 = _err_norm(y, zero, y, rel_tol, abs_tol)
    d1 = _err_norm(y, zero, k1, rel_tol, abs_tol)
    h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
    h = min(max(h, 1e-6 * span), span / 10)

    t = t0
    n_acc = n_rej = 0
    while t < t1:
        if n_acc + n_rej > max_steps:
            return finish(Status.STIFF, None, n_acc, n_rej)
        target = t1 if samples is None or i_sample >= len(samples) else samples[i_sample]
        hit = False
        step = h
        if t + step >= target:
            step = target - t
            hit = True
        try:
            y_new, err, k_new = _dopri_step(f, t, y, k1, step)
            ok = _finite(y_new)
        except (SingularityError, OverflowError, ZeroDivisionError, ValueError):
            ok = False
        if ok:
            en = _err_norm(y, y_new, err, rel_tol, abs_tol)
            ok = math.isfinite(en)
        else:
            en = math.inf
        if ok and en <= 1.0:
            n_acc += 1
            t_old, g_old = t, _growth_scale(y, k1, dim)
            t = target if hit else t + step
            y, k1 = y_new, k_new
            if max(abs(v) for v in y[:dim]) > BLOWUP_NORM:
                ts.append(t)
                ys.append(y)
                t_b = _extrapolated_blowup(t_old, g_old, t, _growth_scale(y, k1, dim))
                return finish(Status.BLOWUP, t_b, n_acc, n_rej)
            if max(abs(v) for v in y[:dim]) > _NEAR_NORM:
                # weak (algebraic) singularities are missed by the norm
                # sentinel because no step lands close enough to them; a
                # large state whose growth scale has collapsed is one
                g = _growth_scale(y, k1, dim)
                if 0 < g < _NEAR_SCALE * span:
                    ts.append(t)
                    ys.append(y)
                    return finish(Status.BLOWUP, _extrapolated_blowup(t_old, g_old, t, g), n_acc, n_rej)
            if samples is None:
                ts.append(t)
                ys.append(y)
            elif hit:
                while i_sample < len(samples) and samples[i_sample] <= t:
                    ts.append(samples[i_sample])
                    ys.append(y)
                    i_sample += 1
            fac = _MAX_FACTOR if en == 0 else min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * en ** -0.2))
            if not hit or fac < 1.0:
                h = step * fac
            # a clipped step says nothing about the natural step; keep h
        else:
            n_rej += 1
            fac = _MIN_FACTOR if not math.isfinite(en) else max(_MIN_FACTOR, _SAFETY * en ** -0.25)
            h = step * fac
            if h < h_min:
                try:
                    dnorm = max(abs(v) for v in f(t, y))
                except (SingularityError, OverflowError, ZeroDivisionError):
                    dnorm = math.inf
                ynorm = max(abs(v) for v in y[:dim])
                # a collapsing step with an exploding derivative is a movable singularity
                if not math.isfinite(dnorm) or dnorm * span > _UNDERFLOW_RATIO * (1.0 + ynorm):
                    return finish(Status.BLOWUP, t + 0.5 * step, n_acc, n_rej)
                return finish(Status.STIFF, None, n_acc, n_rej)
    return finish(Status.COMPLETED, None, n_acc, n_rej)
