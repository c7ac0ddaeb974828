"""Minimal-period measurement and periodicity basins."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import (
    BasinGrid,
    DomainError,
    EquationSpec,
    PeriodClassification,
    SingularityError,
    Status,
    Verdict,
    as_rational,
)
from .integrate import OdeSystem, integrate_adaptive, make_system

MAX_MULTIPLE = 10_000
DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-12


def natural_base(spec: EquationSpec) -> Fraction:
    """A period quantum, in units of T, that divides every expected period.

    For (1.1) the solution combines exp(i Omega t) with functions of period
    t_p = |q/(p-q)| T, and gcd(T, t_p) = T/|p - q| for coprime p, q.
    """
    if spec.id == "1.1":
        return Fraction(1, abs(spec.exp("p") - spec.exp("q")))
    return Fraction(1)


def detect_minimal_period(
    system: OdeSystem,
    y0: Sequence[complex],
    base,
    max_multiple: int = 64,
    tol: float = 1e-6,
    rel_tol: float = DEFAULT_RTOL,
    abs_tol: float = DEFAULT_ATOL,
    predicted=None,
) -> PeriodClassification:
    """Smallest k with |obs(k T_base) - obs(0)| < tol (1 + |obs(0)|).

    ``base`` is a rational multiple of the equation's T. The comparison uses
    ``system.observe``: every state component plus the sheet of each tracked
    fractional power, so a return of w alone on the wrong sheet is not
    counted. The trajectory is advanced one base period at a time and the
    scan stops at the first return.
    """
    base = as_rational(base)
    if base <= 0:
        raise DomainError("base period must be positive")
    if not 1 <= max_multiple <= MAX_MULTIPLE:
        raise DomainError(f"max_multiple must lie in [1, {MAX_MULTIPLE}]")
    T_base = float(base) * system.spec.T
    try:
        state = system.initial(y0)
    except SingularityError as exc:
        return PeriodClassification.unresolved(f"singular initial data: {exc}", predicted=predicted)
    ref = system.observe(state)
    scale = 1.0 + float(np.max(np.abs(ref)))
    t0 = 0.0
    for k in range(1, max_multiple + 1):
        t1 = k * T_base
        tr = integrate_adaptive(system, state, t0, t1, rel_tol, abs_tol, t_eval=[t1])
        if tr.status is Status.BLOWUP:
            return PeriodClassification.singular(tr.t_b, predicted=predicted)
        if tr.status is Status.STIFF:
            return PeriodClassification.unresolved(
                f"step size collapsed without blow-up near t={t0:.6g}", predicted=predicted
            )
        state = np.asarray(tr.y[-1], dtype=complex)
        dist = float(np.max(np.abs(system.observe(state) - ref)))
        if dist < tol * scale:
            return PeriodClassification.periodic(k * base, predicted=predicted, diagnostic=f"return error {dist:.3g}")
        t0 = t1
    return PeriodClassification.unresolved(f"no return within {max_multiple} base periods", predicted=predicted)


# --------------------------------------------------------------------------
# basins
# --------------------------------------------------------------------------


def _scan_rows(args):
    spec, rows, re_vals, im_vals, tail, base, max_multiple, tol, rel_tol, abs_tol = args
    system = make_system(spec)
    out = []
    for j in rows:
        row = []
        for i in range(len(re_vals)):
            w0 = complex(re_vals[i], im_vals[j])
            try:
                cell = detect_minimal_period(system, [w0, *tail], base, max_multiple, tol, rel_tol, abs_tol)
            except (ArithmeticError, ValueError) as exc:
                cell = PeriodClassification.unresolved(f"{type(exc).__name__}: {exc}")
            row.append(cell)
        out.append((j, row))
    return out


def basin_scan(
    spec: EquationSpec,
    grid: BasinGrid,
    tol: float = 1e-6,
    base=None,
    max_multiple: int = 16,
    extra_state: Sequence[complex] = (),
    workers: int = 1,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
) -> BasinGrid:
    """Classify w(0) at every cell center; the other state entries come from ``extra_state``.

    Cells are independent. With ``workers > 1`` rows are farmed out to a
    process pool and reassembled by index, so the grid does not depend on
    the worker count. Per-cell failures become Unresolved cells.
    """
    if not 1 <= max_multiple <= MAX_MULTIPLE:
        raise DomainError(f"max_multiple must lie in [1, {MAX_MULTIPLE}]")
    n_re, n_im = grid.resolution
    if n_re * n_im == 0:
        return BasinGrid(grid.re_range, grid.im_range, grid.resolution, [[] for _ in range(n_im)])
    base = natural_base(spec) if base is None else as_rational(base)
    re_vals, im_vals = grid.centers()
    re_vals, im_vals = [float(v) for v in re_vals], [float(v) for v in im_vals]
    tail = tuple(complex(v) for v in extra_state)
    make_system(spec)  # fail early on an unusable spec
    payload = lambda rows: (spec, rows, re_vals, im_vals, tail, base, max_multiple, tol, rel_tol, abs_tol)  # noqa: E731
    rows = list(range(n_im))
    if workers <= 1:
        results = _scan_rows(payload(rows))
    else:
        chunks = [rows[s::workers] for s in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [item for part in pool.map(_scan_rows, [payload(c) for c in chunks if c]) for item in part]
    cells: list = [None] * n_im
    for j, row in results:
        cells[j] = row
    return BasinGrid(grid.re_range, grid.im_range, grid.resolution, cells)


def verdict_code(cell: PeriodClassification) -> str:
    return cell.kind.value


def basin_fractions(grid: BasinGrid) -> dict:
    counts = {v.value: 0 for v in Verdict}
    for row in grid.cells or []:
        for cell in row:
            counts[cell.kind.value] += 1
    total = max(grid.size, 1)
    return {k: counts[k] / total for k in counts}


def analytic_basin_fractions(spec: EquationSpec, grid: BasinGrid, band: float = 0.0) -> dict:
    """Fractions of cells inside, outside and within ``band`` of the singular circle (first-order only)."""
    from .analytic.first_order import classify_first_order, CircleVerdict

    counts = {"outside": 0, "inside": 0, "on_circle": 0}
    re_vals, im_vals = grid.centers()
    for y in im_vals:
        for x in re_vals:
            c = classify_first_order(complex(x, y), spec, on_tol=band)
            counts[c.verdict.value if c.verdict is not CircleVerdict.ON_CIRCLE else "on_circle"] += 1
    total = max(grid.size, 1)
    return {k: v / total for k, v in counts.items()}


def measured_period_divides(measured: Fraction, bound: Fraction) -> bool:
    """True when ``bound`` is an integer multiple of ``measured``."""
    q = as_rational(bound) / as_rational(measured)
    return q.denominator == 1


def first_return_distance(system: OdeSystem, y0, period_T_units, rel_tol=DEFAULT_RTOL, abs_tol=DEFAULT_ATOL) -> float:
    """max |obs(P) - obs(0)| relative to 1 + |obs(0)| for a given period P (in units of T)."""
    P = float(as_rational(period_T_units)) * system.spec.T
    state = system.initial(y0)
    tr = integrate_adaptive(system, state, 0.0, P, rel_tol, abs_tol, t_eval=[P])
    if tr.status is not Status.COMPLETED:
        return math.inf
    ref = system.observe(state)
    return float(np.max(np.abs(system.observe(np.asarray(tr.y[-1], dtype=complex)) - ref))) / (
        1.0 + float(np.max(np.abs(ref)))
    )
