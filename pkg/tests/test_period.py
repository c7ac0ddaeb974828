"""Minimal-period detection and basin scans."""

from fractions import Fraction

import numpy as np
import pytest

from periodize import analytic as an
from periodize.core import BasinGrid, DomainError, EquationSpec, Verdict
from periodize.integrate import make_system
from periodize.period import (
    basin_fractions,
    basin_scan,
    detect_minimal_period,
    first_return_distance,
    measured_period_divides,
    natural_base,
)


def first_order_spec(p, q, omega_cap=1.0, alpha=1.0):
    return EquationSpec("1.1", {"alpha": alpha}, omega_cap, {"p": p, "q": q})


def test_natural_base():
    assert natural_base(first_order_spec(2, 1)) == 1
    assert natural_base(first_order_spec(3, 1)) == Fraction(1, 2)
    assert natural_base(first_order_spec(1, 3)) == Fraction(1, 2)
    assert natural_base(EquationSpec("1.4", {"alpha": 1}, 1.0)) == 1


def test_linear_limit_returns_after_one_period():
    spec = first_order_spec(2, 1, alpha=1e-12)
    system = make_system(spec)
    c = detect_minimal_period(system, [0.4 + 0.1j], 1)
    assert c.kind is Verdict.PERIODIC and c.period == 1


def test_measured_divides_predicted():
    spec = first_order_spec(3, 1, 0.5)
    system = make_system(spec)
    w0 = 0.1 + 0.05j
    predicted = an.classify_first_order(w0, spec).predicted_period
    c = detect_minimal_period(system, [w0], natural_base(spec))
    assert c.kind is Verdict.PERIODIC
    assert measured_period_divides(c.period, predicted)
    assert first_return_distance(system, [w0], c.period) < 1e-6


def test_singular_datum_blowup_time():
    spec = first_order_spec(2, 1)
    w0 = 0.3 - 0.5j
    c = detect_minimal_period(make_system(spec), [w0], 1)
    assert c.kind is Verdict.SINGULAR
    assert abs(c.t_b - an.blowup_time(w0, spec)) < 1e-3 * spec.T


def test_bad_arguments():
    system = make_system(first_order_spec(2, 1))
    with pytest.raises(DomainError):
        detect_minimal_period(system, [0.1], 1, max_multiple=0)
    with pytest.raises(DomainError):
        detect_minimal_period(system, [0.1], 0)
    assert not measured_period_divides(Fraction(2), Fraction(3))


class TestBasin:
    spec = first_order_spec(2, 1)

    def test_matches_analytic_verdicts(self):
        grid = basin_scan(self.spec, BasinGrid((-3, 3), (-3, 3), (20, 20)))
        re, im = grid.centers()
        agree = 0
        for j, y in enumerate(im):
            for i, x in enumerate(re):
                a = an.classify_first_order(complex(x, y), self.spec)
                cell = grid.cells[j][i]
                if a.predicted_period is None:
                    agree += cell.kind is Verdict.SINGULAR
                else:
                    agree += cell.kind is Verdict.PERIODIC and cell.period == a.predicted_period
        assert agree >= 0.99 * grid.size

    def test_inside_region_is_uniform(self):
        grid = basin_scan(self.spec, BasinGrid((-0.5, 0.5), (-2, -1), (5, 5)))
        periods = {c.period for row in grid.cells for c in row}
        assert {c.kind for row in grid.cells for c in row} == {Verdict.PERIODIC}
        assert periods == {1}
        assert basin_fractions(grid)["periodic"] == 1.0

    def test_empty_grid(self):
        grid = basin_scan(self.spec, BasinGrid((-1, 1), (-1, 1), (0, 0)))
        assert grid.size == 0
        assert basin_fractions(grid)["periodic"] == 0.0

    def test_worker_count_irrelevant(self):
        g = BasinGrid((-2, 2), (-2, 2), (4, 3))
        one = basin_scan(self.spec, g, workers=1)
        two = basin_scan(self.spec, g, workers=2)
        key = lambda grid: [[(c.kind, c.period, c.t_b) for c in row] for row in grid.cells]  # noqa: E731
        assert key(one) == key(two)

    def test_max_multiple_range(self):
        with pytest.raises(DomainError):
            basin_scan(self.spec, BasinGrid((-1, 1), (-1, 1), (1, 1)), max_multiple=10**6)


def test_return_distance_off_period_is_large():
    spec = first_order_spec(2, 1)
    system = make_system(spec)
    assert first_return_distance(system, [0.2 + 0.1j], Fraction(1, 2)) > 1e-3
    assert np.isfinite(first_return_distance(system, [0.2 + 0.1j], 1))
