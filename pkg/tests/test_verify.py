import pytest

from swsc.regions.geometry import RateRegion2
from swsc.verify import Check, boundary_gap, run_suite


def test_gap_of_identical_regions_is_zero():
    a = RateRegion2.from_bounds([[1.0, 1.0, 1.5]])
    assert boundary_gap(a, a) == (0.0, 0.0)


def test_gap_sees_real_excess_and_shortfall():
    outer = RateRegion2.from_bounds([[1.0, 1.0, 1.5]])
    inner = RateRegion2.from_bounds([[1.0, 1.0, 1.2]])
    short, excess = boundary_gap(outer, inner)
    assert short == pytest.approx(0.3, abs=0.01) and excess == 0.0
    assert boundary_gap(inner, outer)[1] == pytest.approx(short)
    wider = RateRegion2.from_bounds([[1.1, 0.5, 2.0]])
    assert boundary_gap(outer, wider)[1] == pytest.approx(0.5)


def test_rounding_at_the_right_edge_is_not_excess():
    outer = RateRegion2.from_bounds([[0.2062467910571073, 0.5, 1.0]])
    inner = RateRegion2.from_bounds([[0.20624679105710753, 0.5, 1.0]])
    assert boundary_gap(outer, inner)[1] == 0.0


def test_check_lines_and_unknown_suite():
    assert Check("x", 1e-3, 1e-2, True).line() == "PASS x: max residual 1.000e-03 (tol 0.01)"
    with pytest.raises(KeyError):
        run_suite("nope")
