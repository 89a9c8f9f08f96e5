import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from swsc.regions.fm import (Expr, InfeasibleRegionError, fm_eliminate, fm_project, fm_symbolic, le, nonneg,
                             to_region)
from swsc.regions.rate_splitting import example_closed_form, example_rhs_sets, example_system


def test_expr_algebra():
    a, b = Expr.sym("a"), Expr.sym("b")
    e = a * 2 + b - a
    assert e == a + b
    assert e.evaluate({"a": 1.5, "b": 2.0}) == pytest.approx(3.5)
    assert (a - a).is_nonneg()
    assert not (a - b).is_nonneg()
    assert Expr.const(3).evaluate() == 3


def test_eliminate_single_variable():
    # x <= 2, y - x <= 1, -x <= 0  =>  y <= 3
    cons = [le({"x": 1}, 2), le({"y": 1, "x": -1}, 1), nonneg("x")]
    out = fm_eliminate(cons, "x")
    ys = [c for c in out if c.coeffs == (("y", 1),)]
    assert len(ys) == 1 and ys[0].rhs.evaluate() == 3


def test_symbolic_projection_of_two_receiver_system():
    cons, _, sums = example_system(*([0.0] * 6))
    sym = fm_symbolic(cons, sums)
    want1, want2 = example_rhs_sets()
    assert {c.rhs for c in sym if c.coeffs == (("R1", 1),)} == want1
    assert {c.rhs for c in sym if c.coeffs == (("R2", 1),)} == want2
    assert all(c.coeffs in ((("R1", 1),), (("R2", 1),)) or c.is_nonneg_bound() for c in sym)


@settings(max_examples=100, deadline=None)
@given(v=st.lists(st.floats(0.0, 2.0), min_size=6, max_size=6))
def test_numeric_projection_equals_closed_form(v):
    cons, values, sums = example_system(*v)
    reg = fm_project(cons, sums, values)
    r1, r2 = example_closed_form(values)
    assert reg.max_r1() == pytest.approx(r1, abs=1e-12)
    assert reg.max_r2() == pytest.approx(r2, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(rhs=st.lists(st.floats(0.1, 2.0), min_size=5, max_size=5))
def test_projection_agrees_with_linear_programming(rhs):
    # coupled split rates: the sum bound spans both senders' parts
    cons = [le({"R11": 1}, rhs[0]), le({"R12": 1}, rhs[1]), le({"R2": 1}, rhs[2]),
            le({"R11": 1, "R2": 1}, rhs[3]), le({"R11": 1, "R12": 1, "R2": 1}, rhs[4])]
    reg = fm_project(cons)
    a_ub = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [1, 1, 1]], dtype=float)
    for w in ([1, 1, 0], [0, 0, 1], [1, 1, 1], [2, 2, 1]):
        lp = linprog(-np.array(w, dtype=float), A_ub=a_ub, b_ub=rhs, bounds=[(0, None)] * 3)
        w1, w2 = w[0], w[2]
        pts = reg.vertices()
        assert (pts @ np.array([w1, w2])).max() == pytest.approx(-lp.fun, abs=1e-9)


def test_infeasible_and_malformed():
    with pytest.raises(InfeasibleRegionError):
        to_region([le({"R1": 1}, -1.0)])
    with pytest.raises(ValueError, match="undefined"):
        fm_symbolic([le({"Q": 1}, 1.0)], {"R1": ["R11"]})
    with pytest.raises(ValueError, match="0/1"):
        to_region([le({"R1": 2, "R2": 1}, 1.0)])
