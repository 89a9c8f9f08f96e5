"""Fourier-Motzkin elimination with symbolic right-hand sides.

Right-hand sides are integer combinations of named nonnegative quantities
(mutual informations) plus a constant, so the projected system can be
compared structurally against closed forms before being evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .geometry import CONTAIN_TOL, RateRegion2

CONST = "1"


class InfeasibleRegionError(ValueError):
    """The constraint system admits no nonnegative rate point."""


class Expr:
    """Immutable linear form ``sum coef * symbol`` with a constant under key ``"1"``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        items = {}
        for k, v in dict(terms or {}).items():
            if v != 0:
                items[k] = items.get(k, 0) + v
        self.terms = tuple(sorted((k, v) for k, v in items.items() if v != 0))
        self._hash = hash(self.terms)

    @classmethod
    def sym(cls, label: str, coef=1) -> "Expr":
        return cls({label: coef})

    @classmethod
    def const(cls, value) -> "Expr":
        return cls({CONST: value})

    @classmethod
    def of(cls, value) -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, str):
            return cls.sym(value)
        return cls.const(value)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other) -> "Expr":
        d = self.as_dict()
        for k, v in Expr.of(other).terms:
            d[k] = d.get(k, 0) + v
        return Expr(d)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr({k: -v for k, v in self.terms})

    def __sub__(self, other) -> "Expr":
        return self + (-Expr.of(other))

    def __mul__(self, f) -> "Expr":
        return Expr({k: v * f for k, v in self.terms})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Expr) and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Expr({str(self)})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.terms:
            name = "" if k == CONST else k
            if k == CONST:
                parts.append(f"{v:g}")
            elif v == 1:
                parts.append(name)
            else:
                parts.append(f"{v:g}*{name}")
        return " + ".join(parts)

    def is_nonneg(self) -> bool:
        """Nonnegative for every assignment of nonnegative symbol values."""
        return all(v >= 0 for _, v in self.terms)

    def symbols(self) -> set:
        return {k for k, _ in self.terms if k != CONST}

    def evaluate(self, values=None) -> float:
        total = 0.0
        for k, v in self.terms:
            if k == CONST:
                total += v
            else:
                if values is None or k not in values:
                    raise KeyError(f"no value for {k}")
                total += v * values[k]
        return float(total)


@dataclass(frozen=True)
class Constraint:
    """``sum coeffs[var] * var <= rhs``."""

    coeffs: tuple
    rhs: Expr
    label: str = ""

    @classmethod
    def make(cls, coeffs, rhs, label: str = "") -> "Constraint":
        if isinstance(coeffs, str):
            coeffs = {coeffs: 1}
        c = tuple(sorted((k, int(v)) for k, v in dict(coeffs).items() if v != 0))
        return cls(c, Expr.of(rhs), label)

    def coef(self, var: str) -> int:
        for k, v in self.coeffs:
            if k == var:
                return v
        return 0

    def variables(self) -> set:
        return {k for k, _ in self.coeffs}

    def __str__(self) -> str:
        lhs = " + ".join(k if v == 1 else f"{v}*{k}" for k, v in self.coeffs) or "0"
        return f"{lhs} <= {self.rhs}"

    def is_nonneg_bound(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0][1] < 0 and not self.rhs.terms

    def is_trivial(self) -> bool:
        # lhs <= 0 <= rhs given the nonnegativity rows, which must themselves survive
        return (all(v <= 0 for _, v in self.coeffs) and self.rhs.is_nonneg()
                and not self.is_nonneg_bound())


def le(coeffs, rhs, label: str = "") -> Constraint:
    return Constraint.make(coeffs, rhs, label)


def nonneg(var: str) -> Constraint:
    return Constraint.make({var: -1}, Expr(), f"{var}>=0")


def _combine(p: Constraint, n: Constraint, var: str) -> Constraint:
    a, b = p.coef(var), -n.coef(var)
    g = math.gcd(a, b)
    fp, fn = b // g, a // g
    coeffs = {}
    for k, v in p.coeffs:
        coeffs[k] = coeffs.get(k, 0) + fp * v
    for k, v in n.coeffs:
        coeffs[k] = coeffs.get(k, 0) + fn * v
    coeffs.pop(var, None)
    rest = [v for v in coeffs.values() if v != 0]
    g2 = 0
    for v in rest:
        g2 = math.gcd(g2, abs(v))
    rhs = p.rhs * fp + n.rhs * fn
    if g2 > 1 and all(isinstance(v, int) and v % g2 == 0 for _, v in rhs.terms):
        coeffs = {k: v // g2 for k, v in coeffs.items()}
        rhs = Expr({k: v // g2 for k, v in rhs.terms})
    label = "+".join(x for x in (p.label, n.label) if x)
    return Constraint.make(coeffs, rhs, label)


def simplify(constraints) -> list:
    """Drop trivial, duplicate and symbolically dominated constraints."""
    by_lhs: dict = {}
    for c in constraints:
        if c.is_trivial():
            continue
        group = by_lhs.setdefault(c.coeffs, [])
        if any((c.rhs - d.rhs).is_nonneg() for d in group):
            continue
        group[:] = [d for d in group if not (d.rhs - c.rhs).is_nonneg()]
        group.append(c)
    return [c for group in by_lhs.values() for c in group]


def fm_eliminate(constraints, var: str) -> list:
    """Project out ``var``."""
    pos, neg, rest = [], [], []
    for c in constraints:
        a = c.coef(var)
        (pos if a > 0 else neg if a < 0 else rest).append(c)
    combined = [_combine(p, n, var) for p, n in product(pos, neg)]
    return simplify(rest + combined)


def _substitute(c: Constraint, part: str, total: str, others) -> Constraint:
    a = c.coef(part)
    if a == 0:
        return c
    coeffs = dict(c.coeffs)
    del coeffs[part]
    coeffs[total] = coeffs.get(total, 0) + a
    for o in others:
        coeffs[o] = coeffs.get(o, 0) - a
    return Constraint.make(coeffs, c.rhs, c.label)


def fm_symbolic(constraints, sums: dict) -> list:
    """Project a system over split rates onto the totals named in ``sums``.

    ``sums`` maps each total (e.g. ``"R1"``) to the parts it adds up. Parts
    are constrained nonnegative; the last part of each total is substituted,
    the remaining parts are eliminated.
    """
    cons = list(constraints)
    parts = [p for ps in sums.values() for p in ps]
    known = set(parts)
    for c in cons:
        extra = c.variables() - known - set(sums)
        if extra:
            raise ValueError(f"constraint {c} uses undefined rates {sorted(extra)}")
    cons += [nonneg(p) for p in parts]
    eliminate = []
    for total, ps in sums.items():
        ps = list(ps)
        if not ps:
            raise ValueError(f"{total} has no parts")
        last, others = ps[-1], ps[:-1]
        cons = [_substitute(c, last, total, others) for c in cons]
        eliminate += others
    cons = simplify(cons)
    for v in eliminate:
        cons = fm_eliminate(cons, v)
    return cons


def to_region(constraints, values=None, var1: str = "R1", var2: str = "R2",
              label: str = "", tol: float = CONTAIN_TOL) -> RateRegion2:
    """Evaluate a system over (var1, var2) with {0,1} coefficients as a single conjunction."""
    c = [np.inf, np.inf, np.inf]
    for con in constraints:
        a, b = con.coef(var1), con.coef(var2)
        if con.variables() - {var1, var2}:
            raise ValueError(f"constraint {con} is not over ({var1}, {var2})")
        rhs = con.rhs.evaluate(values)
        if a <= 0 and b <= 0:
            if rhs < -tol and (a, b) == (0, 0):
                raise InfeasibleRegionError(f"{con} evaluates to {rhs:.3g} < 0")
            if rhs < -tol:
                raise InfeasibleRegionError(f"{con} excludes every nonnegative point")
            continue
        if a not in (0, 1) or b not in (0, 1):
            raise ValueError(f"constraint {con} does not have 0/1 coefficients")
        if rhs < -tol:
            raise InfeasibleRegionError(f"{con} evaluates to {rhs:.3g} < 0")
        k = {(1, 0): 0, (0, 1): 1, (1, 1): 2}[(a, b)]
        c[k] = min(c[k], max(rhs, 0.0))
    if not np.isfinite(c[0]) and np.isfinite(c[2]):
        c[0] = c[2]
    if not np.isfinite(c[1]) and np.isfinite(c[2]):
        c[1] = c[2]
    return RateRegion2.from_bounds([c], label=label)


def fm_project(constraints, sums=None, values=None, label: str = "") -> RateRegion2:
    """Project split-rate constraints to an (R1, R2) region.

    ``sums`` defaults to grouping variables by prefix ``R1*`` and ``R2*``.
    ``values`` assigns numbers to symbolic right-hand sides.
    """
    constraints = list(constraints)
    if sums is None:
        names = sorted({v for c in constraints for v in c.variables()})
        sums = {"R1": [v for v in names if v.startswith("R1")],
                "R2": [v for v in names if v.startswith("R2")]}
    return to_region(fm_symbolic(constraints, sums), values, label=label)
