"""Rate regions as finite unions of {0,1}-coefficient polygons.

Every conjunction is ``{R >= 0 : R1 <= c1, R2 <= c2, R1 + R2 <= c3}`` (missing
constraints are +inf), so unions, intersections, membership and the exact
upper envelope reduce to array operations on the three bounds.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

CONTAIN_TOL = 1e-9


class EmptyRegionError(ValueError):
    """A constraint excludes the origin, so the region is empty."""


@dataclass(frozen=True)
class HalfPlane:
    """``a*R1 + b*R2 <= c`` with ``a, b`` in {0, 1}."""

    a: int
    b: int
    c: float
    label: str = ""

    def __post_init__(self):
        if self.a not in (0, 1) or self.b not in (0, 1) or (self.a, self.b) == (0, 0):
            raise ValueError(f"coefficients must be in {{0,1}} and not both zero, got ({self.a}, {self.b})")
        if self.c < -CONTAIN_TOL:
            raise EmptyRegionError(f"{self.label or 'constraint'} has negative bound {self.c}")


def _bounds_of(halfplanes) -> tuple:
    c = [np.inf, np.inf, np.inf]
    for h in halfplanes:
        k = {(1, 0): 0, (0, 1): 1, (1, 1): 2}[(h.a, h.b)]
        c[k] = min(c[k], max(h.c, 0.0))
    return tuple(c)


class RateRegion2:
    """Union of polygons ``R1 <= c1, R2 <= c2, R1 + R2 <= c3`` in the nonnegative quadrant."""

    def __init__(self, conjunctions=(), labels=None, label: str = ""):
        bounds = [_bounds_of(c) for c in conjunctions]
        self._init(np.array(bounds, dtype=float).reshape(-1, 3), labels, label)

    def _init(self, bounds: np.ndarray, labels, label: str):
        bounds = np.asarray(bounds, dtype=float).reshape(-1, 3)
        if np.any(bounds < -CONTAIN_TOL):
            raise EmptyRegionError("negative rate bound")
        bounds = np.maximum(bounds, 0.0)
        # tighten the individual bounds by the sum bound
        bounds[:, 0] = np.minimum(bounds[:, 0], bounds[:, 2])
        bounds[:, 1] = np.minimum(bounds[:, 1], bounds[:, 2])
        if np.any(~np.isfinite(bounds[:, :2])):
            raise ValueError("every conjunction must bound both rates")
        self.bounds = bounds
        self.bounds.setflags(write=False)
        n = bounds.shape[0]
        self.labels = tuple(labels) if labels is not None else (label,) * n
        if len(self.labels) != n:
            raise ValueError("one label per conjunction")
        self.label = label

    @classmethod
    def from_bounds(cls, bounds, labels=None, label: str = "") -> "RateRegion2":
        obj = cls.__new__(cls)
        obj._init(bounds, labels, label)
        return obj

    @classmethod
    def rectangle(cls, r1: float, r2: float, label: str = "") -> "RateRegion2":
        return cls.from_bounds([[r1, r2, np.inf]], label=label)

    @classmethod
    def pentagon(cls, r1: float, r2: float, rsum: float, label: str = "") -> "RateRegion2":
        return cls.from_bounds([[r1, r2, rsum]], label=label)

    @classmethod
    def empty(cls, label: str = "") -> "RateRegion2":
        return cls.from_bounds(np.zeros((0, 3)), label=label)

    def __len__(self) -> int:
        return self.bounds.shape[0]

    def __repr__(self) -> str:
        return f"RateRegion2({len(self)} conjunctions, label={self.label!r})"

    @property
    def conjunctions(self) -> list:
        out = []
        for (c1, c2, c3), lab in zip(self.bounds, self.labels):
            hp = [HalfPlane(1, 0, c1, lab), HalfPlane(0, 1, c2, lab)]
            if np.isfinite(c3):
                hp.append(HalfPlane(1, 1, c3, lab))
            out.append(tuple(hp))
        return out

    # -- set algebra -------------------------------------------------------

    def union(self, *others: "RateRegion2", label: str | None = None) -> "RateRegion2":
        regions = (self,) + others
        bounds = np.concatenate([r.bounds for r in regions], axis=0)
        labels = [lab for r in regions for lab in r.labels]
        return RateRegion2.from_bounds(bounds, labels, self.label if label is None else label)

    def intersect(self, other: "RateRegion2", label: str | None = None) -> "RateRegion2":
        a, b = self.bounds, other.bounds
        bounds = np.minimum(a[:, None, :], b[None, :, :]).reshape(-1, 3)
        labels = [f"{la}&{lb}" if la and lb else la or lb for la in self.labels for lb in other.labels]
        lab = f"{self.label}&{other.label}" if label is None else label
        return RateRegion2.from_bounds(bounds, labels, lab).pruned()

    def scaled(self, f1: float = 1.0, f2: float = 1.0) -> "RateRegion2":
        """Scale the R1 and R2 axes (rectangles only when the factors differ)."""
        b = self.bounds.copy()
        if f1 != f2 and np.any(np.isfinite(b[:, 2]) & (b[:, 2] < b[:, 0] + b[:, 1])):
            raise ValueError("unequal axis scaling of a sum constraint is not a {0,1} region")
        b[:, 0] *= f1
        b[:, 1] *= f2
        b[:, 2] = np.where(np.isfinite(b[:, 2]), b[:, 2] * max(f1, f2), np.inf)
        return RateRegion2.from_bounds(b, self.labels, self.label)

    def pruned(self) -> "RateRegion2":
        """Drop conjunctions contained in another one (keeps the first of equals)."""
        b = self.bounds
        n = len(b)
        if n <= 1:
            return self
        order = np.lexsort((-b[:, 2], -b[:, 1], -b[:, 0]))
        b_sorted = b[order]
        keep = np.ones(n, dtype=bool)
        step = 512
        for s in range(0, n, step):
            blk = b_sorted[s:s + step]
            dom = np.all(b_sorted[None, :, :] >= blk[:, None, :] - 1e-15, axis=2)
            idx = np.arange(s, s + blk.shape[0])
            strict = np.any(b_sorted[None, :, :] > blk[:, None, :] + 1e-15, axis=2)
            earlier = np.arange(n)[None, :] < idx[:, None]
            covered = dom & (strict | earlier)
            covered[np.arange(blk.shape[0]), idx] = False
            keep[s:s + step] = ~covered.any(axis=1)
        sel = np.sort(order[keep])
        return RateRegion2.from_bounds(b[sel], [self.labels[i] for i in sel], self.label)

    # -- queries -----------------------------------------------------------

    def contains(self, r1, r2, tol: float = CONTAIN_TOL):
        r1 = np.asarray(r1, dtype=float)
        r2 = np.asarray(r2, dtype=float)
        shape = np.broadcast(r1, r2).shape
        p1 = np.broadcast_to(r1, shape).ravel()[:, None]
        p2 = np.broadcast_to(r2, shape).ravel()[:, None]
        out = np.zeros(p1.shape[0], dtype=bool)
        if len(self):
            c1, c2, c3 = (self.bounds[:, k][None, :] for k in range(3))
            step = max(1, 2_000_000 // len(self))
            for s in range(0, p1.shape[0], step):
                a, b = p1[s:s + step], p2[s:s + step]
                ok = (a >= -tol) & (b >= -tol) & (a <= c1 + tol) & (b <= c2 + tol) & (a + b <= c3 + tol)
                out[s:s + step] = ok.any(axis=1)
        return out.reshape(shape)

    def _pieces(self, r1: np.ndarray, strict: bool):
        c1, c2, c3 = (self.bounds[:, k][None, :] for k in range(3))
        r = r1[:, None]
        val = np.minimum(c2, c3 - r)
        active = (r < c1) if strict else (r <= c1)
        return np.where(active & (r >= 0), val, -np.inf)

    def envelope(self, r1, right: bool = False) -> np.ndarray:
        """Largest R2 in the region at each R1 (``-inf`` outside the R1 range).

        With ``right=True`` the limit from the right is returned, which differs
        from the value at a vertical drop of the boundary.
        """
        r1 = np.atleast_1d(np.asarray(r1, dtype=float))
        if not len(self):
            return np.full(r1.shape, -np.inf)
        out = np.empty(r1.shape)
        step = max(1, 2_000_000 // len(self))
        for s in range(0, r1.size, step):
            out[s:s + step] = self._pieces(r1[s:s + step], right).max(axis=1)
        return out

    def argmax_label(self, r1) -> list:
        r1 = np.atleast_1d(np.asarray(r1, dtype=float))
        idx = self._pieces(r1, False).argmax(axis=1)
        return [self.labels[i] for i in idx]

    def breakpoints(self) -> np.ndarray:
        """Every R1 where the envelope changes slope or drops, computed exactly."""
        if not len(self):
            return np.zeros(0)
        c1, c2, c3 = self.bounds.T
        kinks = c3 - c2
        cand = np.concatenate([[0.0], c1, kinks[np.isfinite(kinks) & (kinks > 0) & (kinks < c1)]])
        cand = np.unique(cand)
        extra = []
        for p, q in zip(cand[:-1], cand[1:]):
            mid = 0.5 * (p + q)
            live = c1 >= q
            if not live.any():
                continue
            flat = live & (kinks > mid)
            slope = live & (kinks <= mid)
            if flat.any() and slope.any():
                cross = c3[slope].max() - c2[flat].max()
                if p < cross < q:
                    extra.append(cross)
        return np.unique(np.concatenate([cand, extra]))

    def boundary(self, resolution: int | None = None):
        """Upper-boundary polyline ``(r1, r2, labels)`` from (0, max R2) down to (max R1, 0).

        Contains every analytic breakpoint, plus ``resolution`` evenly spaced
        R1 samples when given. R2 is nonincreasing along the polyline.
        """
        if not len(self):
            return np.zeros(0), np.zeros(0), []
        pts = self.breakpoints()
        if resolution:
            pts = np.unique(np.concatenate([pts, np.linspace(0.0, self.max_r1(), resolution)]))
        left = self.envelope(pts)
        right = self.envelope(pts, right=True)
        left_lab = self.argmax_label(pts)
        right_lab = [self.labels[i] for i in self._pieces(pts, True).argmax(axis=1)]
        xs, ys, labs = [], [], []
        for k, (x, lv, rv) in enumerate(zip(pts, left, right)):
            xs.append(x)
            ys.append(lv)
            labs.append(left_lab[k])
            if rv < lv - 1e-15:
                xs.append(x)
                ys.append(max(rv, 0.0))
                labs.append(right_lab[k] if np.isfinite(rv) else left_lab[k])
        return np.array(xs), np.array(ys), labs

    def vertices(self) -> np.ndarray:
        """All corner points of the individual polygons."""
        c1, c2, c3 = self.bounds.T
        top = np.minimum(c2, c3 - c1)
        knee = np.maximum(c3 - c2, 0.0)
        knee = np.where(np.isfinite(knee), np.minimum(knee, c1), 0.0)
        pts = np.concatenate([
            np.stack([np.zeros_like(c1), np.zeros_like(c1)], 1),
            np.stack([c1, np.zeros_like(c1)], 1),
            np.stack([c1, top], 1),
            np.stack([knee, c2], 1),
            np.stack([np.zeros_like(c1), c2], 1),
        ])
        return np.unique(pts, axis=0)

    def max_r1(self) -> float:
        return float(self.bounds[:, 0].max()) if len(self) else 0.0

    def max_r2(self) -> float:
        return float(self.bounds[:, 1].max()) if len(self) else 0.0

    def max_r1_at(self, r2: float, tol: float = 0.0) -> float:
        """Largest R1 with (R1, r2) in the region (``-inf`` if none)."""
        c1, c2, c3 = self.bounds.T
        ok = c2 >= r2 - tol
        if not ok.any():
            return -np.inf
        return float(np.minimum(c1, c3 - r2)[ok].max())

    def symmetric_rate(self) -> float:
        """Largest R with (R, R) in the region."""
        if not len(self):
            return 0.0
        c1, c2, c3 = self.bounds.T
        return float(np.minimum(np.minimum(c1, c2), c3 / 2.0).max())

    def covers(self, other: "RateRegion2", tol: float = CONTAIN_TOL, grid: int = 200) -> bool:
        """``other`` is inside ``self``: vertex check plus a grid of samples of ``other``."""
        if not len(other):
            return True
        v = other.vertices()
        if not self.contains(v[:, 0], v[:, 1], tol).all():
            return False
        hi1, hi2 = max(self.max_r1(), other.max_r1()), max(self.max_r2(), other.max_r2())
        g1, g2 = np.meshgrid(np.linspace(0, hi1, grid), np.linspace(0, hi2, grid), indexing="ij")
        inside = other.contains(g1, g2, 0.0)
        return bool(self.contains(g1[inside], g2[inside], tol).all())

    # -- export ------------------------------------------------------------

    def to_csv(self, resolution: int | None = None) -> str:
        r1, r2, labels = self.boundary(resolution)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["R1_bits", "R2_bits", "source_label"])
        for a, b, lab in zip(r1, r2, labels):
            w.writerow([f"{a:.12g}", f"{b:.12g}", lab])
        return buf.getvalue()

    def constraints_json(self) -> list:
        out = []
        for conj in self.conjunctions:
            out.append([{"coeffs": [h.a, h.b], "rhs": h.c, "label": h.label} for h in conj])
        return out

    def dumps(self) -> str:
        return json.dumps({"label": self.label, "conjunctions": self.constraints_json()}, indent=1)


class RateRegion4:
    """Linear constraints over ``(R10, R11, R20, R22)`` with {0,1} coefficients."""

    VARS = ("R10", "R11", "R20", "R22")

    def __init__(self, constraints, label: str = ""):
        rows = []
        for coeffs, rhs, *lab in constraints:
            coeffs = tuple(int(c) for c in coeffs)
            if len(coeffs) != 4 or any(c not in (0, 1) for c in coeffs) or not any(coeffs):
                raise ValueError(f"invalid coefficient vector {coeffs}")
            if rhs < -CONTAIN_TOL:
                raise EmptyRegionError(f"negative bound {rhs}")
            rows.append((coeffs, max(float(rhs), 0.0), lab[0] if lab else ""))
        self.constraints = tuple(rows)
        self.label = label

    def __repr__(self) -> str:
        return f"RateRegion4({len(self.constraints)} constraints, label={self.label!r})"

    def matrix(self):
        a = np.array([c for c, _, _ in self.constraints], dtype=float).reshape(-1, 4)
        b = np.array([r for _, r, _ in self.constraints], dtype=float)
        return a, b

    def contains(self, point, tol: float = CONTAIN_TOL) -> bool:
        p = np.asarray(point, dtype=float)
        a, b = self.matrix()
        return bool(np.all(p >= -tol) and np.all(a @ p <= b + tol))

    def box(self) -> np.ndarray:
        """Per-rate upper bounds from the single-variable constraints."""
        ub = np.full(4, np.inf)
        for coeffs, rhs, _ in self.constraints:
            if sum(coeffs) == 1:
                k = coeffs.index(1)
                ub[k] = min(ub[k], rhs)
        return ub

    def intersect(self, other: "RateRegion4") -> "RateRegion4":
        return RateRegion4(self.constraints + other.constraints, f"{self.label}&{other.label}")
