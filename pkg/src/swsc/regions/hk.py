"""Three-user MAC regions and Han-Kobayashi coding through SWSC.

The common message of sender 1 rides a three-layer sliding-window stream on
``S``; sender 2's common message ``U`` and the private parts on ``T`` and
``V`` are single-block. Receiver 1 sees the MAC ``(S, T, U) -> Y1`` and
receiver 2 the MAC ``(S, U, V) -> Y2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..mi import mi
from ..splits import LayerSplit, compose_three_layer, erasure_split, hk_split, mac3_split, trivial_sender
from .fm import Constraint, Expr, fm_symbolic, to_region
from .geometry import RateRegion2, RateRegion4
from .orders import DecodingOrder, LayerOrder, Stream
from .swsc import layer_order_rates

# ---------------------------------------------------------------------------
# three-user MAC

MAC3_SUBSETS = (("A",), ("B",), ("C",), ("A", "B"), ("A", "C"), ("B", "C"), ("A", "B", "C"))
CORNER_ORDERS = ("ABC", "BAC", "BCA", "CBA", "CAB", "ACB")

# layer orders of the split MAC, with A and B split in two
MAC3_LAYER_ORDERS = {
    1: ("A1", "B1", "A2", "C", "B2"),
    2: ("B1", "C", "A1", "B2", "A2"),
    3: ("B1", "A1", "C", "A2", "B2"),
}


@dataclass(frozen=True)
class Mac3Region:
    """``coeffs @ r <= rhs`` for the seven subset constraints, plus the six corner points."""

    coeffs: np.ndarray
    rhs: np.ndarray
    corners: dict

    def contains(self, r, tol: float = 1e-9) -> bool:
        r = np.asarray(r, dtype=float)
        return bool(np.all(r >= -tol) and np.all(self.coeffs @ r <= self.rhs + tol))

    def slack(self, r) -> np.ndarray:
        return self.rhs - self.coeffs @ np.asarray(r, dtype=float)


def region_mac3(channel, pmfs=None, receiver: int = 1) -> Mac3Region:
    """Seven-constraint MAC region of inputs A, B, C and its corner points.

    ``channel`` has three inputs; the corner ``I_XYZ`` decodes in order X, Y, Z.
    """
    pmfs = channel.input_pmfs if pmfs is None else pmfs
    split = LayerSplit([trivial_sender(p, n) for p, n in zip(pmfs, "ABC")])
    coeffs, rhs = [], []
    for sub in MAC3_SUBSETS:
        rest = tuple(n for n in "ABC" if n not in sub)
        coeffs.append([1.0 if n in sub else 0.0 for n in "ABC"])
        rhs.append(mi(channel, split, sub, rest, receiver))
    corners = {}
    for order in CORNER_ORDERS:
        r = {}
        for i, n in enumerate(order):
            r[n] = mi(channel, split, n, tuple(order[:i]), receiver)
        corners[order] = np.array([r["A"], r["B"], r["C"]])
    return Mac3Region(np.array(coeffs), np.array(rhs), corners)


def mac3_streams() -> dict:
    return {z: Stream(z, (z,), z[0]) for z in ("A1", "A2", "B1", "B2", "C")}


def mac3_order_rates(channel, alpha: float, beta: float, lam: int, receiver: int = 1, pmfs=None) -> np.ndarray:
    """Rate bounds ``(r_A, r_B, r_C)`` of layer order ``lam`` with erasure splits of A and B."""
    p_a, p_b, p_c = channel.input_pmfs if pmfs is None else pmfs
    split = mac3_split(p_a, p_b, alpha, beta, p_c)
    order = LayerOrder(MAC3_LAYER_ORDERS[lam], tuple(z[0] for z in MAC3_LAYER_ORDERS[lam]))
    rates = layer_order_rates(channel, split, order, receiver, mac3_streams())
    return np.array([rates["A1"] + rates["A2"], rates["B1"] + rates["B2"], rates["C"]])


def mac3_combination(corners: dict, alpha: float, beta: float, lam: int) -> np.ndarray:
    """Convex combination of corner points reached by layer order ``lam``."""
    a, b = alpha, beta
    c = corners
    if lam == 1:
        return (1 - a) * (1 - b) * c["ABC"] + a * (1 - b) * c["BAC"] + b * c["ACB"]
    if lam == 2:
        return (1 - a) * b * c["CAB"] + a * b * c["CBA"] + (1 - b) * c["BCA"]
    if lam == 3:
        return ((1 - a) * (1 - b) * c["BAC"] + (1 - a) * b * c["ACB"] + a * (1 - b) * c["BCA"]
                + a * b * c["CAB"])
    raise ValueError(f"layer order must be 1, 2 or 3, got {lam}")


# ---------------------------------------------------------------------------
# Han-Kobayashi

HK_STREAMS = {
    "m10": Stream("m10", ("S3", "S2", "S1"), "S"),
    "m20": Stream("m20", ("U",), "U"),
    "m11'": Stream("m11'", ("T1",), "T"),
    "m11''": Stream("m11''", ("T2",), "T"),
    "m22'": Stream("m22'", ("V1",), "V"),
    "m22''": Stream("m22''", ("V2",), "V"),
}

_RX1 = {
    1: "m11'@-1>m10@-2>m20@-2>m11''@-2",
    2: "m11'@0>m20@0>m10@-2>m11''@0",
    3: "m11'@0>m10@-2>m11''@-2>m20@0",
    4: "m11'@-2>m10@-2>m20@-2>m11''@-2",
    5: "m11'@0>m20@0>m10@-2>m11''@-1",
    6: "m11'@0>m10@-2>m11''@-2>m20@-1",
}

HK_ORDERS = {**{k: DecodingOrder.parse(v, 1) for k, v in _RX1.items()},
             **{k + 6: DecodingOrder.parse(v.replace("m11", "m22"), 2) for k, v in _RX1.items()}}

# receiver-1 order groups that pair with receiver-2 groups
HK_PAIRING = (((1, 2, 3), (10, 11, 12)), ((4, 5, 6), (7, 8, 9)))

HK_VARS = RateRegion4.VARS


def hk_layer_order(lam: int) -> LayerOrder:
    if lam not in HK_ORDERS:
        raise ValueError(f"HK order index must be in 1..12, got {lam}")
    return HK_ORDERS[lam].layer_order(HK_STREAMS)


def hk_receiver_rates(channel4, split: LayerSplit, lam: int) -> dict:
    """Bounds on the rates this receiver decodes, keyed by R10/R11/R20/R22."""
    if lam not in HK_ORDERS:
        raise ValueError(f"HK order index must be in 1..12, got {lam}")
    order = HK_ORDERS[lam]
    rx = order.receiver
    r = layer_order_rates(channel4, split, order.layer_order(HK_STREAMS), rx, HK_STREAMS)
    out = {"R10": r["m10"], "R20": r["m20"]}
    if rx == 1:
        out["R11"] = r["m11'"] + r["m11''"]
    else:
        out["R22"] = r["m22'"] + r["m22''"]
    return out


def _hk_pmfs(channel4, pmfs):
    return channel4.input_pmfs if pmfs is None else pmfs


def region_hk(channel4, alpha_prime: float, alpha_dblprime: float, beta: float, gamma: float,
              lam1: int, lam2: int, pmfs=None) -> RateRegion4:
    """``R1(p', lam1) & R2(p', lam2)`` as a box over (R10, R11, R20, R22)."""
    if lam1 not in range(1, 7) or lam2 not in range(7, 13):
        raise ValueError(f"need lam1 in 1..6 and lam2 in 7..12, got {lam1}, {lam2}")
    split = hk_split(*_hk_pmfs(channel4, pmfs), alpha_prime, alpha_dblprime, beta, gamma)
    b1 = hk_receiver_rates(channel4, split, lam1)
    b2 = hk_receiver_rates(channel4, split, lam2)
    cons = []
    for i, v in enumerate(HK_VARS):
        coeffs = [0] * 4
        coeffs[i] = 1
        bound = min(b1.get(v, np.inf), b2.get(v, np.inf))
        cons.append((tuple(coeffs), max(bound, 0.0), v))
    return RateRegion4(cons, f"lam1={lam1},lam2={lam2}")


def region4_constraints(region: RateRegion4) -> list:
    return [Constraint.make({v: c for v, c in zip(HK_VARS, coeffs)}, Expr.const(rhs), lab)
            for coeffs, rhs, lab in region.constraints]


def project_to_2(region: RateRegion4, label: str | None = None) -> RateRegion2:
    """Projection onto ``(R10 + R11, R20 + R22)``.

    Only regions whose projection needs no ``2 R1 + R2``-type bounds (boxes,
    for instance) can be represented.
    """
    cons = fm_symbolic(region4_constraints(region), {"R1": ["R10", "R11"], "R2": ["R20", "R22"]})
    return to_region(cons, label=region.label if label is None else label)


def mac_region4(channel4, pmfs=None) -> RateRegion4:
    """``R1,MAC & R2,MAC``: receiver 1 decodes (S, T, U), receiver 2 decodes (S, U, V)."""
    pmfs = _hk_pmfs(channel4, pmfs)
    split = LayerSplit([trivial_sender(p, n) for p, n in zip(pmfs, "STUV")])
    cons = []
    for rx, names, vars_ in ((1, "STU", ("R10", "R11", "R20")), (2, "SUV", ("R10", "R20", "R22"))):
        var_of = dict(zip(names, vars_))
        for sub in MAC3_SUBSETS:
            members = tuple(names["ABC".index(a)] for a in sub)
            rest = tuple(n for n in names if n not in members)
            coeffs = tuple(1 if v in {var_of[m] for m in members} else 0 for v in HK_VARS)
            cons.append((coeffs, mi(channel4, split, members, rest, rx), f"rx{rx}:{''.join(members)}"))
    return RateRegion4(cons, "MAC1&MAC2")


def polytope_vertices(region: RateRegion4, tol: float = 1e-9) -> np.ndarray:
    """Vertices of ``{r >= 0 : A r <= b}`` by enumerating active sets."""
    a, b = region.matrix()
    a = np.vstack([a, -np.eye(4)])
    b = np.concatenate([b, np.zeros(4)])
    verts = []
    for rows in combinations(range(a.shape[0]), 4):
        sub = a[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, b[list(rows)])
        if np.all(a @ x <= b + tol):
            verts.append(x)
    if not verts:
        return np.zeros((0, 4))
    v = np.unique(np.round(np.array(verts), 12), axis=0)
    return v


@dataclass
class HkCoverage:
    vertices: np.ndarray
    deficits: np.ndarray
    witnesses: list

    @property
    def worst(self) -> float:
        return float(self.deficits.max()) if self.deficits.size else 0.0


def hk_coverage(channel4, grid: int = 41, pmfs=None) -> HkCoverage:
    """Shortfall of the best HK-SWSC box at each vertex of ``R1,MAC & R2,MAC``.

    For each vertex ``v`` the deficit is ``-max min_i (bound_i - v_i)`` over
    the (a', a'', beta, gamma) grid and paired layer orders; a value <= 0
    means the vertex is achieved. Receiver 1's bounds depend on (a', a'',
    beta, lam1) and receiver 2's on (a', a'', gamma, lam2), so the search
    splits into two independent maxima per (a', a'') and order pairing.
    """
    p_s, p_t, p_u, p_v = _hk_pmfs(channel4, pmfs)
    verts = polytope_vertices(mac_region4(channel4, pmfs))
    nv = verts.shape[0]
    pts = np.linspace(0.0, 1.0, grid)
    best = np.full(nv, -np.inf)
    wit = [None] * nv
    t_splits = [erasure_split(p_t, b, "T") for b in pts]
    v_splits = [erasure_split(p_v, g, "V") for g in pts]
    u_sender = trivial_sender(p_u, "U")
    groups = {1: (1, 2, 3, 4, 5, 6), 2: (7, 8, 9, 10, 11, 12)}
    for i, a1 in enumerate(pts):
        # the merged S split only depends on the unordered pair
        for a2 in pts[: i + 1]:
            s_sender = compose_three_layer(p_s, a1, a2, "S")
            # f[rx][lam] = best over the private-split grid of min over that receiver's bounds
            f = {1: {}, 2: {}}
            arg = {1: {}, 2: {}}
            for rx, private in ((1, t_splits), (2, v_splits)):
                for k, priv in enumerate(private):
                    if rx == 1:
                        split = LayerSplit([s_sender, priv, u_sender, v_splits[0]])
                    else:
                        split = LayerSplit([s_sender, t_splits[0], u_sender, priv])
                    for lam in groups[rx]:
                        b = hk_receiver_rates(channel4, split, lam)
                        own = "R11" if rx == 1 else "R22"
                        vals = np.minimum.reduce([b["R10"] - verts[:, 0], b["R20"] - verts[:, 2],
                                                  b[own] - verts[:, 1 if rx == 1 else 3]])
                        cur = f[rx].get(lam)
                        if cur is None:
                            f[rx][lam] = vals
                            arg[rx][lam] = np.zeros(nv, dtype=int)
                        else:
                            better = vals > cur
                            f[rx][lam] = np.where(better, vals, cur)
                            arg[rx][lam] = np.where(better, k, arg[rx][lam])
            for g1, g2 in HK_PAIRING:
                for l1 in g1:
                    for l2 in g2:
                        val = np.minimum(f[1][l1], f[2][l2])
                        better = val > best
                        best = np.where(better, val, best)
                        for n in np.flatnonzero(better):
                            wit[n] = {"alpha_prime": a1, "alpha_dblprime": a2,
                                      "beta": pts[arg[1][l1][n]], "gamma": pts[arg[2][l2][n]],
                                      "lam1": l1, "lam2": l2}
    return HkCoverage(verts, -best, wit)


def region_hk_union(channel4, grid: int = 5, pmfs=None) -> RateRegion2:
    """Union over the split grid and paired layer orders, projected onto (R10 + R11, R20 + R22).

    Each scheme is a box, so its projection is the rectangle of the summed bounds.
    """
    pmfs = _hk_pmfs(channel4, pmfs)
    pts = np.linspace(0.0, 1.0, grid)
    rows, labels = [], []
    for i, a1 in enumerate(pts):
        for a2 in pts[: i + 1]:
            for beta in pts:
                for gamma in pts:
                    split = hk_split(*pmfs, a1, a2, beta, gamma)
                    b = {lam: hk_receiver_rates(channel4, split, lam) for lam in HK_ORDERS}
                    for g1, g2 in HK_PAIRING:
                        for l1 in g1:
                            for l2 in g2:
                                r = {v: max(min(b[l1].get(v, np.inf), b[l2].get(v, np.inf)), 0.0) for v in HK_VARS}
                                rows.append((r["R10"] + r["R11"], r["R20"] + r["R22"], np.inf))
                                labels.append(f"lam1={l1},lam2={l2} a'={a1:.3g} a''={a2:.3g} b={beta:.3g} g={gamma:.3g}")
    return RateRegion2.from_bounds(np.array(rows), labels, "HK-SWSC").pruned()

