"""Single-block rate splitting with successive cancellation, and its gap to SND.

Every layer carries its own message part. A receiver decodes parts one at a
time in its order, so part ``z`` is limited by ``I(z; Y_k | parts decoded
before)`` at each receiver that decodes it. Projecting the part rates onto
``R1 = sum of X parts`` and ``R2 = sum of W parts`` gives the region.

:func:`rs_gap_demo` searches erasure-cascade splits with up to three layers per
sender and every decoding order pair for the largest ``R1`` at the maximal
``R2``, and compares it with the SND corner.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations

import numpy as np

from .._accel import NUMBA_ENABLED, njit
from ..mi import MiQuery, mi
from ..splits import LayerSplit
from .basic import snd_corner
from .fm import Expr, fm_project, fm_symbolic, le
from .geometry import RateRegion2
from .orders import DecodingOrder, InfeasibleOrderError, parse_orders


def _order_parts(order, split: LayerSplit) -> tuple:
    if isinstance(order, DecodingOrder):
        names = order.streams
        if any(l != 0 for _, l in order.steps):
            raise InfeasibleOrderError(f"rate splitting decodes within one block; order {order} has lags")
    else:
        names = tuple(order)
    for n in names:
        if n not in split.layer_sender:
            raise InfeasibleOrderError(f"order references undefined part {n!r}; parts are {split.layer_names}")
    if len(set(names)) != len(names):
        raise InfeasibleOrderError(f"part decoded twice in {names}")
    return names


def rate_splitting_constraints(channel, split: LayerSplit, d1, d2):
    """``(constraints, values, sums)`` of the split-rate system with symbolic right-hand sides.

    Each part gets one constraint per receiver that decodes it, labelled by
    the mutual information it stands for.
    """
    own = {1: split.senders[0], 2: split.senders[1]}
    cons, values = [], {}
    for rx, order in ((1, d1), (2, d2)):
        parts = _order_parts(order, split)
        missing = set(own[rx].layer_names) - set(parts)
        if missing:
            raise InfeasibleOrderError(f"receiver {rx} does not decode its own parts {sorted(missing)}")
        for i, z in enumerate(parts):
            q = MiQuery((z,), parts[:i], rx)
            lab = q.label()
            values[lab] = mi(channel, split, z, parts[:i], rx)
            cons.append(le({f"R_{z}": 1}, Expr.sym(lab), lab))
    sums = {"R1": [f"R_{z}" for z in split.senders[0].layer_names],
            "R2": [f"R_{z}" for z in split.senders[1].layer_names]}
    return cons, values, sums


def region_rate_splitting(channel, split: LayerSplit, d1, d2, label: str | None = None) -> RateRegion2:
    """Region of the (split, d1, d2) rate-splitting scheme, by Fourier-Motzkin projection.

    ``d1``/``d2`` are sequences of layer names or lag-0 :class:`DecodingOrder`
    values whose streams are layer names.
    """
    if isinstance(d1, str) and isinstance(d2, str):
        d1, d2 = DecodingOrder.parse(d1, 1), DecodingOrder.parse(d2, 2)
    cons, values, sums = rate_splitting_constraints(channel, split, d1, d2)
    lab = label if label is not None else f"d1={'>'.join(_order_parts(d1, split))};d2={'>'.join(_order_parts(d2, split))}"
    return fm_project(cons, sums, values, lab)


def rate_splitting_symbolic(channel, split: LayerSplit, d1, d2) -> list:
    cons, _, sums = rate_splitting_constraints(channel, split, d1, d2)
    return fm_symbolic(cons, sums)


def example_system(i11_y1, i2_y1, i12_y1, i11_y2, i12_y2, i2_y2):
    """The two-receiver system of the 2-1 split example with symbols ``a..f``.

    ``a = I(X1;Y1)``, ``b = I(X;Y1|X1,W)``, ``c = I(X1;Y2)``, ``d = I(X;Y2|X1)``,
    ``e = I(W;Y1|X1)``, ``f = I(W;Y2|X)``; returns ``(constraints, values, sums)``.
    """
    values = {"a": i11_y1, "b": i12_y1, "c": i11_y2, "d": i12_y2, "e": i2_y1, "f": i2_y2}
    cons = [le("R11", Expr.sym("a")), le("R2", Expr.sym("e")), le("R12", Expr.sym("b")),
            le("R11", Expr.sym("c")), le("R12", Expr.sym("d")), le("R2", Expr.sym("f"))]
    return cons, values, {"R1": ["R11", "R12"], "R2": ["R2"]}


def example_closed_form(values) -> tuple:
    """``(R1 bound, R2 bound)`` as min over receivers per part, summed."""
    v = values
    return min(v["a"], v["c"]) + min(v["b"], v["d"]), min(v["e"], v["f"])


def example_rhs_sets() -> tuple:
    """The symbolic right-hand sides the projection must produce for R1 and R2."""
    s = Expr.sym
    return ({s("a") + s("b"), s("a") + s("d"), s("c") + s("b"), s("c") + s("d")}, {s("e"), s("f")})


# ---------------------------------------------------------------------------
# gap demonstration over erasure-cascade splits


def cascade_grid(n_layers: int, grid: int) -> np.ndarray:
    """Nonincreasing erasure parameters ``(n, n_layers - 1)`` from a uniform grid on [0, 1]."""
    if n_layers == 1:
        return np.zeros((1, 0))
    pts = np.linspace(0.0, 1.0, grid)
    rows = [c[::-1] for c in combinations_with_replacement(range(grid), n_layers - 1)]
    return pts[np.array(rows)]


def _layer_erasures(alphas: np.ndarray) -> np.ndarray:
    """Per-layer erasure probabilities of a cascade; the last layer is never erased."""
    e = []
    prev = 1.0
    for a in alphas:
        e.append(1.0 if prev == 0.0 else min(1.0, a / prev))
        prev = a
    e.append(0.0)
    return np.array(e)


def cascade_patterns(params: np.ndarray):
    """Posterior structure of cascade splits under every known-layer mask.

    Given a mask of known layers, the input is either revealed (value ``v``
    of the first known unerased layer) or still mixed with weight ``theta``
    on the prior: the posterior is ``theta * p + (1 - theta) * delta_v``.
    Returns ``(prob, theta)`` of shape ``(n, 2**K, K + 1)`` indexed by the
    position of the first known unerased layer (``K`` = none).
    """
    n, k = params.shape[0], params.shape[1] + 1
    prob = np.zeros((n, 2 ** k, k + 1))
    theta = np.ones((n, 2 ** k, k + 1))
    for r in range(n):
        e = _layer_erasures(params[r])
        for mask in range(2 ** k):
            for f in range(k + 1):
                if f < k and not mask >> f & 1:
                    continue
                known_before = [i for i in range(f) if mask >> i & 1]
                unknown_before = [i for i in range(f) if not mask >> i & 1]
                p = np.prod(e[known_before]) * ((1.0 - e[f]) if f < k else 1.0)
                prob[r, mask, f] = p
                theta[r, mask, f] = 1.0 - np.prod(e[unknown_before])
    return prob, theta


def _theta_index(theta: np.ndarray):
    key = np.round(theta, 12)
    uniq, inv = np.unique(key.ravel(), return_inverse=True)
    return uniq, inv.reshape(theta.shape).astype(np.int64)


def expected_entropy_table(channel, rx: int, theta_x: np.ndarray, theta_w: np.ndarray) -> np.ndarray:
    """``T[i, j] = E_{v,u} H(Y_rx | X ~ theta_i p + (1-theta_i) delta_v, W ~ ...)``."""
    p, q = channel.input_pmfs
    mx, mw = p.size, q.size
    rows_x = theta_x[:, None, None] * p[None, None, :] + (1.0 - theta_x)[:, None, None] * np.eye(mx)[None]
    rows_w = theta_w[:, None, None] * q[None, None, :] + (1.0 - theta_w)[:, None, None] * np.eye(mw)[None]
    h = channel.output_entropy(rx, [rows_x.reshape(-1, mx), rows_w.reshape(-1, mw)])
    h = h.reshape(theta_x.size, mx, theta_w.size, mw)
    return np.einsum("ivju,v,u->ij", h, p, q)


def receiver_orders(n_own: int, n_other: int, own_first: bool) -> np.ndarray:
    """Every decoding order over the parts: all own parts plus any subset of the other sender's.

    Parts are numbered X parts first, then W parts. Returns ``(n_orders,
    n_parts)`` with the mask of parts decoded before each part, or -1 if the
    part is not decoded.
    """
    n = n_own + n_other
    own = list(range(n_own)) if own_first else list(range(n_other, n))
    other = list(range(n_own, n)) if own_first else list(range(n_other))
    rows = []
    for r in range(n_other + 1):
        for sub in combinations(other, r):
            for perm in permutations(own + list(sub)):
                row = [-1] * n
                mask = 0
                for z in perm:
                    row[z] = mask
                    mask |= 1 << z
                rows.append(row)
    return np.array(rows, dtype=np.int64)


@njit
def _gap_kernel_numba(px, ix, pw, iw, t1, t2, ord1, ord2, s, t, r2star, tol, best_in):
    nx, nmx, fx = px.shape
    nw, nmw, fw = pw.shape
    n = s + t
    nm = 1 << n
    n1 = ord1.shape[0]
    n2 = ord2.shape[0]
    best = best_in
    arg = np.full(4, -1, dtype=np.int64)
    h1 = np.empty(nm)
    h2 = np.empty(nm)
    b1 = np.empty((n1, n))
    b2 = np.empty((n2, n))
    inf = np.inf
    for x in range(nx):
        for w in range(nw):
            for m in range(nm):
                mx = m & (nmx - 1)
                mw = m >> s
                a1 = 0.0
                a2 = 0.0
                for f in range(fx):
                    pf = px[x, mx, f]
                    if pf == 0.0:
                        continue
                    i = ix[x, mx, f]
                    for g in range(fw):
                        pg = pw[w, mw, g]
                        if pg == 0.0:
                            continue
                        j = iw[w, mw, g]
                        a1 += pf * pg * t1[i, j]
                        a2 += pf * pg * t2[i, j]
                h1[m] = a1
                h2[m] = a2
            for o in range(n1):
                for z in range(n):
                    prev = ord1[o, z]
                    b1[o, z] = inf if prev < 0 else h1[prev] - h1[prev | (1 << z)]
            for o in range(n2):
                for z in range(n):
                    prev = ord2[o, z]
                    b2[o, z] = inf if prev < 0 else h2[prev] - h2[prev | (1 << z)]
            for o2 in range(n2):
                c2 = 0.0
                ub = 0.0
                for z in range(s, n):
                    c2 += b2[o2, z]
                for z in range(s):
                    ub += b2[o2, z]
                if c2 < r2star - tol or ub <= best:
                    continue
                for o1 in range(n1):
                    r2 = 0.0
                    for z in range(s, n):
                        r2 += min(b1[o1, z], b2[o2, z])
                    if r2 < r2star - tol:
                        continue
                    r1 = 0.0
                    for z in range(s):
                        r1 += min(b1[o1, z], b2[o2, z])
                    if r1 > best:
                        best = r1
                        arg[0] = x
                        arg[1] = w
                        arg[2] = o1
                        arg[3] = o2
    return best, arg


def _gap_kernel_numpy(px, ix, pw, iw, t1, t2, ord1, ord2, s, t, r2star, tol, best_in, chunk=64):
    nx, nmx, _ = px.shape
    nw, nmw, _ = pw.shape
    n = s + t
    masks = np.arange(1 << n)
    mx_of, mw_of = masks & (nmx - 1), masks >> s
    best, arg = best_in, np.full(4, -1, dtype=np.int64)
    tables = (t1, t2)
    for x in range(nx):
        # a[k][mx, j] = sum_f px * T_k[ix, j]
        a = [np.einsum("mf,mfj->mj", px[x], tk[ix[x]]) for tk in tables]
        for w0 in range(0, nw, chunk):
            sl = slice(w0, min(nw, w0 + chunk))
            h = []
            for ak in a:
                g = ak[:, iw[sl]]  # (nmx, c, nmw, fw)
                hk = np.einsum("mcug,cug->cmu", g, pw[sl])
                h.append(hk[:, mx_of, mw_of])  # (c, nm)
            bounds = []
            for hk, ordk in zip(h, (ord1, ord2)):
                prev = np.where(ordk < 0, 0, ordk)
                nxt = prev | (1 << np.arange(n))[None, :]
                b = hk[:, prev] - hk[:, nxt]
                bounds.append(np.where(ordk[None] < 0, np.inf, b))
            b1, b2 = bounds  # (c, n_orders, n)
            c2 = b2[:, :, s:].sum(axis=2)
            ub = b2[:, :, :s].sum(axis=2)
            ok2 = (c2 >= r2star - tol) & (ub > best)
            for o2 in np.flatnonzero(ok2.any(axis=0)):
                rows = np.flatnonzero(ok2[:, o2])
                m = np.minimum(b1[rows], b2[rows, o2][:, None, :])
                r2 = m[:, :, s:].sum(axis=2)
                r1 = np.where(r2 >= r2star - tol, m[:, :, :s].sum(axis=2), -np.inf)
                k = np.unravel_index(np.argmax(r1), r1.shape)
                if r1[k] > best:
                    best = float(r1[k])
                    arg[:] = (x, w0 + rows[k[0]], k[1], o2)
    return best, arg


def gap_kernel(*args, use_numba: bool | None = None):
    """Best R1 over all (x-split, w-split, d1, d2) combinations with R2 at its maximum."""
    use = NUMBA_ENABLED if use_numba is None else use_numba
    return _gap_kernel_numba(*args) if use else _gap_kernel_numpy(*args)


@dataclass
class GapReport:
    snd_corner: float
    r2_max: float
    rs_best: float
    gap: float
    best: dict
    per_split: dict = field(default_factory=dict)
    seconds: float = 0.0

    def summary(self) -> str:
        return (f"SND corner R1 = {self.snd_corner:.3f}, best rate-splitting R1 = {self.rs_best:.3f}, "
                f"gap = {self.gap:.3f} bits at R2 = {self.r2_max:.3f}")


def rs_gap_demo(channel, max_layers=(3, 3), grid: int = 41, grids: dict | None = None,
                tol: float = 1e-9, use_numba: bool | None = None, prune: bool = True) -> GapReport:
    """Largest R1 of single-block rate splitting at R2 = I(W;Y2|X) versus the SND corner.

    Sweeps erasure-cascade splits with ``s <= max_layers[0]`` and ``t <=
    max_layers[1]`` layers, every pair of decoding orders, and the parameter
    grid (``grids[(s, t)]`` overrides the point count per layer pair). With
    ``prune`` a layer pair's entry in ``per_split`` is None when nothing in it
    beats the earlier pairs.
    """
    t0 = time.perf_counter()
    grids = dict(grids or {})
    r2star = mi(channel, None, "W", "X", 2)
    corner = snd_corner(channel)
    p, q = channel.input_pmfs
    best, best_info, per = 0.0, {}, {}
    layer_pairs = [(s, t) for s in range(1, max_layers[0] + 1) for t in range(1, max_layers[1] + 1)]
    # cheaper layer pairs first so pruning kicks in early
    layer_pairs.sort(key=lambda st: (st[0] + st[1], st))
    for s, t in layer_pairs:
        g = grids.get((s, t), grid)
        xs, ws = cascade_grid(s, g), cascade_grid(t, g)
        px, thx = cascade_patterns(xs)
        pw, thw = cascade_patterns(ws)
        ux, ix = _theta_index(thx)
        uw, iw = _theta_index(thw)
        t1 = expected_entropy_table(channel, 1, ux, uw)
        t2 = expected_entropy_table(channel, 2, ux, uw)
        ord1 = receiver_orders(s, t, True)
        ord2 = receiver_orders(t, s, False)
        # seeding with the best value so far only skips schemes that cannot beat it
        val, arg = gap_kernel(px, ix, pw, iw, t1, t2, ord1, ord2, s, t, r2star, tol,
                              best if prune else -np.inf, use_numba=use_numba)
        per[(s, t)] = {"grid": g, "best": float(val) if arg[0] >= 0 else None,
                       "splits": xs.shape[0] * ws.shape[0], "order_pairs": ord1.shape[0] * ord2.shape[0]}
        if arg[0] >= 0 and val > best:
            best = float(val)
            best_info = {"s": s, "t": t, "x_alphas": xs[arg[0]].tolist(), "w_alphas": ws[arg[1]].tolist(),
                         "d1": _describe(ord1[arg[2]], s), "d2": _describe(ord2[arg[3]], s)}
    return GapReport(corner, r2star, best, corner - best, best_info, per, time.perf_counter() - t0)


def _describe(row: np.ndarray, s: int) -> str:
    names = [f"X{i + 1}" for i in range(s)] + [f"W{j + 1}" for j in range(len(row) - s)]
    decoded = [(bin(int(m)).count("1"), names[z]) for z, m in enumerate(row) if m >= 0]
    return ">".join(n for _, n in sorted(decoded))
