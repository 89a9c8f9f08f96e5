"""Layer splits: independent layer variables plus a symbol map reproducing an input pmf.

A :class:`SenderSplit` factorizes one sender's input ``x`` into layers
``x_1..x_K`` with a product pmf and a lookup table ``x(x_1..x_K)``. A
:class:`LayerSplit` bundles one sender split per channel input and gives every
layer a global name, so rate formulas can refer to ``"X1"``, ``"W"`` or whole
sender groups such as ``"X"``.

The erasure symbol of an augmented alphabet is always its last index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from itertools import product

import numpy as np

from .channels import SymbolMap, as_pmf

PUSHFORWARD_TOL = 1e-9


class SplitError(ValueError):
    """Invalid split construction or layer reference."""


@dataclass(frozen=True, eq=False)
class SenderSplit:
    """Layers of one sender: ``pmfs[k]`` over layer ``k`` and ``table`` -> input index."""

    name: str
    layer_names: tuple
    pmfs: tuple
    table: np.ndarray
    target: np.ndarray
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        pmfs = tuple(as_pmf(p, f"layer {n} pmf") for n, p in zip(self.layer_names, self.pmfs))
        table = np.asarray(self.table, dtype=np.int64)
        target = as_pmf(self.target, "target pmf")
        if len(pmfs) != len(self.layer_names):
            raise SplitError("one pmf per layer required")
        if table.shape != tuple(p.size for p in pmfs):
            raise SplitError(f"table shape {table.shape} does not match layer alphabets")
        if table.size and (table.min() < 0 or table.max() >= target.size):
            raise SplitError("table entries must index the target alphabet")
        table.setflags(write=False)
        object.__setattr__(self, "pmfs", pmfs)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "layer_names", tuple(self.layer_names))
        object.__setattr__(self, "_posteriors", {})
        gap = np.max(np.abs(self.pushforward() - target))
        if gap > PUSHFORWARD_TOL:
            raise SplitError(f"split of {self.name} does not reproduce its target pmf (gap {gap:.3g})")

    @property
    def n_layers(self) -> int:
        return len(self.pmfs)

    @property
    def alphabet_sizes(self) -> tuple:
        return tuple(p.size for p in self.pmfs)

    def product_pmf(self) -> np.ndarray:
        return reduce(np.multiply.outer, self.pmfs)

    def pushforward(self) -> np.ndarray:
        return np.bincount(self.table.ravel(), weights=self.product_pmf().ravel(), minlength=self.target.size)

    def posterior(self, known: tuple) -> tuple:
        """Distinct conditional input pmfs given the layers in ``known`` (local indices).

        Returns ``(probs, rows)``: ``rows[i]`` is a pmf over the input alphabet
        and ``probs[i]`` the total probability of known-layer values inducing
        it. Merging identical rows is exact and keeps downstream sums small.
        """
        known = tuple(sorted(known))
        hit = self._posteriors.get(known)
        if hit is not None:
            return hit
        joint = self.product_pmf()[..., None] * np.eye(self.target.size)[self.table]
        drop = tuple(k for k in range(self.n_layers) if k not in known)
        if drop:
            joint = joint.sum(axis=drop)
        joint = joint.reshape(-1, self.target.size)
        p = joint.sum(axis=1)
        keep = p > 0
        rows = joint[keep] / p[keep, None]
        _, first, inv = np.unique(np.round(rows, 13), axis=0, return_index=True, return_inverse=True)
        probs = np.bincount(inv.ravel(), weights=p[keep])
        out = (probs, rows[first])
        self._posteriors[known] = out
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "layer_names": list(self.layer_names),
            "layers": [{"pmf": p.tolist()} for p in self.pmfs],
            "map": "table",
            "table": self.table.tolist(),
            "target": self.target.tolist(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SenderSplit":
        if doc.get("map", "table") != "table":
            raise SplitError("only tabulated maps can be loaded")
        pmfs = [layer["pmf"] for layer in doc["layers"]]
        name = doc.get("name", "X")
        names = doc.get("layer_names") or default_layer_names(name, len(pmfs))
        return cls(name, tuple(names), tuple(pmfs), np.array(doc["table"]), np.array(doc["target"]))


def default_layer_names(group: str, k: int) -> tuple:
    return (group,) if k == 1 else tuple(f"{group}{i + 1}" for i in range(k))


class LayerSplit:
    """One :class:`SenderSplit` per channel input, with global layer naming."""

    def __init__(self, senders, info: dict | None = None):
        self.senders = tuple(senders)
        self.info = dict(info or {})
        self.layer_names = tuple(n for s in self.senders for n in s.layer_names)
        if len(set(self.layer_names)) != len(self.layer_names):
            raise SplitError(f"duplicate layer names {self.layer_names}")
        self.layer_sender = {}
        self.layer_index = {}
        for si, s in enumerate(self.senders):
            for li, n in enumerate(s.layer_names):
                self.layer_sender[n] = (si, li)
                self.layer_index[n] = len(self.layer_index)
        self.groups = {s.name: frozenset(s.layer_names) for s in self.senders}
        self._h = {}

    def __repr__(self) -> str:
        parts = ", ".join(f"{s.name}:{'/'.join(s.layer_names)}" for s in self.senders)
        return f"LayerSplit({parts})"

    def sender(self, name: str) -> SenderSplit:
        for s in self.senders:
            if s.name == name:
                return s
        raise SplitError(f"no sender named {name!r}")

    def resolve(self, names) -> frozenset:
        """Expand layer and group names into a set of layer names."""
        if isinstance(names, str):
            names = (names,)
        out = set()
        for n in names:
            if isinstance(n, (int, np.integer)):
                if not 0 <= n < len(self.layer_names):
                    raise SplitError(f"invalid layer index {n}")
                out.add(self.layer_names[n])
            elif n in self.layer_sender:
                out.add(n)
            elif n in self.groups:
                out |= self.groups[n]
            else:
                raise SplitError(f"unknown layer {n!r}; layers are {self.layer_names}")
        return frozenset(out)

    def by_sender(self, layers: frozenset) -> tuple:
        """Local known-index tuples per sender for a set of layer names."""
        local = [[] for _ in self.senders]
        for n in layers:
            si, li = self.layer_sender[n]
            local[si].append(li)
        return tuple(tuple(sorted(x)) for x in local)

    def to_json(self) -> dict:
        return {"senders": [s.to_json() for s in self.senders]}

    @classmethod
    def from_json(cls, doc: dict) -> "LayerSplit":
        return cls([SenderSplit.from_json(d) for d in doc["senders"]])

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ---------------------------------------------------------------------------
# constructors


def trivial_sender(p_x, name: str = "X") -> SenderSplit:
    p_x = as_pmf(p_x)
    return SenderSplit(name, (name,), (p_x,), np.arange(p_x.size), p_x)


def trivial_split(*pmfs, names=("X", "W")) -> LayerSplit:
    """No splitting: one layer per input, named after its sender group."""
    return LayerSplit([trivial_sender(p, n) for p, n in zip(pmfs, names)])


def for_channel(channel, names=None) -> LayerSplit:
    """Trivial split matching a channel's declared input pmfs."""
    names = names or getattr(channel, "input_names", None) or ("X", "W")
    return trivial_split(*channel.input_pmfs, names=names)


def _check_prob(a: float, name: str) -> float:
    a = float(a)
    if not 0.0 <= a <= 1.0:
        raise SplitError(f"{name} must lie in [0, 1], got {a}")
    return a


def _erasure_pmf(p_x: np.ndarray, alpha: float) -> np.ndarray:
    return np.append((1.0 - alpha) * p_x, alpha)


def erasure_split(p_x, alpha: float, name: str = "X") -> SenderSplit:
    """Two layers: X1 is X seen through an erasure channel with erasure probability ``alpha``.

    X1 lives on X plus an erasure symbol, X2 is an independent copy of X, and
    x(x1, x2) = x1 unless x1 is erased, in which case x2.
    """
    p_x = as_pmf(p_x)
    alpha = _check_prob(alpha, "alpha")
    m = p_x.size
    table = np.empty((m + 1, m), dtype=np.int64)
    table[:m, :] = np.arange(m)[:, None]
    table[m, :] = np.arange(m)
    return SenderSplit(name, default_layer_names(name, 2), (_erasure_pmf(p_x, alpha), p_x), table, p_x,
                       {"alpha": alpha})


def cascade_split(p_x, alphas, name: str = "X") -> SenderSplit:
    """``len(alphas) + 1`` layers; the first ``k`` layers reveal X with probability ``1 - alphas[k-1]``.

    ``alphas`` must be nonincreasing. Layer k (k < K) is an erasure symbol that
    is erased with probability ``alphas[k] / alphas[k-1]`` (``alphas[0]`` for
    the first layer), the last layer is an independent copy of X, and the map
    returns the first non-erased layer. Groups of leading layers therefore
    behave exactly as erasure splits with the listed parameters.
    """
    p_x = as_pmf(p_x)
    alphas = [_check_prob(a, "alpha") for a in alphas]
    if any(b > a + 1e-15 for a, b in zip(alphas, alphas[1:])):
        raise SplitError("cascade erasure parameters must be nonincreasing")
    m = p_x.size
    pmfs, prev = [], 1.0
    for a in alphas:
        ratio = 1.0 if prev == 0.0 else min(1.0, a / prev)
        pmfs.append(_erasure_pmf(p_x, ratio))
        prev = a
    pmfs.append(p_x)
    k = len(pmfs)
    table = np.empty(tuple(p.size for p in pmfs), dtype=np.int64)
    for combo in product(*[range(p.size) for p in pmfs]):
        table[combo] = next(v for v in combo if v < m) if any(v < m for v in combo[:-1]) else combo[-1]
    return SenderSplit(name, default_layer_names(name, k), tuple(pmfs), table, p_x, {"alphas": tuple(alphas)})


def compose_three_layer(p_x, alpha_prime: float, alpha_dblprime: float, name: str = "X") -> SenderSplit:
    """Merge two erasure splits of X into one three-layer split.

    X1 alone behaves as the erasure split with parameter ``max(a', a'')`` and
    the pair (X1, X2) as the one with ``min(a', a'')``, which realizes the
    degradation chain between the two erasure observations. ``info["branch"]``
    is ``"forward"`` when a' > a'' (receiver 1 peels X1 alone, receiver 2 the
    pair) and ``"reverse"`` otherwise (roles swapped).
    """
    a1 = _check_prob(alpha_prime, "alpha_prime")
    a2 = _check_prob(alpha_dblprime, "alpha_dblprime")
    split = cascade_split(p_x, (max(a1, a2), min(a1, a2)), name)
    info = {"alpha_prime": a1, "alpha_dblprime": a2, "branch": "forward" if a1 > a2 else "reverse"}
    return SenderSplit(split.name, split.layer_names, split.pmfs, split.table, split.target, info)


def mac3_split(p_a, p_b, alpha: float, beta: float, p_c=None) -> LayerSplit:
    """Erasure splits of A (parameter ``alpha``) and B (``beta``); C stays whole."""
    senders = [erasure_split(p_a, alpha, "A"), erasure_split(p_b, beta, "B")]
    if p_c is not None:
        senders.append(trivial_sender(p_c, "C"))
    return LayerSplit(senders, {"alpha": alpha, "beta": beta})


def hk_split(p_s, p_t, p_u, p_v, alpha_prime: float, alpha_dblprime: float, beta: float, gamma: float) -> LayerSplit:
    """Split for the four auxiliary inputs: S in three cascaded layers, T and V in two, U whole."""
    return LayerSplit(
        [
            compose_three_layer(p_s, alpha_prime, alpha_dblprime, "S"),
            erasure_split(p_t, beta, "T"),
            trivial_sender(p_u, "U"),
            erasure_split(p_v, gamma, "V"),
        ],
        {"alpha_prime": alpha_prime, "alpha_dblprime": alpha_dblprime, "beta": beta, "gamma": gamma},
    )


def map_sender(symbol_map: SymbolMap, name: str = "X", points=None) -> SenderSplit:
    """Uniform layers of a constellation map, indexing the map's distinct output points."""
    pts, index = symbol_map.point_index()
    if points is not None and len(points) != len(pts):
        raise SplitError("map does not match the channel's input alphabet")
    pmfs = tuple(np.full(c.size, 1.0 / c.size) for c in symbol_map.layers)
    target = np.bincount(index.ravel(), minlength=len(pts)) / index.size
    names = default_layer_names(name, symbol_map.n_layers)
    return SenderSplit(name, names, pmfs, index, target, {"map": symbol_map.name})


def map_split(qic) -> LayerSplit:
    """Layer split given by the symbol maps of a quadrature channel."""
    map_x, map_w = qic.maps
    return LayerSplit([map_sender(map_x, "X"), map_sender(map_w, "W")])


def swap_sender(split: LayerSplit, sender: SenderSplit) -> LayerSplit:
    """Replace the sender split carrying the same group name."""
    return LayerSplit([sender if s.name == sender.name else s for s in split.senders], split.info)
