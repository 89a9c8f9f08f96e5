"""Message streams, block-lagged decoding orders and the layer orders they induce.

A stream is a message sequence whose index-``i`` message occupies
``layers[k]`` in block ``i + k``. A decoding step ``(stream, lag)`` recovers
the message with index ``j + lag`` at the end of block ``j``; it can only run
once every block carrying that message has been received, so ``lag <=
-(len(layers) - 1)``.

Looking at a single block ``j0`` in steady state, the steps reveal its layers
one at a time. That sequence is the layer order, and it fixes which layers
each mutual-information term conditions on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations, product

from ..splits import default_layer_names


class InfeasibleOrderError(ValueError):
    """A decoding step needs blocks that have not been received yet."""


class OrderSyntaxError(ValueError):
    """Malformed order text."""


@dataclass(frozen=True)
class Stream:
    name: str
    layers: tuple
    sender: str = ""

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ValueError(f"stream {self.name} has no layers")

    def __len__(self) -> int:
        return len(self.layers)

    @property
    def max_lag(self) -> int:
        return -(len(self.layers) - 1)


def split_streams(k: int, l: int, x: str = "X", w: str = "W") -> dict:
    """The two SWSC streams of a K-L split: ``m1`` on X_K..X_1, ``m2`` on W_L..W_1."""
    xs = default_layer_names(x, k)
    ws = default_layer_names(w, l)
    return {"m1": Stream("m1", tuple(reversed(xs)), x), "m2": Stream("m2", tuple(reversed(ws)), w)}


def single_block_streams(split, names=None) -> dict:
    """One single-layer stream per layer (rate splitting within a block)."""
    names = names or {z: f"m_{z}" for z in split.layer_names}
    return {names[z]: Stream(names[z], (z,), split.layer_sender[z]) for z in split.layer_names}


@dataclass(frozen=True)
class LayerOrder:
    """Sequence in which the layers of one block become known at a receiver."""

    layers: tuple
    senders: tuple

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "senders", tuple(self.senders))
        if len(set(self.layers)) != len(self.layers):
            raise ValueError(f"repeated layer in {self.layers}")
        if len(self.senders) != len(self.layers):
            raise ValueError("one sender per layer")

    def __str__(self) -> str:
        return "->".join(self.layers)

    def __len__(self) -> int:
        return len(self.layers)

    def before(self, layer: str) -> tuple:
        return self.layers[: self.layers.index(layer)]

    def sender_sequence(self) -> str:
        return "".join(s[0] for s in self.senders)

    def preserves(self, per_sender: dict) -> bool:
        """Each sender's layers appear in their given relative order."""
        for seq in per_sender.values():
            pos = [self.layers.index(z) for z in seq if z in self.layers]
            if pos != sorted(pos):
                return False
        return True

    @property
    def alternating(self) -> bool:
        return self.sender_sequence() in _alternating_patterns(self.senders)


def _alternating_patterns(senders) -> set:
    groups = list(dict.fromkeys(senders))
    if len(groups) != 2:
        return set()
    a, b = groups
    k, l = senders.count(a), senders.count(b)
    return {"".join(g[0] for g in p) for p in alternating_patterns(k, l, a, b)}


def alternating_patterns(k: int, l: int, x: str = "X", w: str = "W") -> list:
    """Sender sequences of the K+L alternating layer orders.

    An X-prefix of length a = K..1 followed by strict alternation starting
    with W, then a W-prefix of length a = 1..L followed by alternation
    starting with X. Whatever remains after one sender runs out is appended.
    """
    out = []

    def run(first, n_first, second, n_second, a):
        seq = [first] * a
        left = {first: n_first - a, second: n_second}
        turn = second
        while left[first] or left[second]:
            if not left[turn]:
                turn = first if turn == second else second
            seq.append(turn)
            left[turn] -= 1
            turn = first if turn == second else second
        return tuple(seq)

    for a in range(k, 0, -1):
        out.append(run(x, k, w, l, a))
    for a in range(1, l + 1):
        out.append(run(w, l, x, k, a))
    return out


def alternating_layer_orders(k: int, l: int, x: str = "X", w: str = "W") -> list:
    xs = default_layer_names(x, k)
    ws = default_layer_names(w, l)
    orders = []
    for pat in alternating_patterns(k, l, x, w):
        it = {x: iter(xs), w: iter(ws)}
        orders.append(LayerOrder(tuple(next(it[g]) for g in pat), pat))
    return orders


@dataclass(frozen=True)
class DecodingOrder:
    """Successive decoding steps ``(stream, lag)`` performed at the end of every block."""

    receiver: int
    steps: tuple

    def __post_init__(self):
        steps = tuple((str(s), int(l)) for s, l in self.steps)
        object.__setattr__(self, "steps", steps)
        names = [s for s, _ in steps]
        if len(set(names)) != len(names):
            raise OrderSyntaxError(f"stream decoded twice in {self}")
        if self.receiver not in (1, 2):
            raise OrderSyntaxError(f"receiver must be 1 or 2, got {self.receiver}")

    def __str__(self) -> str:
        return ">".join(f"{s}@{l}" for s, l in self.steps)

    @property
    def streams(self) -> tuple:
        return tuple(s for s, _ in self.steps)

    def lag(self, stream: str):
        for s, l in self.steps:
            if s == stream:
                return l
        return None

    @classmethod
    def parse(cls, text: str, receiver: int) -> "DecodingOrder":
        text = text.strip()
        if not text:
            return cls(receiver, ())
        steps = []
        for tok in text.split(">"):
            m = re.fullmatch(r"\s*([A-Za-z_][\w'\"]*)\s*(?:@\s*([+-]?\d+))?\s*", tok)
            if not m:
                raise OrderSyntaxError(f"bad decoding step {tok!r} in {text!r}")
            steps.append((m.group(1), int(m.group(2) or 0)))
        return cls(receiver, tuple(steps))

    def check(self, streams: dict) -> None:
        for s, lag in self.steps:
            if s not in streams:
                raise InfeasibleOrderError(f"order {self} references undefined stream {s}")
            if lag > streams[s].max_lag:
                raise InfeasibleOrderError(
                    f"{s}@{lag} at receiver {self.receiver} needs lag <= {streams[s].max_lag}")

    def feasible(self, streams: dict) -> bool:
        try:
            self.check(streams)
        except InfeasibleOrderError:
            return False
        return True

    def layer_order(self, streams: dict) -> LayerOrder:
        """Order in which the layers of one steady-state block become known."""
        self.check(streams)
        keyed = []
        for idx, (s, lag) in enumerate(self.steps):
            st = streams[s]
            for k, z in enumerate(st.layers):
                # layer k of block j0 carries message j0 - k, decoded at block j0 - k - lag
                keyed.append((-k - lag, idx, z, st.sender))
        keyed.sort()
        return LayerOrder(tuple(z for _, _, z, _ in keyed), tuple(g for _, _, _, g in keyed))

    def decode_block(self, stream: str, message: int):
        """Block at whose end ``stream``'s message ``message`` is decoded."""
        return message - self.lag(stream)


def parse_orders(text: str) -> tuple:
    """Parse ``d1=m1@-2>m2@0;d2=m1@-2>m2@-1`` into two decoding orders."""
    found = {}
    for part in filter(None, (p.strip() for p in text.split(";"))):
        m = re.fullmatch(r"d([12])\s*=\s*(.*)", part)
        if not m:
            raise OrderSyntaxError(f"expected d1=... or d2=..., got {part!r}")
        rx = int(m.group(1))
        if rx in found:
            raise OrderSyntaxError(f"d{rx} given twice")
        found[rx] = DecodingOrder.parse(m.group(2), rx)
    if set(found) != {1, 2}:
        raise OrderSyntaxError(f"need both d1 and d2 in {text!r}")
    return found[1], found[2]


def format_orders(d1: DecodingOrder, d2: DecodingOrder) -> str:
    return f"d1={d1};d2={d2}"


def enumerate_orders(streams: dict, receiver: int, required, optional=(), lag_floor: int | None = None):
    """All feasible decoding orders decoding every ``required`` stream and any subset of ``optional``."""
    required, optional = tuple(required), tuple(optional)
    if lag_floor is None:
        lag_floor = -sum(len(s) for s in streams.values())
    out = []
    for mask in product((False, True), repeat=len(optional)):
        chosen = required + tuple(o for o, m in zip(optional, mask) if m)
        for perm in permutations(chosen):
            ranges = [range(streams[s].max_lag, lag_floor - 1, -1) for s in perm]
            for lags in product(*ranges):
                out.append(DecodingOrder(receiver, tuple(zip(perm, lags))))
    return out


def find_decoding_order(target: LayerOrder, streams: dict, receiver: int, lag_floor: int | None = None):
    """A feasible decoding order inducing ``target`` (least negative lags first), or None."""
    wanted = {s.name for s in streams.values() if set(s.layers) & set(target.layers)}
    for order in sorted(enumerate_orders(streams, receiver, sorted(wanted), (), lag_floor),
                        key=lambda o: (-sum(l for _, l in o.steps), str(o))):
        if order.layer_order(streams).layers == target.layers:
            return order
    return None


def alternating_decoding_orders(k: int, l: int, receiver: int) -> list:
    """Feasible decoding orders realizing the K+L alternating layer orders of a K-L split."""
    streams = split_streams(k, l)
    out = []
    for lo in alternating_layer_orders(k, l):
        d = find_decoding_order(lo, streams, receiver)
        if d is None:
            raise InfeasibleOrderError(f"no feasible decoding order realizes {lo}")
        out.append(d)
    return out


# Decoding order pairs for the 3-1 split, keyed by family number.
THREE_ONE_ORDERS = {
    15: "d1=m1@-2>m2@0;d2=m1@-2>m2@-1",
    16: "d1=m1@-2>m2@-1;d2=m1@-2>m2@0",
    17: "d1=m1@-2;d2=m2@0",
    18: "d1=m1@-2>m2@0;d2=m2@0",
    19: "d1=m1@-2;d2=m1@-2>m2@0",
}

TWO_ONE_ORDERS = "d1=m1@-1>m2@0;d2=m1@-1>m2@-1"


def three_one_orders(family: int) -> tuple:
    if family not in THREE_ONE_ORDERS:
        raise KeyError(f"unknown 3-1 order family {family}")
    return parse_orders(THREE_ONE_ORDERS[family])
