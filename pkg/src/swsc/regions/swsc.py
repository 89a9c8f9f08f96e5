"""Sliding-window superposition coding regions from decoding orders.

Each receiver's decoding order induces a layer order; a stream's rate is
bounded by the sum over its layers of ``I(Z; Y_k | layers earlier in the
order)``. Streams decoded at both receivers take the smaller bound.
"""

from __future__ import annotations

import numpy as np

from ..mi import mi
from ..splits import LayerSplit, compose_three_layer, trivial_sender
from .geometry import RateRegion2
from .orders import (DecodingOrder, InfeasibleOrderError, LayerOrder, Stream, THREE_ONE_ORDERS,
                     parse_orders)


def streams_for_split(split: LayerSplit, names=("m1", "m2")) -> dict:
    """One stream per sender, carried by its layers in reverse index order."""
    return {n: Stream(n, tuple(reversed(s.layer_names)), s.name) for n, s in zip(names, split.senders)}


def layer_order_terms(order: LayerOrder, streams: dict) -> dict:
    """``stream -> [(layer, conditioning layers), ...]`` for each stream in the order."""
    owner = {z: s.name for s in streams.values() for z in s.layers}
    out = {}
    for i, z in enumerate(order.layers):
        out.setdefault(owner[z], []).append((z, order.layers[:i]))
    return out


def layer_order_rates(channel, split: LayerSplit, order: LayerOrder, receiver: int, streams: dict) -> dict:
    """Per-stream rate bounds at ``receiver`` for a layer order."""
    return {s: sum(mi(channel, split, z, cond, receiver) for z, cond in terms)
            for s, terms in layer_order_terms(order, streams).items()}


def receiver_bounds(channel, split: LayerSplit, order: DecodingOrder, streams: dict) -> dict:
    return layer_order_rates(channel, split, order.layer_order(streams), order.receiver, streams)


def swsc_bounds(channel, split: LayerSplit, d1: DecodingOrder, d2: DecodingOrder, streams=None) -> dict:
    """Per-stream bounds, the minimum over the receivers that decode each stream."""
    streams = streams or streams_for_split(split)
    own = list(streams)
    for d, want in ((d1, own[0]), (d2, own[1])):
        if want not in d.streams:
            raise InfeasibleOrderError(f"receiver {d.receiver} does not decode its own stream {want}")
    bounds = {}
    for d in (d1, d2):
        for s, r in receiver_bounds(channel, split, d, streams).items():
            bounds[s] = min(bounds.get(s, np.inf), r)
    return bounds


def region_swsc(channel, split: LayerSplit, d1: DecodingOrder, d2: DecodingOrder, streams=None,
                blocks: int | None = None, label: str | None = None) -> RateRegion2:
    """Rectangle of one SWSC scheme.

    With ``blocks`` set, each rate is discounted by the block-edge loss
    ``(b - K + 1) / b`` of a stream spread over K blocks.
    """
    streams = streams or streams_for_split(split)
    b = swsc_bounds(channel, split, d1, d2, streams)
    m1, m2 = list(streams)
    r1, r2 = b[m1], b[m2]
    if blocks is not None:
        r1 *= (blocks - len(streams[m1]) + 1) / blocks
        r2 *= (blocks - len(streams[m2]) + 1) / blocks
    lab = label if label is not None else f"d1={d1};d2={d2}"
    return RateRegion2.rectangle(max(r1, 0.0), max(r2, 0.0), lab)


def three_one_split(p_x, p_w, alpha_prime: float, alpha_dblprime: float) -> LayerSplit:
    return LayerSplit([compose_three_layer(p_x, alpha_prime, alpha_dblprime, "X"), trivial_sender(p_w, "W")],
                      {"alpha_prime": alpha_prime, "alpha_dblprime": alpha_dblprime})


FAMILIES = {"prop2": (15, 16), "thm2": (15, 16, 17, 18, 19)}


def swsc_union_bounds(channel, p_x=None, p_w=None, order_family: str = "thm2", grid: int = 21):
    """``(bounds (N, 3), labels)`` of every swept 3-1 scheme."""
    if grid < 5:
        raise ValueError("grid must have at least 5 points")
    if order_family not in FAMILIES:
        raise ValueError(f"order_family must be one of {sorted(FAMILIES)}")
    p_x = channel.input_pmfs[0] if p_x is None else p_x
    p_w = channel.input_pmfs[1] if p_w is None else p_w
    orders = {f: parse_orders(THREE_ONE_ORDERS[f]) for f in FAMILIES[order_family]}
    alphas = np.linspace(0.0, 1.0, grid)
    rows, labels = [], []
    for a1 in alphas:
        for a2 in alphas:
            split = three_one_split(p_x, p_w, a1, a2)
            streams = streams_for_split(split)
            for f, (d1, d2) in orders.items():
                b = swsc_bounds(channel, split, d1, d2, streams)
                rows.append((b["m1"], b["m2"], np.inf))
                labels.append(f"({f}) a'={a1:.4g} a''={a2:.4g}")
    return np.array(rows), labels


def region_swsc_union(channel, p_x=None, p_w=None, order_family: str = "thm2", grid: int = 21) -> RateRegion2:
    """Union of 3-1 SWSC rectangles over an (a', a'') grid and an order family.

    ``prop2`` uses the two orders that cover the pentagon intersection,
    ``thm2`` adds the three orders for the remaining SND components.
    """
    rows, labels = swsc_union_bounds(channel, p_x, p_w, order_family, grid)
    return RateRegion2.from_bounds(np.maximum(rows, 0.0), labels, f"SWSC-{order_family}").pruned()


def region_swsc_alternating(channel, split: LayerSplit) -> RateRegion2:
    """Union over all pairs of alternating-order decoding orders of a K-L split, plus own-stream-only orders."""
    from .orders import alternating_decoding_orders

    streams = streams_for_split(split)
    k, l = (len(s) for s in streams.values())
    cands = {}
    for rx in (1, 2):
        own = "m1" if rx == 1 else "m2"
        ds = alternating_decoding_orders(k, l, rx)
        ds.append(DecodingOrder(rx, ((own, streams[own].max_lag),)))
        cands[rx] = ds
    per_rx = {rx: [(d, receiver_bounds(channel, split, d, streams)) for d in ds] for rx, ds in cands.items()}
    rows, labels = [], []
    for d1, b1 in per_rx[1]:
        for d2, b2 in per_rx[2]:
            r1 = min(b1["m1"], b2.get("m1", np.inf))
            r2 = min(b2["m2"], b1.get("m2", np.inf))
            rows.append((max(r1, 0.0), max(r2, 0.0), np.inf))
            labels.append(f"d1={d1};d2={d2}")
    return RateRegion2.from_bounds(np.array(rows), labels, "SWSC").pruned()
