"""Regions of the classical single-block schemes: IAN, SCD, SD pentagons and SND."""

from __future__ import annotations

import numpy as np

from ..mi import mi
from ..splits import for_channel
from .geometry import RateRegion2

INF = np.inf


def cross(rx1, rx2, label: str = "") -> RateRegion2:
    """Intersect two per-receiver unions given as lists of ``((c1, c2, c3), label)``.

    Individual bounds may be infinite as long as every pairwise intersection
    bounds both rates.
    """
    bounds, labels = [], []
    for b1, l1 in rx1:
        for b2, l2 in rx2:
            bounds.append(np.minimum(b1, b2))
            labels.append(f"{l1}&{l2}")
    return RateRegion2.from_bounds(np.array(bounds).reshape(-1, 3), labels, label).pruned()


def _terms(channel, split):
    split = split or for_channel(channel)
    t = {}
    for k in (1, 2):
        t[f"X;Y{k}"] = mi(channel, split, "X", (), k)
        t[f"W;Y{k}"] = mi(channel, split, "W", (), k)
        t[f"X;Y{k}|W"] = mi(channel, split, "X", "W", k)
        t[f"W;Y{k}|X"] = mi(channel, split, "W", "X", k)
        t[f"XW;Y{k}"] = mi(channel, split, ("X", "W"), (), k)
    return t


def receiver_pieces(channel, split=None) -> dict:
    """Per-receiver building blocks keyed by scheme, each a ``(bounds, label)`` pair."""
    t = _terms(channel, split)
    return {
        "ian1": ((t["X;Y1"], INF, INF), "IAN1"),
        "ian2": ((INF, t["W;Y2"], INF), "IAN2"),
        "scd1": ((t["X;Y1|W"], t["W;Y1"], INF), "SCD1"),
        "scd2": ((t["X;Y2"], t["W;Y2|X"], INF), "SCD2"),
        "sd1": ((t["X;Y1|W"], t["W;Y1|X"], t["XW;Y1"]), "SD1"),
        "sd2": ((t["X;Y2|W"], t["W;Y2|X"], t["XW;Y2"]), "SD2"),
        # the simultaneous-decoding alternative without the interferer's individual bound
        "snd1": ((t["X;Y1|W"], INF, t["XW;Y1"]), "SND1"),
        "snd2": ((INF, t["W;Y2|X"], t["XW;Y2"]), "SND2"),
    }


def region_ian(channel, split=None) -> RateRegion2:
    p = receiver_pieces(channel, split)
    return cross([p["ian1"]], [p["ian2"]], "IAN")


def region_scd(channel, split=None) -> RateRegion2:
    p = receiver_pieces(channel, split)
    return cross([p["scd1"]], [p["scd2"]], "SCD")


def region_mix(channel, split=None) -> RateRegion2:
    """Each receiver picks IAN or SCD."""
    p = receiver_pieces(channel, split)
    return cross([p["ian1"], p["scd1"]], [p["ian2"], p["scd2"]], "IAN/SCD")


def region_sd(channel, receiver: int, split=None) -> RateRegion2:
    p = receiver_pieces(channel, split)
    b, lab = p[f"sd{receiver}"]
    return RateRegion2.from_bounds([b], [lab], lab)


def region_snd(channel, split=None) -> RateRegion2:
    """Simultaneous nonunique decoding region.

    Receiver 1 accepts ``R1 <= I(X;Y1)`` or ``{R1 <= I(X;Y1|W), R1 + R2 <=
    I(X,W;Y1)}``; receiver 2 is symmetric. This equals the union of the IAN
    and SD pieces at each receiver.
    """
    p = receiver_pieces(channel, split)
    return cross([p["ian1"], p["snd1"]], [p["ian2"], p["snd2"]], "SND")


def region_snd_decomposed(channel, split=None) -> RateRegion2:
    """``(IAN1 | SD1) & (IAN2 | SD2)``, built from the pentagons."""
    p = receiver_pieces(channel, split)
    return cross([p["ian1"], p["sd1"]], [p["ian2"], p["sd2"]], "SND")


def snd_corner(channel, split=None) -> float:
    """Largest R1 in the SND region at R2 = I(W;Y2|X)."""
    return region_snd(channel, split).max_r1_at(_terms(channel, split)["W;Y2|X"], 1e-12)
