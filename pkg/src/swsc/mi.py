"""Conditional mutual informations I(A; Y_k | B) between groups of layer variables.

Every quantity is a difference of conditional output entropies,
``I(A;Y|B) = H(Y|B) - H(Y|A,B)``, where layers outside ``A`` and ``B`` are
marginalized into the channel. ``H(Y|C)`` only needs, per sender, the
distinct conditional input pmfs given the known layers; the channel then
supplies the entropy of each output mixture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .splits import LayerSplit, SplitError, for_channel


@dataclass(frozen=True)
class Tolerances:
    discrete: float = 1e-12
    quadrature: float = 1e-6
    containment: float = 1e-9
    pushforward: float = 1e-9


TOL = Tolerances()


def tolerance_for(channel) -> float:
    return TOL.quadrature if hasattr(channel, "quad_nodes") else TOL.discrete


@dataclass(frozen=True)
class MiQuery:
    """``I(target; Y_receiver | conditioned)``; every other layer is noise."""

    target: tuple
    conditioned: tuple = ()
    receiver: int = 1

    def __post_init__(self):
        for f in ("target", "conditioned"):
            v = getattr(self, f)
            object.__setattr__(self, f, (v,) if isinstance(v, str) else tuple(v))

    def label(self) -> str:
        cond = f"|{','.join(self.conditioned)}" if self.conditioned else ""
        return f"I({','.join(self.target)};Y{self.receiver}{cond})"


def _check(channel, split: LayerSplit):
    sizes = tuple(s.target.size for s in split.senders)
    if sizes != tuple(channel.input_sizes):
        raise SplitError(f"split alphabets {sizes} do not match channel inputs {tuple(channel.input_sizes)}")
    for s, p in zip(split.senders, channel.input_pmfs):
        if np.max(np.abs(s.target - p)) > TOL.pushforward:
            raise SplitError(f"split of {s.name} does not reproduce the channel input pmf")


def conditional_entropy(channel, split: LayerSplit, known, rx: int) -> float:
    """H(Y_rx | known layers) in bits (differential entropy for Gaussian channels)."""
    known = split.resolve(known)
    key = (id(channel), rx, known)
    hit = split._h.get(key)
    if hit is not None:
        return hit[1]
    local = split.by_sender(known)
    posts = [s.posterior(k) for s, k in zip(split.senders, local)]
    table = channel.output_entropy(rx, [rows for _, rows in posts])
    for probs, _ in reversed(posts):
        table = table @ probs
    value = float(table)
    split._h[key] = (channel, value)
    return value


def mutual_info(channel, split: LayerSplit | None, query: MiQuery) -> float:
    """I(A; Y_k | B) in bits under the split's product layer distribution."""
    split = split or for_channel(channel)
    if not 1 <= query.receiver <= channel.n_receivers:
        raise SplitError(f"receiver {query.receiver} out of range")
    a = split.resolve(query.target)
    b = split.resolve(query.conditioned)
    if a & b:
        raise SplitError(f"target and conditioned layers overlap: {sorted(a & b)}")
    if not a:
        return 0.0
    if not split._h:
        _check(channel, split)
    h_b = conditional_entropy(channel, split, b, query.receiver)
    h_ab = conditional_entropy(channel, split, a | b, query.receiver)
    return h_b - h_ab


def mi(channel, split, target, given=(), rx: int = 1) -> float:
    """Shorthand for :func:`mutual_info` with loose arguments."""
    return mutual_info(channel, split, MiQuery(target, given, rx))


def chain_rule_check(channel, split: LayerSplit, order, receiver: int = 1) -> float:
    """|sum of chain terms along ``order`` - I(all of order; Y)| for one sender's layers."""
    layers = tuple(getattr(order, "layers", order))
    total = 0.0
    for i, z in enumerate(layers):
        total += mi(channel, split, z, layers[:i], receiver)
    return abs(total - mi(channel, split, layers, (), receiver))


# ---------------------------------------------------------------------------
# Monte Carlo estimate for vector symbols


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    samples: int


def mutual_info_mc(points, gain: float = 1.0, samples: int = 100_000, seed: int = 0,
                   chunk: int = 50_000) -> McEstimate:
    """I(X;Y) in bits for uniform X over ``points`` and Y = gain*X + N.

    ``points`` is ``(M,)`` or ``(M, t)``; real entries see unit noise variance
    per dimension, complex entries variance 1/2 per real dimension.
    """
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts[:, None]
    is_complex = np.iscomplexobj(pts)
    m, t = pts.shape
    rng = np.random.default_rng(seed)
    mu = gain * pts
    vals = []
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        x = rng.integers(m, size=k)
        if is_complex:
            noise = (rng.standard_normal((k, t)) + 1j * rng.standard_normal((k, t))) / math.sqrt(2.0)
        else:
            noise = rng.standard_normal((k, t))
        y = mu[x] + noise
        d2 = np.sum(np.abs(y[:, None, :] - mu[None, :, :]) ** 2, axis=2)
        logp = -d2 if is_complex else -0.5 * d2
        own = logp[np.arange(k), x]
        mx = logp.max(axis=1, keepdims=True)
        lse = mx[:, 0] + np.log(np.exp(logp - mx).sum(axis=1))
        vals.append((own - lse + math.log(m)) / math.log(2.0))
        done += k
    v = np.concatenate(vals)
    return McEstimate(float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size)), int(v.size))
