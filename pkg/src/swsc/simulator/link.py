"""Link-level SWSC transceiver over a Gaussian interference channel, with an IAN baseline.

Each trial draws its messages from ``default_rng([seed, trial, 0])`` and its
noise from ``default_rng([seed, trial, 1])``, so a report does not depend on
how trials are distributed over workers, and the SWSC and IAN runs of the
same trial see the same messages and the same noise.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from functools import cached_property

import numpy as np

from ..channels import GaussianIC, QuadratureIC, map_by_name
from ..regions.orders import DecodingOrder, InfeasibleOrderError, alternating_decoding_orders, parse_orders
from ..regions.swsc import receiver_bounds
from ..splits import map_split
from .code import ConvCode, MessageCodec
from .demap import SuperpositionModel, gaussian_equivalent
from .schedule import BlockSchedule

POLICIES = ("continue", "abort-stream")
IAN_VARIANTS = ("A", "B")


class ConfigError(ValueError):
    """Invalid simulation settings."""


@dataclass(frozen=True)
class SimConfig:
    n: int = 1024
    b: int = 12
    rates: tuple = (0.5, 0.5)
    maps: tuple = ("4pam_natural", "bpsk")
    orders: str | None = None
    snr_db: float = 8.0
    inr_db: float = 8.0
    generators: tuple = (0o133, 0o171)
    constraint_length: int = 7
    crc_bits: int = 16
    trials: int = 100
    master_seed: int = 0
    policy: str = "continue"

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        if self.n < 128:
            raise ConfigError(f"n must be at least 128, got {self.n}")
        if self.b < 3:
            raise ConfigError(f"b must be at least 3, got {self.b}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if len(self.rates) != 2 or min(self.rates) <= 0:
            raise ConfigError(f"need two positive rates, got {self.rates}")
        if len(self.maps) != 2:
            raise ConfigError("need one symbol map per sender")
        if self.policy not in POLICIES:
            raise ConfigError(f"policy must be one of {POLICIES}")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be nonnegative")

    @classmethod
    def from_dict(cls, doc: dict) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        doc = dict(doc)
        for key in ("generators",):
            if key in doc:
                doc[key] = [int(g, 8) if isinstance(g, str) else g for g in doc[key]]
        return cls(**doc)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rates"] = list(self.rates)
        d["maps"] = list(self.maps)
        d["generators"] = [oct(g)[2:] for g in self.generators]
        return d

    def with_overrides(self, **kw) -> "SimConfig":
        return replace(self, **kw)


@dataclass
class BlerReport:
    scheme: str
    rates: tuple
    effective_rates: tuple
    trials: int
    messages: tuple
    errors: tuple
    crc_failures: tuple
    # errors per message index over all trials, one list per stream
    trace: tuple = field(default_factory=tuple)
    orders: str = ""

    @property
    def bler(self) -> tuple:
        return tuple(e / (self.trials * m) for e, m in zip(self.errors, self.messages))

    def to_dict(self) -> dict:
        return {"scheme": self.scheme, "rates": list(self.rates), "effective_rates": list(self.effective_rates),
                "trials": self.trials, "messages": list(self.messages), "errors": list(self.errors),
                "bler": list(self.bler), "crc_failures": list(self.crc_failures),
                "trace": [list(t) for t in self.trace], "orders": self.orders}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


class Link:
    """Transmitters, channel and receivers for one configuration."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.maps = tuple(map_by_name(m) for m in config.maps)
        self.gic = GaussianIC.from_db(config.snr_db, config.inr_db)
        k, l = (m.n_layers for m in self.maps)
        self.schedule = BlockSchedule.for_split(k, l, config.b)
        self.streams = self.schedule.streams
        self.models = {rx: SuperpositionModel(*self.maps, self.gic.gains(rx)) for rx in (1, 2)}
        # streams list their layers last-to-first; positions follow the map order, sender 1 first
        self.layer_names = tuple(tuple(reversed(s.layers)) for s in self.streams.values())
        self.position = {z: i for i, z in enumerate(self.layer_names[0] + self.layer_names[1])}
        self.complex = self.models[1].complex
        self.code = ConvCode(config.generators, config.constraint_length)
        self.codecs = {}
        for si, (name, st) in enumerate(self.streams.items()):
            coded = sum(config.n * self._layer(z).bits for z in st.layers)
            perm = np.random.default_rng([config.master_seed, si]).permutation(coded)
            try:
                self.codecs[name] = MessageCodec(int(round(config.rates[si] * config.n)), coded, self.code,
                                                 config.crc_bits, perm)
            except ValueError as exc:
                raise ConfigError(f"stream {name}: {exc}") from None
        self.pad_bits = {name: np.zeros(c.info_bits, dtype=np.uint8) for name, c in self.codecs.items()}

    def _layer(self, z: str):
        return self.models[1].layer_constellation(self.position[z])

    @cached_property
    def _inverse_labels(self) -> dict:
        out = {}
        for z in self.position:
            c = self._layer(z)
            inv = np.empty(c.size, dtype=np.int64)
            inv[c.labels] = np.arange(c.size)
            out[z] = inv
        return out

    # -- encoding ----------------------------------------------------------

    def layer_symbols(self, stream: str, info: np.ndarray) -> dict:
        """``layer -> (n,) symbol indices`` of one message's codeword."""
        cw = self.codecs[stream].encode(info)
        out, start = {}, 0
        for z in self.streams[stream].layers:
            q = self._layer(z).bits
            chunk = cw[start:start + self.config.n * q].reshape(self.config.n, q).astype(np.int64)
            start += self.config.n * q
            out[z] = self._inverse_labels[z][(chunk << np.arange(q)).sum(axis=1)]
        return out

    def draw_messages(self, trial: int) -> dict:
        rng = np.random.default_rng([self.config.master_seed, trial, 0])
        return {name: rng.integers(0, 2, (self.config.b, c.info_bits), dtype=np.uint8)
                for name, c in self.codecs.items()}

    def draw_noise(self, trial: int) -> np.ndarray:
        rng = np.random.default_rng([self.config.master_seed, trial, 1])
        shape = (2, self.config.b, self.config.n)
        if self.complex:
            return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(0.5)
        return rng.standard_normal(shape)

    def pad_symbols(self) -> dict:
        return {name: self.layer_symbols(name, self.pad_bits[name]) for name in self.streams}

    def encode_stream(self, messages: dict) -> list:
        """Per-block ``{layer: symbol indices}`` for the whole schedule."""
        pads = self.pad_symbols()
        blocks = [dict() for _ in range(self.config.b)]
        for name, st in self.streams.items():
            coded = {i: self.layer_symbols(name, messages[name][i - 1])
                     for i in range(1, self.schedule.n_messages(name) + 1)}
            for j in range(1, self.config.b + 1):
                for z in st.layers:
                    i = self.schedule.message_at(name, z, j)
                    blocks[j - 1][z] = pads[name][z] if i is None else coded[i][z]
        return blocks

    def transmit(self, block: dict, rx: int) -> np.ndarray:
        x_names, w_names = self.layer_names
        return self.models[rx].transmit(np.array([block[z] for z in x_names]), np.array([block[z] for z in w_names]))

    def receive(self, blocks: list, noise: np.ndarray) -> dict:
        return {rx: [self.transmit(blk, rx) + noise[rx - 1, j] for j, blk in enumerate(blocks)] for rx in (1, 2)}

    # -- decoding ----------------------------------------------------------

    def decode_sliding_window(self, y: list, order: DecodingOrder, truth: dict, models=None) -> dict:
        """Run ``order`` over all blocks at its receiver.

        Returns ``stream -> (error flags, crc flags)`` per message for every
        stream the order decodes.
        """
        model = (models or self.models)[order.receiver]
        order.check(self.streams)
        b = self.config.b
        known = [dict() for _ in range(b)]
        pads = self.pad_symbols()
        for name, st in self.streams.items():
            for z in st.layers:
                for j in range(1, b + 1):
                    if self.schedule.message_at(name, z, j) is None:
                        known[j - 1][self.position[z]] = pads[name][z]
        loglik = [model.log_likelihoods(yj) for yj in y]
        result = {s: (np.zeros(self.schedule.n_messages(s), bool), np.zeros(self.schedule.n_messages(s), bool))
                  for s in order.streams}
        aborted = set()
        horizon = b - min(lag for _, lag in order.steps)
        for j in range(1, horizon + 1):
            for s, lag in order.steps:
                i = j + lag
                if not 1 <= i <= self.schedule.n_messages(s):
                    continue
                errs, crcs = result[s]
                if s in aborted:
                    errs[i - 1] = True
                    continue
                llrs = []
                for blk, z in self.schedule.blocks_of(s, i):
                    llrs.append(model.llr(y[blk - 1], self.position[z], known[blk - 1], loglik[blk - 1]).ravel())
                bits, ok = self.codecs[s].decode(np.concatenate(llrs))
                errs[i - 1] = not np.array_equal(bits, truth[s][i - 1])
                crcs[i - 1] = ok
                if not ok and self.config.policy == "abort-stream":
                    aborted.add(s)
                    continue
                sym = self.layer_symbols(s, bits)
                for blk, z in self.schedule.blocks_of(s, i):
                    known[blk - 1][self.position[z]] = sym[z]
        return result

    def run_trial(self, trial: int, orders: tuple) -> dict:
        messages = self.draw_messages(trial)
        y = self.receive(self.encode_stream(messages), self.draw_noise(trial))
        out = {}
        for d, own in zip(orders, ("m1", "m2")):
            out[own] = self.decode_sliding_window(y[d.receiver], d, messages)[own]
        return out

    # -- IAN baseline ------------------------------------------------------

    def ian_models(self, variant: str) -> dict:
        if variant not in IAN_VARIANTS:
            raise ConfigError(f"IAN variant must be one of {IAN_VARIANTS}")
        if variant == "A":
            return self.models
        return {1: gaussian_equivalent(self.models[1], 1), 2: gaussian_equivalent(self.models[2], 0)}

    def run_ian_trial(self, trial: int, variant: str) -> dict:
        """Every message in its own block on all layers of its sender, decoded treating the other sender as noise."""
        messages = self.draw_messages(trial)
        blocks = [dict() for _ in range(self.config.b)]
        for name in self.streams:
            for j in range(self.config.b):
                blocks[j].update(self.layer_symbols(name, messages[name][j]))
        y = self.receive(blocks, self.draw_noise(trial))
        models = self.ian_models(variant)
        out = {}
        for rx, own in ((1, "m1"), (2, "m2")):
            errs = np.zeros(self.config.b, bool)
            crcs = np.zeros(self.config.b, bool)
            for j in range(self.config.b):
                ll = models[rx].log_likelihoods(y[rx][j])
                llr = [models[rx].llr(y[rx][j], self.position[z], None, ll).ravel()
                       for z in self.streams[own].layers]
                bits, ok = self.codecs[own].decode(np.concatenate(llr))
                errs[j] = not np.array_equal(bits, messages[own][j])
                crcs[j] = ok
            out[own] = (errs, crcs)
        return out


def _resolve_orders(link: Link, orders) -> tuple:
    if orders is None:
        orders = link.config.orders
    if orders is None:
        orders = auto_orders(link.config)
    if isinstance(orders, str):
        orders = parse_orders(orders)
    for d in orders:
        d.check(link.streams)
    for d, own in zip(orders, ("m1", "m2")):
        if own not in d.streams:
            raise InfeasibleOrderError(f"receiver {d.receiver} does not decode its own stream {own}")
    return tuple(orders)


def _trial_worker(args):
    config, trial, kind, extra = args
    link = Link(config)
    if kind == "swsc":
        return link.run_trial(trial, extra)
    return link.run_ian_trial(trial, extra)


def _run(link: Link, kind: str, extra, jobs: int) -> list:
    trials = range(link.config.trials)
    if jobs <= 1:
        fn = (lambda t: link.run_trial(t, extra)) if kind == "swsc" else (lambda t: link.run_ian_trial(t, extra))
        return [fn(t) for t in trials]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_trial_worker, [(link.config, t, kind, extra) for t in trials]))


def _report(scheme: str, config: SimConfig, results: list, effective: tuple, orders: str = "") -> BlerReport:
    errors, crc, trace, msgs = [], [], [], []
    for own in ("m1", "m2"):
        e = np.sum([r[own][0] for r in results], axis=0)
        c = np.sum([~r[own][1] for r in results], axis=0)
        errors.append(int(e.sum()))
        crc.append(int(c.sum()))
        trace.append(tuple(int(v) for v in e))
        msgs.append(len(e))
    return BlerReport(scheme, config.rates, effective, config.trials, tuple(msgs), tuple(errors), tuple(crc),
                      tuple(trace), orders)


def simulate(config: SimConfig, orders=None, jobs: int = 1) -> BlerReport:
    """BLER of the SWSC scheme with sliding-window decoding at both receivers."""
    link = Link(config)
    d = _resolve_orders(link, orders)
    results = _run(link, "swsc", d, jobs)
    eff = tuple(r * link.schedule.n_messages(s) / config.b for r, s in zip(config.rates, ("m1", "m2")))
    return _report("swsc", config, results, eff, f"d1={d[0]};d2={d[1]}")


def run_ian_baseline(config: SimConfig, variant: str = "A", jobs: int = 1) -> BlerReport:
    """BLER of single-block transmission decoded treating interference as noise.

    Variant A marginalizes the interfering constellation; variant B replaces
    it by Gaussian noise of the same power.
    """
    link = Link(config)
    if variant not in IAN_VARIANTS:
        raise ConfigError(f"IAN variant must be one of {IAN_VARIANTS}")
    results = _run(link, "ian", variant, jobs)
    return _report(f"ian-{variant}", config, results, config.rates)


def theoretical_channel(config: SimConfig) -> QuadratureIC:
    return QuadratureIC(GaussianIC.from_db(config.snr_db, config.inr_db), *(map_by_name(m) for m in config.maps))


def candidate_orders(k: int, l: int) -> dict:
    """Per receiver: the alternating-layer-order decoding orders plus decoding only the own stream."""
    streams = BlockSchedule.for_split(k, l, max(k, l)).streams
    out = {}
    for rx, own in ((1, "m1"), (2, "m2")):
        ds = alternating_decoding_orders(k, l, rx)
        ds.append(DecodingOrder(rx, ((own, streams[own].max_lag),)))
        out[rx] = [d for d in ds if own in d.streams]
    return out


def auto_orders(config: SimConfig) -> tuple:
    """Decoding-order pair with the largest theoretical rate margin at the configured rates."""
    qic = theoretical_channel(config)
    split = map_split(qic)
    k, l = (m.n_layers for m in qic.maps)
    streams = BlockSchedule.for_split(k, l, config.b).streams
    cands = candidate_orders(k, l)
    bounds = {rx: [(d, receiver_bounds(qic, split, d, streams)) for d in ds] for rx, ds in cands.items()}
    r1, r2 = config.rates
    best, best_margin = None, -np.inf
    for d1, b1 in bounds[1]:
        for d2, b2 in bounds[2]:
            m = min(min(b1["m1"], b2.get("m1", np.inf)) - r1, min(b2["m2"], b1.get("m2", np.inf)) - r2)
            if m > best_margin + 1e-12:
                best, best_margin = (d1, d2), m
    return best
