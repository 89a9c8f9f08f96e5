"""Symmetric-rate curves versus INR: theoretical IAN, SWCM and SND, and simulated feasibility."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..channels import GaussianIC, QuadratureIC, map_by_name
from ..mi import mi
from ..regions.basic import region_snd
from ..regions.swsc import region_swsc_alternating
from ..splits import map_split
from .link import SimConfig, run_ian_baseline, simulate

TARGET_BLER = 0.1


def _channel(snr_db, inr_db, maps) -> QuadratureIC:
    return QuadratureIC(GaussianIC.from_db(snr_db, inr_db), *(map_by_name(m) for m in maps))


def ian_rate(snr_db: float, inr_db: float, maps=("4pam_natural", "bpsk"), variant: str = "B") -> float:
    """Symmetric rate of single-user decoding.

    Variant B treats interference as Gaussian noise of the same power, variant
    A keeps its constellation.
    """
    if variant == "A":
        qic = _channel(snr_db, inr_db, maps)
    elif variant == "B":
        s, i = 10 ** (snr_db / 10), (10 ** (inr_db / 10) if inr_db > -np.inf else 0.0)
        qic = _channel(10 * np.log10(s / (1 + i)), -np.inf, maps)
    else:
        raise ValueError(f"variant must be 'A' or 'B', got {variant!r}")
    return min(mi(qic, None, "X", (), 1), mi(qic, None, "W", (), 2))


def swcm_rate(snr_db: float, inr_db: float, maps=("4pam_natural", "bpsk")) -> float:
    """Symmetric rate of SWSC with the maps' own layers, over the alternating decoding orders."""
    qic = _channel(snr_db, inr_db, maps)
    return region_swsc_alternating(qic, map_split(qic)).symmetric_rate()


def snd_rate(snr_db: float, inr_db: float, maps=("4pam_natural", "bpsk")) -> float:
    return region_snd(_channel(snr_db, inr_db, maps)).symmetric_rate()


@dataclass
class CurvePoint:
    inr_db: float
    ian: float
    swcm: float
    snd: float
    ian_marginal: float
    sim_swsc: float | None = None
    sim_ian: float | None = None

    @property
    def gain(self) -> float:
        return self.swcm / self.ian - 1.0 if self.ian > 0 else np.inf


def largest_feasible_rate(config: SimConfig, rates, scheme: str = "swsc", jobs: int = 1):
    """Largest symmetric grid rate whose BLER is below the target on both streams, or None."""
    best = None
    for r in sorted(rates):
        cfg = config.with_overrides(rates=(r, r))
        rep = simulate(cfg, jobs=jobs) if scheme == "swsc" else run_ian_baseline(cfg, "A", jobs=jobs)
        if max(rep.bler) < TARGET_BLER:
            best = r
    return best


def sweep_curve(config: SimConfig, inr_db, rate_grid=None, jobs: int = 1) -> list:
    """One :class:`CurvePoint` per INR; ``rate_grid`` turns on the simulated columns."""
    inr_db = list(inr_db)
    if not inr_db:
        raise ValueError("need at least one INR value")
    pts = []
    for inr in inr_db:
        p = CurvePoint(float(inr), ian_rate(config.snr_db, inr, config.maps),
                       swcm_rate(config.snr_db, inr, config.maps), snd_rate(config.snr_db, inr, config.maps),
                       ian_rate(config.snr_db, inr, config.maps, "A"))
        if rate_grid is not None:
            cfg = config.with_overrides(inr_db=float(inr), orders=None)
            p.sim_swsc = largest_feasible_rate(cfg, rate_grid, "swsc", jobs)
            p.sim_ian = largest_feasible_rate(cfg, rate_grid, "ian", jobs)
        pts.append(p)
    return pts


def curve_rows(points) -> list:
    """Flat records (inr_db, rate_bits, scheme) for CSV output."""
    rows = []
    for p in points:
        d = asdict(p)
        for scheme in ("ian", "ian_marginal", "swcm", "snd", "sim_swsc", "sim_ian"):
            if d[scheme] is not None:
                rows.append({"inr_db": p.inr_db, "rate_bits": d[scheme], "scheme": scheme})
    return rows
