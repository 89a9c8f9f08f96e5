"""Property suites over the bundled channel corpus.

Each suite returns a list of :class:`Check` records: the largest residual
seen, the tolerance it is held to, and whether it passed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .channels import load_channel, load_corpus, random_discrete_channel
from .mi import mi
from .regions.basic import cross, receiver_pieces, region_snd, region_snd_decomposed
from .regions.fm import fm_symbolic, to_region
from .regions.hk import hk_coverage, mac3_combination, mac3_order_rates, region_mac3
from .regions.orders import TWO_ONE_ORDERS, parse_orders
from .regions.rate_splitting import example_closed_form, example_rhs_sets, example_system
from .regions.swsc import region_swsc, region_swsc_union
from .splits import LayerSplit, erasure_split, trivial_sender

SUITES = ("lemma1", "prop1", "prop2", "thm2", "thm3", "eq5", "fm")


@dataclass
class Check:
    name: str
    residual: float
    tol: float
    passed: bool
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: max residual {self.residual:.3e} (tol {self.tol:g})"


def data_path(name: str):
    return resources.files("swsc") / "data" / name


def corpus() -> list:
    return load_corpus(data_path("discrete_corpus.json"))


def lemma1(channels=None, grid: int = 21) -> list:
    """I(W;Y1|X1) = a I(W;Y1) + (1 - a) I(W;Y1|X) for the erasure split with erasure probability a."""
    channels = channels or corpus()
    t0 = time.perf_counter()
    worst = 0.0
    for ch in channels:
        for a in np.linspace(0.0, 1.0, grid):
            split = LayerSplit([erasure_split(ch.px, a, "X"), trivial_sender(ch.pw, "W")])
            lhs = mi(ch, split, "W", "X1", 1)
            rhs = a * mi(ch, split, "W", (), 1) + (1 - a) * mi(ch, split, "W", "X", 1)
            worst = max(worst, abs(lhs - rhs))
    return [Check("lemma1 erasure identity", worst, 1e-12, worst < 1e-12, time.perf_counter() - t0)]


def prop1_bounds(channel, split) -> tuple:
    """Closed-form rate bounds of the 2-1 scheme with the Table-I decoding orders."""
    r1 = min(mi(channel, split, "X1", (), 1) + mi(channel, split, "X2", ("X1", "W"), 1), mi(channel, split, "X", (), 2))
    r2 = min(mi(channel, split, "W", "X1", 1), mi(channel, split, "W", "X", 2))
    return r1, r2


def prop1(channels=None, grid: int = 11) -> list:
    channels = channels or corpus()
    t0 = time.perf_counter()
    d1, d2 = parse_orders(TWO_ONE_ORDERS)
    worst = 0.0
    for ch in channels:
        for a in np.linspace(0.0, 1.0, grid):
            split = LayerSplit([erasure_split(ch.px, a, "X"), trivial_sender(ch.pw, "W")])
            reg = region_swsc(ch, split, d1, d2)
            r1, r2 = prop1_bounds(ch, split)
            worst = max(worst, abs(reg.max_r1() - max(r1, 0.0)), abs(reg.max_r2() - max(r2, 0.0)))
    return [Check("prop1 2-1 SWSC rectangle", worst, 1e-12, worst < 1e-12, time.perf_counter() - t0)]


def _heights(region, r1, tol):
    # R1 within tol past the region's right edge reads the edge height
    edge = region.max_r1()
    e = region.envelope(np.where(r1 <= edge + tol, np.minimum(r1, edge), r1))
    return np.where(np.isfinite(e), np.maximum(e, 0.0), 0.0)


def boundary_gap(outer, inner, samples: int = 200, tol: float = 1e-9) -> tuple:
    """``(max shortfall of inner below outer, max excess of inner above outer)`` over sampled R1."""
    hi = max(outer.max_r1(), inner.max_r1())
    r1 = np.linspace(0.0, hi, samples)
    eo, ei = _heights(outer, r1, tol), _heights(inner, r1, tol)
    return float(np.max(eo - ei)), float(np.max(ei - eo))


def _union_suite(name, target_fn, family, channels, grid, gap_tol, excess_tol):
    t0 = time.perf_counter()
    worst_gap, worst_excess = 0.0, 0.0
    for ch in channels:
        target = target_fn(ch)
        union = region_swsc_union(ch, order_family=family, grid=grid)
        g, e = boundary_gap(target, union)
        worst_gap, worst_excess = max(worst_gap, g), max(worst_excess, e)
    dt = time.perf_counter() - t0
    return [Check(f"{name} shortfall below target boundary", worst_gap, gap_tol, worst_gap <= gap_tol, dt),
            Check(f"{name} excess above target boundary", worst_excess, excess_tol, worst_excess <= excess_tol, dt)]


def sd_intersection(channel):
    p = receiver_pieces(channel)
    return cross([p["sd1"]], [p["sd2"]], "SD1&SD2")


def prop2(channels=None, grid: int = 41, n_channels: int = 5) -> list:
    channels = (channels or corpus())[:n_channels]
    return _union_suite("prop2 3-1 SWSC union vs SD1&SD2", sd_intersection, "prop2", channels, grid, 0.02, 1e-9)


def thm2(channels=None, grid: int = 41, n_channels: int = 5) -> list:
    channels = (channels or corpus())[:n_channels]
    return _union_suite("thm2 3-1 SWSC union vs SND", region_snd, "thm2", channels, grid, 0.02, 1e-9)


def eq5(channels=None, grid: int = 200) -> list:
    channels = channels or corpus()
    t0 = time.perf_counter()
    mismatches = 0
    for ch in channels:
        a, b = region_snd(ch), region_snd_decomposed(ch)
        hi1, hi2 = 1.05 * max(a.max_r1(), b.max_r1()), 1.05 * max(a.max_r2(), b.max_r2())
        g1, g2 = np.meshgrid(np.linspace(0, hi1, grid), np.linspace(0, hi2, grid), indexing="ij")
        mismatches += int(np.count_nonzero(a.contains(g1, g2) != b.contains(g1, g2)))
    return [Check("eq5 SND decomposition grid mismatches", mismatches, 0, mismatches == 0, time.perf_counter() - t0)]


def fm(n: int = 1000, seed: int = 0) -> list:
    """Projection of the 2-1 rate-splitting system against its closed form."""
    t0 = time.perf_counter()
    cons, _, sums = example_system(*([0.0] * 6))
    sym = fm_symbolic(cons, sums)
    want1, want2 = example_rhs_sets()
    got1 = {c.rhs for c in sym if c.coeffs == (("R1", 1),)}
    got2 = {c.rhs for c in sym if c.coeffs == (("R2", 1),)}
    extra = [c for c in sym if c.coeffs not in ((("R1", 1),), (("R2", 1),)) and not c.is_nonneg_bound()]
    symbolic_ok = got1 == want1 and got2 == want2 and not extra
    rng = np.random.default_rng(seed)
    matches = 0
    for _ in range(n):
        v = dict(zip("abcdef", rng.uniform(0.0, 2.0, 6)))
        reg = to_region(sym, v)
        r1, r2 = example_closed_form(v)
        # a rectangle: one conjunction whose sum bound never binds
        rect = len(reg) == 1 and reg.bounds[0, 2] >= reg.bounds[0, 0] + reg.bounds[0, 1]
        if rect and reg.max_r1() == r1 and reg.max_r2() == r2:
            matches += 1
    dt = time.perf_counter() - t0
    return [Check("fm symbolic right-hand sides", 0.0 if symbolic_ok else 1.0, 0, symbolic_ok, dt),
            Check(f"fm numeric matches ({matches}/{n})", n - matches, 0, matches == n, dt)]


def hk_example_channel(seed: int = 7):
    """Tiny four-input binary channel with ternary outputs at both receivers."""
    return random_discrete_channel(np.random.default_rng(seed), (2, 2, 2, 2), (3, 3))


def thm3(n_macs: int = 5, grid: int = 21, hk_grid: int = 21, seed: int = 11) -> list:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    pts = np.linspace(0.0, 1.0, grid)
    for _ in range(n_macs):
        mac = random_discrete_channel(rng, (2, 2, 2), (3,))
        corners = region_mac3(mac).corners
        for lam in (1, 2, 3):
            for a in pts:
                for b in pts:
                    worst = max(worst, float(np.abs(mac3_order_rates(mac, a, b, lam)
                                                     - mac3_combination(corners, a, b, lam)).max()))
    t1 = time.perf_counter()
    cov = hk_coverage(hk_example_channel(), grid=hk_grid)
    t2 = time.perf_counter()
    return [Check("thm3 layer-order rates vs corner combinations", worst, 1e-12, worst < 1e-12, t1 - t0),
            Check(f"thm3 HK coverage of {len(cov.vertices)} MAC-intersection vertices", max(cov.worst, 0.0), 0.02,
                  cov.worst <= 0.02, t2 - t1)]


def run_suite(name: str, grid: int | None = None) -> list:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = {"lemma1": lemma1, "prop1": prop1, "prop2": prop2, "thm2": thm2, "thm3": thm3, "eq5": eq5, "fm": fm}[name]
    if grid is not None and name in ("prop2", "thm2", "thm3"):
        return fn(grid=grid) if name != "thm3" else fn(hk_grid=grid)
    return fn()


def gaussian_example(name: str = "symmetric_8db.json"):
    return load_channel(data_path(name))
