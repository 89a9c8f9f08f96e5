import numpy as np
import pytest

from swsc.channels import DiscreteChannel, DiscreteIC, GaussianIC, QuadratureIC, map_by_name
from swsc.mi import mi
from swsc.regions.basic import region_ian, region_mix, region_scd, region_sd, region_snd, snd_corner
from swsc.regions.geometry import RateRegion2
from swsc.regions.hk import (HK_ORDERS, hk_layer_order, hk_receiver_rates, mac3_combination, mac3_order_rates,
                             project_to_2, region_hk, region_mac3)
from swsc.regions.orders import (DecodingOrder, InfeasibleOrderError, LayerOrder, TWO_ONE_ORDERS, parse_orders,
                                 split_streams, three_one_orders)
from swsc.regions.rate_splitting import (cascade_grid, gap_kernel, region_rate_splitting, rs_gap_demo)
from swsc.regions.swsc import (layer_order_rates, region_swsc, region_swsc_alternating, region_swsc_union,
                               streams_for_split, three_one_split)
from swsc.splits import LayerSplit, cascade_split, erasure_split, hk_split, map_split, trivial_sender
from swsc.verify import gaussian_example


@pytest.fixture(scope="module")
def corpus_ic():
    return DiscreteIC.random(np.random.default_rng(99), (3, 3, 3, 3))


def grid_points(*regions, n=60):
    hi1 = 1.05 * max(r.max_r1() for r in regions)
    hi2 = 1.05 * max(r.max_r2() for r in regions)
    return np.meshgrid(np.linspace(0, hi1, n), np.linspace(0, hi2, n))


def inside(outer, inner, tol=1e-9):
    g1, g2 = grid_points(outer, inner)
    m = inner.contains(g1, g2, 0.0)
    return bool(outer.contains(g1[m], g2[m], tol).all())


# -- classical regions ------------------------------------------------------

def test_ian_without_interference_is_capacity_rectangle():
    qic = QuadratureIC(GaussianIC.from_db(4, -np.inf), map_by_name("bpsk"), map_by_name("bpsk"))
    ref = QuadratureIC(GaussianIC.from_db(4, -np.inf), map_by_name("bpsk"), map_by_name("bpsk"))
    r = region_ian(qic)
    assert len(r) == 1
    cap = mi(ref, None, "X", "W", 1)
    assert r.max_r1() == pytest.approx(cap, abs=1e-9)
    assert r.max_r2() == pytest.approx(cap, abs=1e-9)
    assert r.bounds[0, 2] >= r.bounds[0, 0] + r.bounds[0, 1]


def test_ian_corners_match_mi(corpus_ic):
    r = region_ian(corpus_ic)
    assert r.max_r1() == pytest.approx(mi(corpus_ic, None, "X", (), 1), abs=1e-12)
    assert r.max_r2() == pytest.approx(mi(corpus_ic, None, "W", (), 2), abs=1e-12)


def test_ian_zero_when_output_ignores_input():
    law1 = np.full((2, 2, 2), 0.5)
    law2 = np.zeros((2, 2, 2))
    law2[:, 0, 0] = law2[:, 1, 1] = 1.0
    ch = DiscreteIC.from_marginals(law1, law2, [0.5, 0.5], [0.5, 0.5])
    r = region_ian(ch)
    assert r.max_r1() == 0.0 and r.max_r2() == pytest.approx(1.0)


def test_sd_pentagon(corpus_ic):
    p = region_sd(corpus_ic, 1)
    c1, c2, c3 = p.bounds[0]
    assert c1 == pytest.approx(mi(corpus_ic, None, "X", "W", 1))
    assert c2 == pytest.approx(mi(corpus_ic, None, "W", "X", 1))
    assert c3 == pytest.approx(mi(corpus_ic, None, ("X", "W"), (), 1))


def test_containment_chain(corpus_ic):
    snd = region_snd(corpus_ic)
    for r in (region_ian(corpus_ic), region_scd(corpus_ic), region_mix(corpus_ic)):
        assert inside(snd, r)
        assert snd.covers(r)
    for v in region_scd(corpus_ic).vertices():
        assert snd.contains(*v)


def test_snd_sum_corner_of_strong_gaussian():
    qic = gaussian_example("gap_demo.json")
    snd = region_snd(qic)
    sum_bound = mi(qic, None, ("X", "W"), (), 1)
    assert max(snd.envelope(np.linspace(0, snd.max_r1(), 300)) + np.linspace(0, snd.max_r1(), 300)) <= sum_bound + 1e-9
    assert snd_corner(qic) <= mi(qic, None, "X", "W", 1) + 1e-12


# -- rate splitting ---------------------------------------------------------

def test_rate_splitting_two_one_example(corpus_ic):
    split = LayerSplit([erasure_split(corpus_ic.px, 0.4), trivial_sender(corpus_ic.pw, "W")])
    r = region_rate_splitting(corpus_ic, split, ("X1", "W", "X2"), ("X1", "X2", "W"))
    want1 = (min(mi(corpus_ic, split, "X1", (), 1), mi(corpus_ic, split, "X1", (), 2))
             + min(mi(corpus_ic, split, "X2", ("X1", "W"), 1), mi(corpus_ic, split, "X2", "X1", 2)))
    want2 = min(mi(corpus_ic, split, "W", "X1", 1), mi(corpus_ic, split, "W", "X", 2))
    assert r.max_r1() == pytest.approx(want1, abs=1e-12)
    assert r.max_r2() == pytest.approx(want2, abs=1e-12)


def test_rate_splitting_without_splits_is_ian(corpus_ic):
    split = LayerSplit([trivial_sender(corpus_ic.px, "X"), trivial_sender(corpus_ic.pw, "W")])
    r = region_rate_splitting(corpus_ic, split, "X", "W")
    assert np.allclose(r.bounds[:, :2], region_ian(corpus_ic).bounds[:, :2])


def test_rate_splitting_errors(corpus_ic):
    split = LayerSplit([erasure_split(corpus_ic.px, 0.4), trivial_sender(corpus_ic.pw, "W")])
    with pytest.raises(InfeasibleOrderError, match="undefined"):
        region_rate_splitting(corpus_ic, split, ("X1", "Q"), ("W",))
    with pytest.raises(InfeasibleOrderError, match="own parts"):
        region_rate_splitting(corpus_ic, split, ("X1",), ("W",))
    with pytest.raises(InfeasibleOrderError, match="lags"):
        region_rate_splitting(corpus_ic, split, DecodingOrder.parse("X1@-1>X2", 1), ("W",))


def test_rate_splitting_stays_inside_snd(corpus_ic):
    snd = region_snd(corpus_ic)
    for a in (0.0, 0.3, 0.7, 1.0):
        split = LayerSplit([erasure_split(corpus_ic.px, a), trivial_sender(corpus_ic.pw, "W")])
        for d1, d2 in ((("X1", "W", "X2"), ("X1", "X2", "W")), (("W", "X1", "X2"), ("X1", "W")), (("X1", "X2"), ("W",))):
            assert inside(snd, region_rate_splitting(corpus_ic, split, d1, d2))


def _named_split(p, alphas, name):
    s = cascade_split(p, alphas, name) if len(alphas) else trivial_sender(p, name)
    return s


def test_gap_search_matches_explicit_scheme():
    qic = gaussian_example("gap_demo.json")
    rep = rs_gap_demo(qic, max_layers=(2, 2), grid=9)
    assert 0 < rep.gap < rep.snd_corner
    info = rep.best
    xs = _named_split(qic.input_pmfs[0], info["x_alphas"], "X")
    ws = _named_split(qic.input_pmfs[1], info["w_alphas"], "W")
    split = LayerSplit([xs, ws])
    rename = {"W1": "W"} if ws.n_layers == 1 else {}
    rename.update({"X1": "X"} if xs.n_layers == 1 else {})
    d1 = [rename.get(z, z) for z in info["d1"].split(">")]
    d2 = [rename.get(z, z) for z in info["d2"].split(">")]
    region = region_rate_splitting(qic, split, d1, d2)
    assert region.max_r1_at(rep.r2_max, 1e-9) == pytest.approx(rep.rs_best, abs=1e-9)


def test_gap_kernel_backends_agree():
    qic = gaussian_example("gap_demo.json")
    a = rs_gap_demo(qic, max_layers=(2, 2), grid=7, use_numba=True, prune=False)
    b = rs_gap_demo(qic, max_layers=(2, 2), grid=7, use_numba=False, prune=False)
    assert a.rs_best == pytest.approx(b.rs_best, abs=1e-12)
    for key in a.per_split:
        assert a.per_split[key]["best"] == pytest.approx(b.per_split[key]["best"], abs=1e-12)


def test_cascade_grid_is_nonincreasing():
    g = cascade_grid(3, 5)
    assert g.shape == (15, 2)
    assert np.all(g[:, 0] >= g[:, 1])
    assert cascade_grid(1, 5).shape == (1, 0)


# -- SWSC -------------------------------------------------------------------

def test_two_one_swsc_rectangle(corpus_ic):
    split = LayerSplit([erasure_split(corpus_ic.px, 0.35), trivial_sender(corpus_ic.pw, "W")])
    d1, d2 = parse_orders(TWO_ONE_ORDERS)
    r = region_swsc(corpus_ic, split, d1, d2)
    r1 = min(mi(corpus_ic, split, "X1", (), 1) + mi(corpus_ic, split, "X2", ("X1", "W"), 1),
             mi(corpus_ic, split, "X", (), 2))
    r2 = min(mi(corpus_ic, split, "W", "X1", 1), mi(corpus_ic, split, "W", "X", 2))
    assert r.max_r1() == pytest.approx(r1, abs=1e-12)
    assert r.max_r2() == pytest.approx(r2, abs=1e-12)
    edge = region_swsc(corpus_ic, split, d1, d2, blocks=10)
    assert edge.max_r1() == pytest.approx(r1 * 9 / 10, abs=1e-12)


def test_three_one_family_17_is_ian(corpus_ic):
    split = three_one_split(corpus_ic.px, corpus_ic.pw, 0.6, 0.2)
    r = region_swsc(corpus_ic, split, *three_one_orders(17))
    assert np.allclose(r.bounds[0, :2], region_ian(corpus_ic).bounds[0, :2], atol=1e-12)


def test_three_two_layer_order_rates(corpus_ic):
    split = LayerSplit([cascade_split(corpus_ic.px, (0.7, 0.3)), erasure_split(corpus_ic.pw, 0.5, "W")])
    streams = streams_for_split(split)
    lo = LayerOrder(("X1", "W1", "X2", "W2", "X3"), "XWXWX")
    r = layer_order_rates(corpus_ic, split, lo, 1, streams)
    want1 = (mi(corpus_ic, split, "X1", (), 1) + mi(corpus_ic, split, "X2", ("X1", "W1"), 1)
             + mi(corpus_ic, split, "X3", ("X1", "W1", "X2", "W2"), 1))
    assert r["m1"] == pytest.approx(want1, abs=1e-12)


def test_swsc_rejects_orders_missing_own_stream(corpus_ic):
    split = three_one_split(corpus_ic.px, corpus_ic.pw, 0.6, 0.2)
    with pytest.raises(InfeasibleOrderError):
        region_swsc(corpus_ic, split, DecodingOrder.parse("m2@0", 1), DecodingOrder.parse("m2@0", 2))
    with pytest.raises(InfeasibleOrderError):
        region_swsc(corpus_ic, split, DecodingOrder.parse("m1@-1", 1), DecodingOrder.parse("m2@0", 2))


def test_swsc_union_without_interference_is_ian():
    law1 = np.broadcast_to(np.array([[0.9, 0.1], [0.2, 0.8]])[:, None, :], (2, 2, 2))
    law2 = np.broadcast_to(np.array([[0.85, 0.15], [0.1, 0.9]])[None, :, :], (2, 2, 2))
    ch = DiscreteIC.from_marginals(law1, law2, [0.5, 0.5], [0.4, 0.6])
    u = region_swsc_union(ch, grid=5)
    ian = region_ian(ch)
    assert u.max_r1() == pytest.approx(ian.max_r1(), abs=1e-12)
    assert u.max_r2() == pytest.approx(ian.max_r2(), abs=1e-12)
    assert u.symmetric_rate() == pytest.approx(ian.symmetric_rate(), abs=1e-12)


def test_swsc_union_inside_snd(corpus_ic):
    u = region_swsc_union(corpus_ic, grid=9)
    snd = region_snd(corpus_ic)
    g1, g2 = np.meshgrid(np.linspace(0, snd.max_r1() * 1.05, 200), np.linspace(0, snd.max_r2() * 1.05, 200))
    m = u.contains(g1, g2, 0.0)
    assert snd.contains(g1[m], g2[m], 1e-9).all()
    with pytest.raises(ValueError):
        region_swsc_union(corpus_ic, grid=3)


def test_swsc_map_split_sits_between_ian_and_snd(gaussian_8db):
    sw = region_swsc_alternating(gaussian_8db, map_split(gaussian_8db))
    assert region_ian(gaussian_8db).symmetric_rate() <= sw.symmetric_rate() + 1e-9
    assert sw.symmetric_rate() <= region_snd(gaussian_8db).symmetric_rate() + 1e-9


# -- three-user MAC and HK --------------------------------------------------

@pytest.fixture(scope="module")
def mac():
    from swsc.channels import random_discrete_channel
    return random_discrete_channel(np.random.default_rng(5), (2, 3, 2), (4,))


def test_mac_corners_satisfy_constraints(mac):
    reg = region_mac3(mac)
    sum_idx = 6
    for c in reg.corners.values():
        assert reg.contains(c)
        assert reg.slack(c)[sum_idx] == pytest.approx(0.0, abs=1e-12)


def test_orthogonal_mac_corners_coincide():
    law = np.zeros((2, 2, 2, 8))
    for a in range(2):
        for b in range(2):
            for c in range(2):
                law[a, b, c, 4 * a + 2 * b + c] = 1.0
    pmfs = ([0.5, 0.5], [0.3, 0.7], [0.9, 0.1])
    ch = DiscreteChannel(law, pmfs, 1)
    h = [-sum(p * np.log2(p) for p in q) for q in pmfs]
    for c in region_mac3(ch).corners.values():
        assert np.allclose(c, h, atol=1e-12)


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_mac_layer_orders_are_corner_combinations(mac, lam):
    corners = region_mac3(mac).corners
    for a in (0.0, 0.25, 1.0):
        for b in (0.0, 0.6, 1.0):
            got = mac3_order_rates(mac, a, b, lam)
            assert np.allclose(got, mac3_combination(corners, a, b, lam), atol=1e-12)
    assert np.allclose(mac3_order_rates(mac, 0, 0, 1), corners["ABC"], atol=1e-12)
    with pytest.raises(ValueError):
        mac3_combination(corners, 0, 0, 4)


def test_hk_layer_orders():
    assert str(hk_layer_order(1)) == "S1->T1->S2->S3->U->T2"
    assert all(hk_layer_order(k).layers[0] in ("S1", "T1", "V1", "U") for k in HK_ORDERS)
    with pytest.raises(ValueError):
        hk_layer_order(13)


@pytest.fixture(scope="module")
def hk_channel():
    from swsc.verify import hk_example_channel
    return hk_example_channel()


def test_hk_common_rate_three_term_sum(hk_channel):
    split = hk_split(*hk_channel.input_pmfs, 0.7, 0.3, 0.4, 0.6)
    b = hk_receiver_rates(hk_channel, split, 1)
    want = (mi(hk_channel, split, "S1", (), 1) + mi(hk_channel, split, "S2", ("S1", "T1"), 1)
            + mi(hk_channel, split, "S3", ("S1", "T1", "S2"), 1))
    assert b["R10"] == pytest.approx(want, abs=1e-12)


def test_hk_box_and_projection(hk_channel):
    r4 = region_hk(hk_channel, 0.7, 0.3, 0.4, 0.6, 1, 10)
    box = r4.box()
    r2 = project_to_2(r4)
    assert r2.max_r1() == pytest.approx(box[0] + box[1], abs=1e-12)
    assert r2.max_r2() == pytest.approx(box[2] + box[3], abs=1e-12)
    with pytest.raises(ValueError):
        region_hk(hk_channel, 0.7, 0.3, 0.4, 0.6, 7, 10)


def test_hk_without_private_parts_is_three_one_swsc(corpus_ic):
    # T and V constant: receiver 1's common-message bound follows the 3-1 layer order X1->X2->X3->W
    law = corpus_ic.law[:, None, :, None, :, :]
    ch4 = DiscreteChannel(law, (corpus_ic.px, [1.0], corpus_ic.pw, [1.0]), 2, ("S", "T", "U", "V"))
    split4 = hk_split(*ch4.input_pmfs, 0.6, 0.2, 0.5, 0.5)
    b = hk_receiver_rates(ch4, split4, 1)
    split = three_one_split(corpus_ic.px, corpus_ic.pw, 0.6, 0.2)
    lo = LayerOrder(("X1", "X2", "X3", "W"), "XXXW")
    want = layer_order_rates(corpus_ic, split, lo, 1, streams_for_split(split))
    assert b["R10"] == pytest.approx(want["m1"], abs=1e-12)
    assert b["R11"] == pytest.approx(0.0, abs=1e-12)
