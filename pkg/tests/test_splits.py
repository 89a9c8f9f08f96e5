import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swsc.channels import DiscreteIC, GaussianIC, QuadratureIC, map_by_name
from swsc.mi import mi
from swsc.splits import (LayerSplit, SenderSplit, SplitError, cascade_split, compose_three_layer, erasure_split,
                         hk_split, mac3_split, map_sender, map_split, swap_sender, trivial_sender, trivial_split)

pmf = st.lists(st.floats(0.05, 1.0), min_size=2, max_size=4).map(lambda v: np.array(v) / sum(v))


@settings(max_examples=40, deadline=None)
@given(p=pmf, a=st.floats(0, 1))
def test_erasure_split_reproduces_input(p, a):
    s = erasure_split(p, a)
    assert s.layer_names == ("X1", "X2")
    assert np.allclose(s.pushforward(), p)
    assert s.pmfs[0][-1] == pytest.approx(a)


@settings(max_examples=40, deadline=None)
@given(p=pmf, alphas=st.lists(st.floats(0, 1), min_size=1, max_size=3))
def test_cascade_split_reproduces_input(p, alphas):
    alphas = sorted(alphas, reverse=True)
    s = cascade_split(p, alphas)
    assert s.n_layers == len(alphas) + 1
    assert np.allclose(s.pushforward(), p)


def test_cascade_requires_nonincreasing():
    with pytest.raises(SplitError, match="nonincreasing"):
        cascade_split([0.5, 0.5], (0.2, 0.7))
    with pytest.raises(SplitError):
        erasure_split([0.5, 0.5], 1.5)


def test_cascade_prefixes_behave_as_erasure_splits(small_ic):
    # the first k cascade layers carry exactly what an erasure split with alphas[k-1] carries
    cas = LayerSplit([cascade_split(small_ic.px, (0.7, 0.3)), trivial_sender(small_ic.pw, "W")])
    for a, known in ((0.7, ("X1",)), (0.3, ("X1", "X2"))):
        ref = LayerSplit([erasure_split(small_ic.px, a), trivial_sender(small_ic.pw, "W")])
        for rx in (1, 2):
            assert mi(small_ic, cas, "W", known, rx) == pytest.approx(mi(small_ic, ref, "W", "X1", rx), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), a=st.floats(0, 1))
def test_erasure_identity(seed, a):
    rng = np.random.default_rng(seed)
    ch = DiscreteIC.random(rng, tuple(rng.integers(2, 5, size=4)))
    split = LayerSplit([erasure_split(ch.px, a), trivial_sender(ch.pw, "W")])
    lhs = mi(ch, split, "W", "X1", 1)
    rhs = a * mi(ch, split, "W", (), 1) + (1 - a) * mi(ch, split, "W", "X", 1)
    assert abs(lhs - rhs) < 1e-12


def test_compose_three_layer_branches():
    f = compose_three_layer([0.5, 0.5], 0.8, 0.3)
    r = compose_three_layer([0.5, 0.5], 0.3, 0.8)
    assert f.info["branch"] == "forward" and r.info["branch"] == "reverse"
    assert f.n_layers == 3
    assert np.array_equal(f.table, r.table)


def test_table_validation():
    with pytest.raises(SplitError, match="table shape"):
        SenderSplit("X", ("X",), ([0.5, 0.5],), np.arange(3), [0.5, 0.5])
    with pytest.raises(SplitError, match="reproduce"):
        SenderSplit("X", ("X",), ([0.5, 0.5],), np.array([0, 0]), [0.5, 0.5])


def test_layer_split_names_and_groups():
    s = LayerSplit([erasure_split([0.5, 0.5], 0.3), trivial_sender([0.2, 0.8], "W")])
    assert s.layer_names == ("X1", "X2", "W")
    assert s.resolve("X") == frozenset({"X1", "X2"})
    assert s.resolve([0, "W"]) == frozenset({"X1", "W"})
    assert s.by_sender(frozenset({"X2", "W"})) == ((1,), (0,))
    with pytest.raises(SplitError):
        s.resolve("Z")
    with pytest.raises(SplitError, match="duplicate"):
        LayerSplit([trivial_sender([1.0], "X"), trivial_sender([1.0], "X")])


def test_split_json_round_trip():
    s = LayerSplit([cascade_split([0.3, 0.7], (0.6, 0.2)), trivial_sender([0.5, 0.5], "W")])
    back = LayerSplit.from_json(s.to_json())
    assert back.layer_names == s.layer_names
    for a, b in zip(s.senders, back.senders):
        assert np.array_equal(a.table, b.table)
        assert all(np.allclose(x, y) for x, y in zip(a.pmfs, b.pmfs))


def test_posterior_rows_are_conditional_pmfs():
    s = erasure_split([0.25, 0.75], 0.4)
    probs, rows = s.posterior((0,))
    assert probs.sum() == pytest.approx(1.0)
    assert np.allclose(rows.sum(axis=1), 1.0)
    assert np.allclose(probs @ rows, [0.25, 0.75])
    # erased symbol leaves the prior, the others pin X
    assert any(np.allclose(r, [0.25, 0.75]) for r in rows)
    assert any(np.allclose(r, [1, 0]) for r in rows)


def test_map_split_matches_constellation():
    qic = QuadratureIC(GaussianIC.from_db(8, 8), map_by_name("4pam_natural"), map_by_name("bpsk"))
    s = map_split(qic)
    assert s.layer_names == ("X1", "X2", "W")
    assert np.allclose(s.senders[0].target, 0.25)
    assert mi(qic, s, "X", (), 1) == pytest.approx(mi(qic, None, "X", (), 1), abs=1e-12)
    with pytest.raises(SplitError):
        map_sender(map_by_name("4pam_natural"), points=[0, 1])


def test_compound_constructors():
    m = mac3_split([0.5, 0.5], [0.5, 0.5], 0.3, 0.6, p_c=[0.5, 0.5])
    assert m.layer_names == ("A1", "A2", "B1", "B2", "C")
    h = hk_split(*([[0.5, 0.5]] * 4), 0.7, 0.2, 0.5, 0.4)
    assert h.layer_names == ("S1", "S2", "S3", "T1", "T2", "U", "V1", "V2")
    t = trivial_split([0.5, 0.5], [1.0])
    w = swap_sender(t, erasure_split([0.5, 0.5], 0.5))
    assert w.layer_names == ("X1", "X2", "W")
