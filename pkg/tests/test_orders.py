import pytest
from hypothesis import given
from hypothesis import strategies as st

from swsc.regions.orders import (DecodingOrder, InfeasibleOrderError, LayerOrder, OrderSyntaxError, Stream,
                                 TWO_ONE_ORDERS, alternating_decoding_orders, alternating_layer_orders,
                                 alternating_patterns, enumerate_orders, find_decoding_order, format_orders,
                                 parse_orders, split_streams, three_one_orders)


def test_split_streams():
    s = split_streams(3, 1)
    assert s["m1"].layers == ("X3", "X2", "X1")
    assert s["m2"].layers == ("W",)
    assert s["m1"].max_lag == -2 and s["m2"].max_lag == 0


def test_parse_and_format_round_trip():
    d1, d2 = parse_orders("d1=m1@-2>m2@0;d2=m1@-2>m2@-1")
    assert d1.receiver == 1 and d1.steps == (("m1", -2), ("m2", 0))
    assert d2.lag("m2") == -1 and d2.lag("m3") is None
    assert format_orders(d1, d2) == "d1=m1@-2>m2@0;d2=m1@-2>m2@-1"
    # lag defaults to zero and whitespace is ignored
    d1, _ = parse_orders(" d1 = m2 > m1@-2 ; d2=m2")
    assert d1.steps == (("m2", 0), ("m1", -2))


@pytest.mark.parametrize("text", ["d1=m1@-1", "d1=m1;d1=m2;d2=m2", "x1=m1;d2=m2", "d1=m1@x;d2=m2",
                                  "d1=m1>m1;d2=m2"])
def test_parse_errors(text):
    with pytest.raises(OrderSyntaxError):
        parse_orders(text)


def test_feasibility_needs_every_block_of_the_message():
    streams = split_streams(3, 1)
    assert DecodingOrder.parse("m1@-2>m2@0", 1).feasible(streams)
    bad = DecodingOrder.parse("m1@-1>m2@0", 1)
    assert not bad.feasible(streams)
    with pytest.raises(InfeasibleOrderError, match="lag <= -2"):
        bad.layer_order(streams)
    with pytest.raises(InfeasibleOrderError, match="undefined"):
        DecodingOrder.parse("m9@0", 1).check(streams)


def test_two_one_layer_orders():
    d1, d2 = parse_orders(TWO_ONE_ORDERS)
    streams = split_streams(2, 1)
    assert d1.layer_order(streams).layers == ("X1", "W", "X2")
    assert d2.layer_order(streams).layers == ("X1", "X2", "W")
    assert d1.decode_block("m1", 5) == 6


def test_three_one_families():
    streams = split_streams(3, 1)
    got = {f: tuple(str(d.layer_order(streams)) for d in three_one_orders(f)) for f in range(15, 20)}
    assert got[15] == ("X1->W->X2->X3", "X1->X2->W->X3")
    assert got[17] == ("X1->X2->X3", "W")
    with pytest.raises(KeyError):
        three_one_orders(3)


@given(k=st.integers(1, 4), l=st.integers(1, 3))
def test_alternating_orders(k, l):
    pats = alternating_patterns(k, l)
    assert len(pats) == k + l
    for lo in alternating_layer_orders(k, l):
        assert lo.alternating
        assert lo.preserves({"X": [f"X{i + 1}" for i in range(k)] if k > 1 else ["X"],
                             "W": [f"W{j + 1}" for j in range(l)] if l > 1 else ["W"]})


@pytest.mark.parametrize("k,l", [(2, 1), (3, 1), (2, 2)])
def test_alternating_decoding_orders_realize_their_layer_orders(k, l):
    streams = split_streams(k, l)
    for rx in (1, 2):
        ds = alternating_decoding_orders(k, l, rx)
        got = sorted(str(d.layer_order(streams)) for d in ds)
        want = sorted(str(lo) for lo in alternating_layer_orders(k, l))
        assert got == want
        assert all(d.feasible(streams) for d in ds)


def test_find_decoding_order_prefers_small_delay():
    streams = split_streams(2, 1)
    d = find_decoding_order(LayerOrder(("X1", "W", "X2"), "XWX"), streams, 1)
    assert str(d) == "m1@-1>m2@0"
    assert find_decoding_order(LayerOrder(("X2", "X1", "W"), "XXW"), streams, 1) is None


def test_enumerate_orders_counts():
    streams = split_streams(2, 1)
    orders = enumerate_orders(streams, 1, ["m1"], ["m2"], lag_floor=-2)
    # m1 alone: lags -1, -2; with m2: two permutations, 2 x 3 lags each
    assert len(orders) == 2 + 2 * 2 * 3


def test_layer_order_validation():
    with pytest.raises(ValueError):
        LayerOrder(("X1", "X1"), "XX")
    with pytest.raises(ValueError):
        Stream("m", ())
    with pytest.raises(OrderSyntaxError):
        DecodingOrder(3, ())
