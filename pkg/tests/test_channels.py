import json
import math

import numpy as np
import pytest

from swsc.channels import (ChannelError, DiscreteChannel, DiscreteIC, GaussianIC, QuadratureIC, as_pmf, bpsk,
                           load_channel, load_corpus, make_higher_maps, map_by_name, random_discrete_channel)


def test_pmf_validation():
    assert np.allclose(as_pmf([0.25, 0.75]), [0.25, 0.75])
    with pytest.raises(ChannelError):
        as_pmf([0.5, 0.6])
    with pytest.raises(ChannelError):
        as_pmf([-0.1, 1.1])


def test_discrete_ic_rejects_bad_laws():
    law = np.full((2, 2, 2, 2), 0.25)
    DiscreteIC(law, [0.5, 0.5], [0.5, 0.5])
    with pytest.raises(ChannelError):
        DiscreteIC(law * 1.1, [0.5, 0.5], [0.5, 0.5])
    with pytest.raises(ChannelError):
        DiscreteIC(law[..., 0], [0.5, 0.5], [0.5, 0.5])
    bad = law.copy()
    bad[0, 0, 0, 0], bad[0, 0, 0, 1] = -0.25, 0.75
    with pytest.raises(ChannelError):
        DiscreteIC(bad, [0.5, 0.5], [0.5, 0.5])


def test_receiver_laws_are_marginals(small_ic):
    l1 = small_ic.receiver_law(1)
    assert l1.shape == (3, 2, 3)
    assert np.allclose(l1.sum(axis=-1), 1.0)
    assert np.allclose(l1, small_ic.law.sum(axis=3))
    with pytest.raises(ChannelError):
        small_ic.receiver_law(3)


def test_json_round_trip(small_ic, tmp_path):
    path = tmp_path / "ic.json"
    path.write_text(json.dumps(small_ic.to_json()))
    back = load_channel(path)
    assert isinstance(back, DiscreteIC)
    assert np.array_equal(back.law, small_ic.law)
    assert np.array_equal(back.px, small_ic.px)


def test_multi_input_round_trip(rng):
    ch = random_discrete_channel(rng, (2, 2, 2, 2), (3, 3), input_names=("S", "T", "U", "V"))
    back = load_channel(ch.to_json())
    assert type(back) is DiscreteChannel
    assert back.input_names == ("S", "T", "U", "V")
    assert np.allclose(back.law, ch.law)


def test_load_errors(tmp_path):
    with pytest.raises(ChannelError, match="nope.json"):
        load_channel(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ChannelError, match="invalid JSON"):
        load_channel(bad)
    with pytest.raises(ChannelError, match="unknown channel type"):
        load_channel({"type": "optical"})
    with pytest.raises(ChannelError, match="missing field"):
        load_channel({"type": "discrete", "law": []})


def test_corpus_loads(tmp_path, rng):
    chans = [DiscreteIC.random(rng).to_json() for _ in range(3)]
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"channels": chans}))
    assert len(load_corpus(path)) == 3


@pytest.mark.parametrize("name", ["bpsk", "4pam_natural", "4pam_gray", "8pam_3bpsk", "8pam_bpsk_4pam",
                                  "16qam_2qpsk", "16qam_2x4pam"])
def test_named_maps_have_unit_power(name):
    m = map_by_name(name)
    assert m.average_power() == pytest.approx(1.0)
    c = m.constellation()
    assert c.size == 2 ** c.bits
    assert sorted(c.labels.tolist()) == list(range(c.size))


def test_4pam_natural_points():
    m = map_by_name("4pam_natural")
    s5 = math.sqrt(5.0)
    assert m(1, 1) == pytest.approx(3 / s5)
    assert m(-1, 1) == pytest.approx(1 / s5)
    assert m(1, -1) == pytest.approx(-1 / s5)
    assert sorted(m.constellation().points) == pytest.approx([-3 / s5, -1 / s5, 1 / s5, 3 / s5])
    with pytest.raises(ChannelError):
        m(0.5, 1)


def test_gray_and_natural_share_points():
    a = np.sort(map_by_name("4pam_natural").constellation().points)
    b = np.sort(map_by_name("4pam_gray").constellation().points)
    assert np.allclose(a, b)


def test_unknown_map():
    with pytest.raises(ChannelError, match="unknown symbol map"):
        map_by_name("64qam")


def test_mimo_map_is_vector():
    m = make_higher_maps("mimo_antenna", n_layers=2)
    assert m.is_vector
    assert m.table.shape == (2, 2, 2)
    with pytest.raises(ChannelError):
        QuadratureIC(GaussianIC.from_db(8, 8), m, map_by_name("bpsk"))


def test_gains_from_db():
    gic = GaussianIC.from_db(8, 6, power_db=3)
    assert gic.S1 == pytest.approx(10 ** 0.8)
    assert gic.I1 == pytest.approx(10 ** 0.6)
    assert gic.I2 == pytest.approx(gic.I1)
    assert GaussianIC.from_db(8, -np.inf).g12 == 0.0
    with pytest.raises(ChannelError):
        GaussianIC(1, 1, 1, 1, power=0)


def test_quadrature_entropy_of_single_point():
    qic = QuadratureIC(GaussianIC.from_db(0, -np.inf), map_by_name("bpsk"), map_by_name("bpsk"))
    h = qic.output_entropy(1, [np.array([[1.0, 0.0]]), np.array([[0.5, 0.5]])])
    # Gaussian with unit variance
    assert float(h.ravel()[0]) == pytest.approx(0.5 * math.log2(2 * math.pi * math.e), abs=1e-9)


def test_bpsk_constellation():
    c = bpsk()
    assert c.bits == 1 and not c.is_complex
