import math

import numpy as np
import pytest

from swsc.channels import map_by_name
from swsc.simulator.demap import SuperpositionModel, gaussian_equivalent


def model(gx, gw, mx="bpsk", mw="bpsk", noise=1.0):
    return SuperpositionModel(map_by_name(mx), map_by_name(mw), (gx, gw), noise)


def test_bpsk_llr_law():
    # y = g x + N(0, 1): LLR = 2 g y, so given x = +1 it is N(2 g^2, 4 g^2)
    g = 1.0
    m = model(g, 0.0)
    rng = np.random.default_rng(0)
    n = 200_000
    y = g * 1.0 + rng.standard_normal(n)
    llr = m.llr(y, 0).ravel()
    assert np.allclose(llr[:50], np.clip(2 * g * y[:50], -40, 40))
    se_mean = math.sqrt(4 * g * g / n)
    assert abs(llr.mean() - 2 * g * g) < 4 * se_mean
    assert llr.var() == pytest.approx(4 * g * g, rel=0.02)


def test_zero_gain_gives_zero_llr():
    m = model(0.0, 1.3, "4pam_natural")
    y = np.random.default_rng(1).standard_normal(100)
    assert np.all(m.llr(y, 0) == 0.0)
    assert np.all(m.llr(y, 1) == 0.0)


def test_noiseless_limit_saturates():
    m = model(1.0, 0.5, "4pam_natural", "bpsk", noise=1e-6)
    x_idx = np.array([[0, 1, 0, 1], [0, 0, 1, 1]])
    w_idx = np.array([[1, 0, 1, 0]])
    y = m.transmit(x_idx, w_idx)
    for layer in range(3):
        idx = np.concatenate([x_idx, w_idx])[layer]
        llr = m.llr(y, layer).ravel()
        assert np.all(np.abs(llr) == 40.0)
        assert np.array_equal(llr < 0, idx == 1)


def test_known_layers_sharpen_llrs():
    m = model(1.0, 0.9, "4pam_natural", "bpsk")
    rng = np.random.default_rng(3)
    x_idx = rng.integers(0, 2, (2, 4000))
    w_idx = rng.integers(0, 2, (1, 4000))
    y = m.transmit(x_idx, w_idx) + rng.standard_normal(4000)
    sign = 1 - 2 * x_idx[1]
    blind = np.mean(m.llr(y, 1).ravel() * sign)
    aided = np.mean(m.llr(y, 1, {0: x_idx[0], 2: w_idx[0]}).ravel() * sign)
    assert aided > blind > 0
    with pytest.raises(ValueError):
        m.llr(y, 1, {1: x_idx[1]})


def test_complex_noise_convention():
    m = model(1.0, 0.0, "16qam_2qpsk", "bpsk")
    assert m.complex and m.var_per_dim == 0.5


def test_gaussian_equivalent():
    m = model(1.0, 2.0, "4pam_natural", "bpsk")
    g = gaussian_equivalent(m, 1)
    assert g.gains == (1.0, 0.0)
    assert g.noise_var == pytest.approx(1.0 + 4.0)
    # without interference both models are the same
    assert gaussian_equivalent(model(1.0, 0.0), 1).noise_var == 1.0
