import numpy as np
import pytest

from swsc.simulator.curve import (CurvePoint, curve_rows, ian_rate, largest_feasible_rate, snd_rate, sweep_curve,
                                  swcm_rate)
from swsc.simulator.link import SimConfig

INR = [6.0, 7.0, 8.0, 9.0, 10.0]


@pytest.fixture(scope="module")
def points():
    return sweep_curve(SimConfig(), INR)


def test_ordering_of_schemes(points):
    for p in points:
        assert 0 < p.ian <= p.swcm + 1e-12 <= p.snd + 2e-12
        assert p.ian <= p.ian_marginal + 1e-12


def test_gain_grows_with_interference(points):
    ratios = [p.swcm / p.ian for p in points]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert [p.gain for p in points] == pytest.approx([r - 1 for r in ratios])


def test_snd_saturates_to_single_user_rate():
    single = ian_rate(8.0, -np.inf)
    assert snd_rate(8.0, 30.0) == pytest.approx(single, abs=1e-6)


def test_no_interference_collapses_all_curves():
    r = ian_rate(8.0, -np.inf)
    assert swcm_rate(8.0, -np.inf) == pytest.approx(r, abs=1e-12)
    assert snd_rate(8.0, -np.inf) == pytest.approx(r, abs=1e-12)
    assert ian_rate(8.0, -np.inf, variant="A") == pytest.approx(r, abs=1e-12)


def test_variant_checks():
    with pytest.raises(ValueError):
        ian_rate(8.0, 8.0, variant="C")
    with pytest.raises(ValueError):
        sweep_curve(SimConfig(), [])


def test_rows_skip_missing_columns():
    rows = curve_rows([CurvePoint(6.0, 0.5, 0.7, 0.8, 0.55)])
    assert [r["scheme"] for r in rows] == ["ian", "ian_marginal", "swcm", "snd"]
    rows = curve_rows([CurvePoint(6.0, 0.5, 0.7, 0.8, 0.55, sim_swsc=0.4, sim_ian=None)])
    assert rows[-1] == {"inr_db": 6.0, "rate_bits": 0.4, "scheme": "sim_swsc"}


def test_largest_feasible_rate_on_tiny_link():
    cfg = SimConfig(n=128, b=4, trials=4, snr_db=20.0, inr_db=-np.inf)
    assert largest_feasible_rate(cfg, [0.2, 0.3]) == 0.3
    assert largest_feasible_rate(cfg.with_overrides(snr_db=-10.0), [0.4]) is None
