import math

import numpy as np
import pytest

from underlay.distributions import GammaDist, access_gain_estimate_dist
from underlay.power_control import Binding, controlled_power
from underlay.throughput import expected_log_rate, expected_throughput, ideal_throughput
from underlay.units import default_scenario

DEFAULT = default_scenario()


def test_ideal_throughput():
    assert ideal_throughput(DEFAULT) == pytest.approx(math.log2(11), abs=1e-12)
    assert ideal_throughput(DEFAULT.replace(h_s=1e-15)) == pytest.approx(0.0, abs=1e-12)
    assert ideal_throughput(DEFAULT.replace(g_p=1e-12)) == pytest.approx(math.log2(1001), abs=1e-12)


def test_expected_log_rate_against_scipy_quad():
    integrate = pytest.importorskip("scipy.integrate")
    stats = pytest.importorskip("scipy.stats")
    for a, b, k in [(500.375, 2e-11, 9.09e8), (0.5, 1.0, 3.0), (4.0, 2.0, 0.1)]:
        want, _ = integrate.quad(
            lambda x: math.log2(1 + k * x) * stats.gamma.pdf(x, a, scale=b), 0, np.inf, limit=500, epsrel=1e-12
        ) if a < 100 else integrate.quad(
            lambda x: math.log2(1 + k * x) * stats.gamma.pdf(x, a, scale=b),
            stats.gamma.ppf(1e-14, a, scale=b), stats.gamma.ppf(1 - 1e-14, a, scale=b), epsrel=1e-12,
        )
        assert expected_log_rate(GammaDist(a, b), k) == pytest.approx(want, rel=1e-7)


def test_expected_throughput_reference():
    pt = expected_throughput(DEFAULT, 1e-3)
    assert pt.binding is Binding.OUTAGE_RULE
    assert pt.rate == pytest.approx(0.99 * math.log2(1 + 9.09), abs=0.02)
    assert pt.rate == pytest.approx(3.30125, abs=1e-4)


def test_time_factor_kills_rate():
    pt = expected_throughput(DEFAULT, DEFAULT.T * (1 - 1e-6))
    assert pt.rate < 1e-5


@pytest.mark.parametrize("tau", [1e-4, 1e-3, 5e-3, 20e-3, 90e-3])
def test_jensen_bound(tau):
    pt = expected_throughput(DEFAULT, tau)
    mean_gain = access_gain_estimate_dist(DEFAULT).mean
    bound = (DEFAULT.T - tau) / DEFAULT.T * math.log2(1 + mean_gain * pt.p_cont / DEFAULT.sigma2)
    assert 0 < pt.rate <= bound


def test_interference_limited_receiver():
    # extra interference at the receiver only lowers the rate
    base = expected_throughput(DEFAULT, 1e-3).rate
    noisy = expected_throughput(DEFAULT.replace(snr_sr_denominator=2e-10), 1e-3).rate
    assert noisy < base
    p = controlled_power(DEFAULT, 1e-3).p_cont
    g = access_gain_estimate_dist(DEFAULT)
    assert noisy == pytest.approx(0.99 * expected_log_rate(g, p / 2e-10), rel=1e-12)
