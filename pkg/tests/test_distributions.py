import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from underlay.distributions import (
    GammaDist,
    NoncentralChiSquare,
    access_gain_estimate_dist,
    access_gain_estimate_exact,
    gamma_cdf,
    gamma_quantile,
    gamma_sample,
    moment_match,
    received_power_estimate_dist,
    received_power_estimate_exact,
)
from underlay.montecarlo import SimConfig, ks_distance, simulate_received_power
from underlay.numerics import DomainError
from underlay.units import default_scenario

stats = pytest.importorskip("scipy.stats")


def test_moment_match_reference_values():
    g = moment_match(NoncentralChiSquare(1000, 1000, 1e-10 / 1000))
    assert g.shape == pytest.approx(2000 / 3, rel=1e-12)
    assert g.scale == pytest.approx(3e-13, rel=1e-12)
    g = moment_match(NoncentralChiSquare(2, 0, 1.0))
    assert (g.shape, g.scale) == (pytest.approx(1.0), pytest.approx(2.0))
    g = moment_match(NoncentralChiSquare(1, 2000, 5e-12))
    assert g.shape == pytest.approx(2001**2 / 8002, rel=1e-12)
    assert g.scale == pytest.approx(5e-12 * 8002 / 2001, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    k=st.floats(min_value=0.5, max_value=1e5),
    lam=st.floats(min_value=0.0, max_value=1e5),
    c=st.floats(min_value=1e-15, max_value=1e3),
)
def test_moment_match_preserves_moments(k, lam, c):
    exact = NoncentralChiSquare(k, lam, c)
    g = moment_match(exact)
    assert g.mean == pytest.approx(exact.mean, rel=1e-12)
    assert g.variance == pytest.approx(exact.variance, rel=1e-12)


def test_received_power_law_at_defaults():
    p = default_scenario()
    g = received_power_estimate_dist(p, 1e-3)
    assert g.shape == pytest.approx(666.6666666666666, rel=1e-12)
    assert g.scale == pytest.approx(3e-13, rel=1e-12)
    assert g.mean == pytest.approx(2e-10, rel=1e-12)
    noise_only = received_power_estimate_dist(p.replace(g_p=1e-30), 1e-3)
    assert noise_only.mean == pytest.approx(p.sigma2, rel=1e-12)


def test_received_power_gamma_close_to_exact_ncx2():
    p = default_scenario()
    g = received_power_estimate_dist(p, 1e-3)
    ex = received_power_estimate_exact(p, 1e-3)
    x = np.linspace(1.6e-10, 2.4e-10, 41)
    exact_cdf = stats.ncx2.cdf(x / ex.scale, ex.dof, ex.noncentrality)
    assert np.max(np.abs(g.cdf(x) - exact_cdf)) < 5e-3


def test_received_power_cdf_at_mc_quantile():
    p = default_scenario()
    s = simulate_received_power(p, 1e-3, SimConfig(100_000, master_seed=3))
    q90 = float(np.quantile(s.samples, 0.9))
    assert received_power_estimate_dist(p, 1e-3).cdf(q90) == pytest.approx(0.9, abs=0.01)


def test_access_gain_law():
    p = default_scenario()
    g = access_gain_estimate_dist(p)
    assert g.shape == pytest.approx(500.375, rel=1e-4)
    assert g.scale == pytest.approx(2.0e-11, rel=1e-3)
    assert g.mean == pytest.approx(1.0005e-8, rel=1e-12)
    tiny = access_gain_estimate_dist(p.replace(h_s=1e-12))
    assert tiny.mean == pytest.approx(p.sigma2 / (2 * p.N_s), rel=1e-6)
    assert tiny.shape == pytest.approx(0.5, rel=1e-6)


def test_access_gain_ks_against_exact_samples():
    p = default_scenario()
    ex = access_gain_estimate_exact(p)
    rng = np.random.default_rng(11)
    from underlay.montecarlo import SimSummary

    s = SimSummary.from_samples(ex.sample(rng, 100_000))
    assert ks_distance(s, access_gain_estimate_dist(p).cdf) < 0.01


def test_gamma_helpers():
    d = GammaDist(1.0, 1.0)
    assert gamma_cdf(d, 2.302585) == pytest.approx(0.9, abs=1e-6)
    assert gamma_quantile(d, 0.0) == 0.0
    assert d.cdf(-1.0) == 0.0 and d.sf(-1.0) == 1.0
    np.testing.assert_array_equal(d.cdf(np.array([-1.0, 0.0])), [0.0, 0.0])
    with pytest.raises(DomainError):
        d.quantile(1.0)
    with pytest.raises(DomainError):
        GammaDist(0.0, 1.0)


def test_gamma_pdf_against_scipy():
    for a, b in [(0.5, 2.0), (3.0, 1.5), (666.6666666666666, 3e-13)]:
        d = GammaDist(a, b)
        for q in (0.01, 0.3, 0.5, 0.9, 0.999):
            x = stats.gamma.ppf(q, a, scale=b)
            assert d.pdf(x) == pytest.approx(stats.gamma.pdf(x, a, scale=b), rel=1e-10)


def test_gamma_sample_mean():
    d = GammaDist(666.6666666666666, 3e-13)
    x = gamma_sample(d, np.random.default_rng(5), 1_000_000)
    se = math.sqrt(d.variance / x.size)
    assert abs(x.mean() - 2e-10) < 3 * se


def test_ncx2_sample_moments():
    ex = NoncentralChiSquare(4, 3.0, 2.0)
    x = ex.sample(np.random.default_rng(2), 400_000)
    assert x.mean() == pytest.approx(ex.mean, rel=0.01)
    assert x.var() == pytest.approx(ex.variance, rel=0.02)
    central = NoncentralChiSquare(3, 0.0).sample(np.random.default_rng(2), 10)
    assert central.shape == (10,)
