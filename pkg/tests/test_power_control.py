import math

import numpy as np
import pytest

from underlay.distributions import received_power_estimate_exact
from underlay.power_control import (
    Binding,
    NoRegimeBoundary,
    controlled_power,
    ideal_controlled_power,
    operating_regime_gamma,
    outage_probability,
    regime_residual,
)
from underlay.units import db_to_linear, default_scenario, mw_to_dbm

DEFAULT = default_scenario()


def test_ideal_power():
    assert ideal_controlled_power(DEFAULT) == pytest.approx(0.1)
    assert mw_to_dbm(ideal_controlled_power(DEFAULT)) == pytest.approx(-10.0)
    assert ideal_controlled_power(DEFAULT.replace(g_p=1e-9)) == pytest.approx(0.01)
    assert ideal_controlled_power(DEFAULT.replace(g_p=1e-12)) == pytest.approx(10.0)
    assert ideal_controlled_power(DEFAULT.replace(g_p=1e-12), capped=True) == 1.0


def _mc_power(params, tau, n=1_000_000, seed=0):
    # quantile of exactly drawn P_hat values, pushed through the outage rule
    law = received_power_estimate_exact(params, tau)
    draws = law.sample(np.random.default_rng(seed), n)
    q = np.quantile(draws, 1 - params.rho_out)
    return params.theta_I * params.P_tran / (q - params.sigma2)


def test_controlled_power_outage_rule():
    d1 = controlled_power(DEFAULT, 1e-3)
    assert d1.binding is Binding.OUTAGE_RULE
    assert d1.p_cont == pytest.approx(0.0909, abs=5e-4)
    assert d1.p_cont == pytest.approx(_mc_power(DEFAULT, 1e-3), rel=5e-3)
    d2 = controlled_power(DEFAULT.replace(rho_out=0.01), 1e-3)
    assert d2.p_cont == pytest.approx(0.085, abs=1e-3)
    assert d2.p_cont < d1.p_cont


def test_controlled_power_cap():
    params = DEFAULT.replace(g_p=1e-12, rho_cont=0.1)
    d = controlled_power(params, 1e-3)
    assert d.binding is Binding.TRANSMIT_CAP
    assert d.p_cont == 0.1


def test_cap_when_quantile_below_noise():
    # nearly noise-free estimate and a generous rho_out: q <= sigma2
    params = DEFAULT.replace(g_p=1e-30, rho_out=0.9)
    d = controlled_power(params, 50e-3)
    assert d.quantile_point <= params.sigma2
    assert d.binding is Binding.TRANSMIT_CAP and d.p_cont == params.rho_cont


@pytest.mark.parametrize("rho", [0.01, 0.1, 0.3])
@pytest.mark.parametrize("tau", [1e-4, 1e-3, 10e-3])
def test_outage_inverts_power_rule(rho, tau):
    params = DEFAULT.replace(rho_out=rho)
    d = controlled_power(params, tau)
    assert d.binding is Binding.OUTAGE_RULE
    assert outage_probability(params, tau, d.p_cont) == pytest.approx(rho, abs=1e-9)


def test_outage_limits():
    assert outage_probability(DEFAULT, 1e-3, 1e-12) < 1e-12
    # threshold equals the estimator mean; Gamma median sits just below it
    assert outage_probability(DEFAULT, 1e-3, 0.1) == pytest.approx(0.5, abs=0.01)
    with pytest.raises(ValueError):
        outage_probability(DEFAULT, 1e-3, 0.0)


def test_outage_monotone_in_power():
    powers = np.geomspace(0.01, 1.0, 20)
    outs = [outage_probability(DEFAULT, 1e-3, p) for p in powers]
    assert all(b >= a for a, b in zip(outs, outs[1:]))


def _grid_root(params, tau):
    # dense residual scan, 0.001 dB steps around the bracket
    g = np.arange(-3.0, 1.0, 1e-3)
    r = np.array([regime_residual(params, tau, db_to_linear(x)) for x in g])
    i = int(np.nonzero(np.diff(np.sign(r)))[0][0])
    return g[i]


def test_regime_reference_point():
    params = DEFAULT.replace(rho_cont=0.1)
    star = operating_regime_gamma(params, 10e-3)
    assert star.gamma_star_db == pytest.approx(-0.13, abs=0.05)
    assert star.gamma_star == pytest.approx(0.97, abs=0.05)
    assert star.gamma_star_db == pytest.approx(_grid_root(params, 10e-3), abs=2e-3)


def test_regime_residual_sign():
    params = DEFAULT.replace(rho_cont=0.1)
    star = operating_regime_gamma(params, 10e-3).gamma_star
    assert regime_residual(params, 10e-3, star * 0.9) < 0 < regime_residual(params, 10e-3, star * 1.1)


@pytest.mark.parametrize("rho_cont", [1.0, 0.1])
def test_regime_nondecreasing_in_tau(rho_cont):
    params = DEFAULT.replace(rho_cont=rho_cont)
    taus = np.geomspace(1e-3, 99e-3, 10)
    stars = [operating_regime_gamma(params, t).gamma_star_db for t in taus]
    assert all(b >= a - 1e-9 for a, b in zip(stars, stars[1:]))


def test_regime_large_tau_limit():
    long_frame = DEFAULT.replace(T=2.0)
    for rho_cont, limit in [(1.0, 0.1), (0.1, 1.0)]:
        star = operating_regime_gamma(long_frame.replace(rho_cont=rho_cont), 1.0)
        assert abs(star.gamma_star_db - 10 * math.log10(limit)) < 0.5


def test_regime_without_root():
    # with 100 samples noise alone already exceeds the outage budget at full power
    with pytest.raises(NoRegimeBoundary):
        operating_regime_gamma(DEFAULT, 1e-4)


@pytest.mark.parametrize("rho", [0.01, 0.1])
@pytest.mark.parametrize("tau", [1e-3, 5e-3, 10e-3])
def test_gamma_outage_close_to_exact_law(rho, tau):
    stats = pytest.importorskip("scipy.stats")
    params = DEFAULT.replace(rho_out=rho)
    d = controlled_power(params, tau)
    exact = received_power_estimate_exact(params, tau)
    threshold = params.theta_I * params.P_tran / d.p_cont + params.sigma2
    true_outage = stats.ncx2.sf(threshold / exact.scale, exact.dof, exact.noncentrality)
    # Gamma tail is slightly heavier than the ncx2 tail: the rule is conservative
    assert true_outage <= rho
    assert true_outage == pytest.approx(rho, rel=0.02)
