"""Secondary throughput: ideal benchmark and expectation over the estimated access gain."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .distributions import GammaDist, access_gain_estimate_dist
from .numerics import Interval, Tolerance, integrate
from .power_control import Binding, controlled_power, ideal_controlled_power
from .units import ScenarioParams, check_tau

__all__ = ["ThroughputPoint", "ideal_throughput", "expected_log_rate", "expected_throughput"]

TAIL_MASS = 1e-12


@dataclass(frozen=True)
class ThroughputPoint:
    tau: float
    rate: float  # bits/s/Hz
    p_cont: float
    binding: Binding


def ideal_throughput(params: ScenarioParams, capped: bool = False) -> float:
    """log2(1 + |h_s|^2 P_cont / N) with the ideal (known-channel) power."""
    p = ideal_controlled_power(params, capped=capped)
    return math.log2(1.0 + params.g_s * p / params.sr_noise)


@lru_cache(maxsize=256)
def _support(dist: GammaDist) -> tuple[float, float]:
    # in units of the scale parameter
    return dist.quantile(TAIL_MASS) / dist.scale, dist.quantile(1.0 - TAIL_MASS) / dist.scale


def expected_log_rate(dist: GammaDist, snr_per_unit: float, rel_tol: float = 1e-8) -> float:
    """E[log2(1 + X * snr_per_unit)] for X ~ ``dist``, by adaptive quadrature.

    The density is integrated in the standardized variable t = x / scale
    between the 1e-12 and 1 - 1e-12 quantiles.
    """
    lo, hi = _support(dist)
    a = dist.shape
    gain = dist.scale * snr_per_unit
    unit = GammaDist(a, 1.0)

    def integrand(t: float) -> float:
        return math.log2(1.0 + gain * t) * unit.pdf(t)

    return integrate(integrand, Interval(lo, hi), Tolerance(rel=rel_tol, abs=0.0, max_iters=500))


def expected_throughput(params: ScenarioParams, tau: float) -> ThroughputPoint:
    """Expected rate (T - tau)/T * E[log2(1 + |h_s_hat|^2 P_cont / N)].

    ``P_cont`` comes from :func:`controlled_power`; the expectation runs over
    the Gamma approximation of the estimated access gain.
    """
    check_tau(params, tau)
    decision = controlled_power(params, tau)
    dist = access_gain_estimate_dist(params)
    mean_log = expected_log_rate(dist, decision.p_cont / params.sr_noise)
    rate = (params.T - tau) / params.T * mean_log
    return ThroughputPoint(tau=tau, rate=rate, p_cont=decision.p_cont, binding=decision.binding)
