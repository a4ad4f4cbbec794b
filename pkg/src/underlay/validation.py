"""Monte Carlo versus analytic cross-checks, reported as pass/fail rows."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .distributions import access_gain_estimate_dist, received_power_estimate_dist
from .montecarlo import (
    SimConfig,
    empirical_outage,
    empirical_throughput,
    ks_distance,
    simulate_access_estimate,
    simulate_received_power,
)
from .power_control import controlled_power
from .throughput import expected_throughput
from .units import ScenarioParams

__all__ = ["DEFAULT_TOLERANCES", "Check", "run_validation"]

DEFAULT_TOLERANCES = {
    "ks": 0.01,
    "outage_sigmas": 3.0,
    "outage_rel": 0.10,
    "throughput_rel": 0.01,
}


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool


def _check(name: str, measured: float, tolerance: float) -> Check:
    return Check(name, measured, tolerance, bool(measured < tolerance))


def run_validation(
    params: ScenarioParams,
    seed: int = 42,
    trials: int = 100_000,
    rho_outs: Optional[Sequence[float]] = None,
    ks_tau: float = 1e-3,
    outage_taus: Sequence[float] = (1e-3, 5e-3, 10e-3),
    throughput_taus: Sequence[float] = (0.5e-3, 1e-3, 2e-3, 5e-3, 10e-3),
    tolerances: Optional[Mapping[str, float]] = None,
    workers: int = 1,
) -> list[Check]:
    """Run every cross-check; each uses its own random stream.

    Outage checks pass when the empirical outage lies within
    ``max(outage_sigmas * binomial std, outage_rel * rho_out)`` of rho_out.
    """
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    rho_outs = list(rho_outs) if rho_outs else [params.rho_out]
    stream = iter(range(1_000_000))

    def cfg() -> SimConfig:
        return SimConfig(trials, master_seed=seed, stream_id=next(stream), workers=workers)

    checks = []
    summary = simulate_received_power(params, ks_tau, cfg())
    dist = received_power_estimate_dist(params, ks_tau)
    checks.append(_check(f"ks_received_power_tau{ks_tau * 1e3:g}ms", ks_distance(summary, dist.cdf), tol["ks"]))

    summary = simulate_access_estimate(params, cfg())
    dist = access_gain_estimate_dist(params)
    checks.append(_check("ks_access_gain", ks_distance(summary, dist.cdf), tol["ks"]))

    for rho in rho_outs:
        scenario = params.replace(rho_out=rho)
        for tau in outage_taus:
            p_cont = controlled_power(scenario, tau).p_cont
            emp = empirical_outage(scenario, tau, p_cont, cfg())
            band = max(tol["outage_sigmas"] * math.sqrt(rho * (1 - rho) / trials), tol["outage_rel"] * rho)
            checks.append(_check(f"outage_rho{rho:g}_tau{tau * 1e3:g}ms", abs(emp - rho), band))

    for tau in throughput_taus:
        analytic = expected_throughput(params, tau).rate
        mc = empirical_throughput(params, tau, cfg())
        checks.append(_check(f"throughput_tau{tau * 1e3:g}ms", abs(mc - analytic) / analytic, tol["throughput_rel"]))
    return checks
