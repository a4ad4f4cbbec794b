"""Estimation-throughput tradeoff: R_s(tau) curves and the optimal estimation time."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .numerics import Interval, Tolerance, maximize_scalar
from .power_control import OperatingRegime, operating_regime_gamma
from .throughput import ThroughputPoint, expected_throughput, ideal_throughput
from .units import ScenarioParams, check_tau, db_to_linear

__all__ = [
    "TradeoffError",
    "TradeoffResult",
    "GammaSweepPoint",
    "default_search",
    "tradeoff_curve",
    "optimize_estimation_time",
    "gamma_sweep",
    "regime_at_optimum",
]


class TradeoffError(RuntimeError):
    """Evaluation failure at a particular estimation time."""

    def __init__(self, tau: float, cause: Exception):
        super().__init__(f"throughput evaluation failed at tau={tau!r} s: {cause}")
        self.tau = tau


@dataclass(frozen=True)
class TradeoffResult:
    grid: list[ThroughputPoint]
    tau_opt: float
    rate_opt: float


def _evaluate(params: ScenarioParams, tau: float) -> ThroughputPoint:
    try:
        return expected_throughput(params, tau)
    except Exception as exc:  # re-raised with the offending tau attached
        raise TradeoffError(tau, exc) from exc


def tradeoff_curve(params: ScenarioParams, taus: Sequence[float]) -> list[ThroughputPoint]:
    taus = [float(t) for t in taus]
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ValueError("tau grid must be strictly increasing")
    for tau in taus:
        check_tau(params, tau)
    return [_evaluate(params, tau) for tau in taus]


def default_search(params: ScenarioParams) -> Interval:
    """From 10 samples up to 99% of the frame."""
    return Interval(10.0 / params.f_s, 0.99 * params.T)


def optimize_estimation_time(
    params: ScenarioParams,
    search: Optional[Interval] = None,
    grid_points: int = 64,
) -> TradeoffResult:
    """Maximize the expected rate over tau.

    The objective is not assumed unimodal (the switch between the outage
    rule and the power cap leaves a kink), so a log-spaced grid picks the
    cell before golden-section refinement.
    """
    search = search or default_search(params)
    check_tau(params, search.lo)
    check_tau(params, search.hi)
    cache: dict[float, ThroughputPoint] = {}

    def rate(tau: float) -> float:
        if tau not in cache:
            cache[tau] = _evaluate(params, tau)
        return cache[tau].rate

    tau_opt, rate_opt = maximize_scalar(
        rate, search, Tolerance(rel=1e-9, abs=0.0, max_iters=200), grid_points=grid_points, scale="log"
    )
    inner = np.linspace(math.log(search.lo), math.log(search.hi), grid_points)[1:-1]
    grid_taus = [search.lo] + [math.exp(u) for u in inner] + [search.hi]
    grid = [cache[t] if t in cache else _evaluate(params, t) for t in grid_taus]
    return TradeoffResult(grid=grid, tau_opt=tau_opt, rate_opt=rate_opt)


@dataclass(frozen=True)
class GammaSweepPoint:
    gamma_db: float
    tau_opt: float
    rate_opt: float
    rate_ideal: float


def gamma_sweep(
    params: ScenarioParams,
    gammas_db: Sequence[float],
    search: Optional[Interval] = None,
) -> list[GammaSweepPoint]:
    """Optimal rate versus gamma, varying the interference gain only."""
    out = []
    for gamma_db in gammas_db:
        scenario = params.with_gamma(db_to_linear(gamma_db))
        result = optimize_estimation_time(scenario, search)
        out.append(GammaSweepPoint(float(gamma_db), result.tau_opt, result.rate_opt, ideal_throughput(scenario)))
    return out


def regime_at_optimum(params: ScenarioParams, search: Optional[Interval] = None) -> OperatingRegime:
    """Operating-regime boundary gamma* at the scenario's own optimal tau.

    This is the single gamma* used to split a gamma sweep into the
    saturated part (cap binds) and the outage-limited part.
    """
    result = optimize_estimation_time(params, search)
    return operating_regime_gamma(params, result.tau_opt)
