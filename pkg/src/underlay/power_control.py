"""Controlled transmit power, outage probability and the operating regime."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import GammaDist, moment_match, NoncentralChiSquare, received_power_estimate_dist
from .numerics import Interval, NoSignChangeError, Tolerance, find_root, reg_upper_gamma
from .units import ScenarioParams, check_tau, db_to_linear, linear_to_db

__all__ = [
    "Binding",
    "PowerDecision",
    "OperatingRegime",
    "NoRegimeBoundary",
    "ideal_controlled_power",
    "controlled_power",
    "outage_probability",
    "regime_residual",
    "operating_regime_gamma",
]


class Binding(enum.Enum):
    OUTAGE_RULE = "outage"
    TRANSMIT_CAP = "cap"


@dataclass(frozen=True)
class PowerDecision:
    p_cont: float
    binding: Binding
    quantile_point: float  # (1 - rho_out) quantile of P_hat, mW


@dataclass(frozen=True)
class OperatingRegime:
    gamma_star: float
    tau: float

    @property
    def gamma_star_db(self) -> float:
        return linear_to_db(self.gamma_star)


class NoRegimeBoundary(NoSignChangeError):
    """The regime residual keeps one sign over the whole gamma bracket."""


def ideal_controlled_power(params: ScenarioParams, capped: bool = False) -> float:
    """theta_I / |h_p|^2, the power that puts exactly theta_I at the PR.

    Uncapped by default; ``capped=True`` applies the rho_cont limit.
    """
    p = params.theta_I / params.g_p
    return min(p, params.rho_cont) if capped else p


def controlled_power(params: ScenarioParams, tau: float) -> PowerDecision:
    """Largest power meeting the outage constraint, then clipped to rho_cont.

    With ``q`` the (1 - rho_out) quantile of the received-power estimate,
    the outage rule gives ``theta_I * P_tran / (q - sigma2)``.  When
    ``q <= sigma2`` the rule places no limit and the cap applies.
    """
    dist = received_power_estimate_dist(params, tau)
    q = dist.quantile(1.0 - params.rho_out)
    excess = q - params.sigma2
    if excess <= 0:
        return PowerDecision(params.rho_cont, Binding.TRANSMIT_CAP, q)
    candidate = params.theta_I * params.P_tran / excess
    if candidate >= params.rho_cont:
        return PowerDecision(params.rho_cont, Binding.TRANSMIT_CAP, q)
    return PowerDecision(candidate, Binding.OUTAGE_RULE, q)


def outage_probability(params: ScenarioParams, tau: float, p_cont: float) -> float:
    """P[(P_hat - sigma2) / P_tran * p_cont >= theta_I] under the Gamma law."""
    if not p_cont > 0:
        raise ValueError(f"p_cont must be > 0, got {p_cont}")
    dist = received_power_estimate_dist(params, tau)
    threshold = params.theta_I * params.P_tran / p_cont + params.sigma2
    return dist.sf(threshold)


def _estimate_law(params: ScenarioParams, n: int, gamma: float) -> GammaDist:
    return moment_match(NoncentralChiSquare(n, n * gamma, params.sigma2 / n))


def regime_residual(params: ScenarioParams, tau: float, gamma: float) -> float:
    """Outage at full power rho_cont minus rho_out, as a function of gamma.

    Negative means the transmit cap binds (gamma below the boundary).
    """
    check_tau(params, tau)
    dist = _estimate_law(params, params.n_samples(tau), gamma)
    threshold = params.theta_I * params.P_tran / params.rho_cont + params.sigma2
    return reg_upper_gamma(dist.shape, threshold / dist.scale) - params.rho_out


def operating_regime_gamma(
    params: ScenarioParams,
    tau: float,
    bracket_db: tuple[float, float] = (-60.0, 60.0),
    step_db: float = 0.5,
) -> OperatingRegime:
    """gamma* where the cap stops binding, for estimation time ``tau``.

    The residual is scanned in ``step_db`` steps over ``bracket_db``; the
    first sign change is then refined by Brent's method in dB.
    """
    check_tau(params, tau)

    def f(gamma_db: float) -> float:
        return regime_residual(params, tau, db_to_linear(gamma_db))

    grid = np.arange(bracket_db[0], bracket_db[1] + 0.5 * step_db, step_db)
    prev_x, prev_f = grid[0], f(grid[0])
    if prev_f == 0.0:
        return OperatingRegime(db_to_linear(prev_x), tau)
    for x in grid[1:]:
        fx = f(x)
        if math.copysign(1.0, fx) != math.copysign(1.0, prev_f) or fx == 0.0:
            root_db = find_root(f, Interval(prev_x, x), Tolerance(rel=0.0, abs=1e-9))
            return OperatingRegime(db_to_linear(root_db), tau)
        prev_x, prev_f = x, fx
    f_lo = f(grid[0])
    raise NoRegimeBoundary(
        f"no operating-regime boundary in [{bracket_db[0]}, {bracket_db[1]}] dB at tau={tau} s "
        f"(residual {f_lo:.3g} .. {prev_f:.3g})",
        f_lo=f_lo,
        f_hi=prev_f,
    )
