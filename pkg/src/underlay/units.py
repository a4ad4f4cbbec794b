"""Unit conversions and the scenario record.

All analytic code works in linear units with powers in milliwatts.  dB and
dBm values only appear at the configuration boundary.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

__all__ = [
    "ParameterError",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_mw",
    "mw_to_dbm",
    "ScenarioParams",
    "DerivedQuantities",
    "default_scenario",
    "derive",
]


class ParameterError(ValueError):
    """Scenario field or estimation time outside its valid range."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    if not x > 0:
        raise ParameterError(f"cannot express {x} in dB")
    return 10.0 * math.log10(x)


# dBm and dB share the same map once the power unit is fixed to mW
dbm_to_mw = db_to_linear
mw_to_dbm = linear_to_db


@dataclass(frozen=True)
class ScenarioParams:
    """One short-term operating point of the underlay link.

    Powers are in mW, gains are linear.  ``h_s`` is the (real, signed)
    access-channel amplitude, so the access power gain is ``h_s**2``.
    ``snr_sr_denominator`` replaces the noise power at the secondary
    receiver when interference from the primary transmitter is to be
    accounted for; ``None`` means plain noise ``sigma2``.
    """

    f_s: float = 1e6
    T: float = 0.1
    sigma2: float = 1e-10
    P_tran: float = 1.0
    theta_I: float = 1e-11
    rho_out: float = 0.1
    rho_cont: float = 1.0
    N_s: int = 10
    g_p: float = 1e-10
    h_s: float = 1e-4
    snr_sr_denominator: Optional[float] = None

    def __post_init__(self):
        for name in ("sigma2", "P_tran", "theta_I", "rho_cont", "g_p", "T"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {value}")
        if not (math.isfinite(self.f_s) and self.f_s >= 1):
            raise ParameterError(f"f_s must be >= 1, got {self.f_s}")
        if not 0.0 < self.rho_out < 1.0:
            raise ParameterError(f"rho_out must lie in (0, 1), got {self.rho_out}")
        if int(self.N_s) != self.N_s or self.N_s < 1:
            raise ParameterError(f"N_s must be a positive integer, got {self.N_s}")
        if not math.isfinite(self.h_s) or self.h_s == 0:
            raise ParameterError(f"h_s must be finite and nonzero, got {self.h_s}")
        den = self.snr_sr_denominator
        if den is not None and not (math.isfinite(den) and den > 0):
            raise ParameterError(f"snr_sr_denominator must be > 0, got {den}")

    @property
    def gamma(self) -> float:
        """Received control-power to noise ratio at the ST."""
        return self.g_p * self.P_tran / self.sigma2

    @property
    def g_s(self) -> float:
        return self.h_s * self.h_s

    @property
    def lambda_s(self) -> float:
        return 2.0 * self.N_s * self.g_s / self.sigma2

    @property
    def sr_noise(self) -> float:
        return self.sigma2 if self.snr_sr_denominator is None else self.snr_sr_denominator

    def n_samples(self, tau: float) -> int:
        return max(2, int(round(tau * self.f_s)))

    def replace(self, **changes) -> "ScenarioParams":
        return dataclasses.replace(self, **changes)

    def with_gamma(self, gamma: float) -> "ScenarioParams":
        """Same scenario with the interference gain rescaled to hit ``gamma``."""
        return self.replace(g_p=gamma * self.sigma2 / self.P_tran)


@dataclass(frozen=True)
class DerivedQuantities:
    tau: float
    n_samples: int
    gamma: float
    lambda_p: float
    lambda_s: float


def default_scenario() -> ScenarioParams:
    """Reference operating point: 1 MHz sampling, 100 ms frames, gamma = 0 dB."""
    return ScenarioParams()


def check_tau(params: ScenarioParams, tau: float) -> None:
    lo = 2.0 / params.f_s
    if not (math.isfinite(tau) and tau >= lo * (1 - 1e-12) and tau < params.T):
        raise ParameterError(f"estimation time {tau} s outside [{lo:g}, {params.T:g}) s")


def derive(params: ScenarioParams, tau: float) -> DerivedQuantities:
    """Quantities that depend on the estimation time.

    The estimation window is quantized to ``n = round(tau * f_s)`` samples
    and every estimator law uses ``n`` rather than ``tau * f_s``.
    """
    check_tau(params, tau)
    n = params.n_samples(tau)
    return DerivedQuantities(
        tau=tau,
        n_samples=n,
        gamma=params.gamma,
        lambda_p=n * params.gamma,
        lambda_s=params.lambda_s,
    )
