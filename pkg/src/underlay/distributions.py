"""Estimator laws: exact non-central chi-squared and moment-matched Gamma.

Two estimators drive the analysis:

* the received-power estimate at the ST, the sample mean of ``n`` squared
  real observations, for which ``(n / sigma2) * P_hat ~ ncx2(n, n * gamma)``;
* the pilot-based access gain ``|h_s_hat|^2`` with
  ``h_s_hat ~ Normal(h_s, sigma2 / (2 N_s))``, i.e.
  ``|h_s_hat|^2 / c ~ ncx2(1, lambda_s)`` for ``c = sigma2 / (2 N_s)``.

Both are replaced by Gamma laws with the same mean and variance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import DomainError, inv_reg_lower_gamma, reg_lower_gamma, reg_upper_gamma, _prefactor
from .units import ScenarioParams, derive

__all__ = [
    "NoncentralChiSquare",
    "GammaDist",
    "moment_match",
    "received_power_estimate_exact",
    "received_power_estimate_dist",
    "access_gain_estimate_exact",
    "access_gain_estimate_dist",
    "gamma_cdf",
    "gamma_quantile",
    "gamma_sample",
]


@dataclass(frozen=True)
class NoncentralChiSquare:
    """``scale * ncx2(dof, noncentrality)``."""

    dof: float
    noncentrality: float
    scale: float = 1.0

    def __post_init__(self):
        if not self.dof > 0 or not self.noncentrality >= 0 or not self.scale > 0:
            raise DomainError(f"invalid ncx2 parameters {self}")

    @property
    def mean(self) -> float:
        return self.scale * (self.dof + self.noncentrality)

    @property
    def variance(self) -> float:
        return self.scale**2 * 2.0 * (self.dof + 2.0 * self.noncentrality)

    def sample(self, rng: np.random.Generator, size=None):
        if self.noncentrality == 0:
            draws = rng.chisquare(self.dof, size)
        else:
            draws = rng.noncentral_chisquare(self.dof, self.noncentrality, size)
        return self.scale * draws


@dataclass(frozen=True)
class GammaDist:
    """Gamma law with ``shape`` a and ``scale`` b (same units as the variate)."""

    shape: float
    scale: float

    def __post_init__(self):
        if not (self.shape > 0 and math.isfinite(self.shape)):
            raise DomainError(f"gamma shape must be > 0, got {self.shape}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"gamma scale must be > 0, got {self.scale}")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale**2

    def cdf(self, x):
        if np.ndim(x) == 0:
            return 0.0 if x <= 0 else reg_lower_gamma(self.shape, x / self.scale)
        t = np.maximum(np.asarray(x, dtype=float), 0.0) / self.scale
        return reg_lower_gamma(self.shape, t)

    def sf(self, x):
        if np.ndim(x) == 0:
            return 1.0 if x <= 0 else reg_upper_gamma(self.shape, x / self.scale)
        t = np.maximum(np.asarray(x, dtype=float), 0.0) / self.scale
        return reg_upper_gamma(self.shape, t)

    def pdf(self, x: float) -> float:
        if x <= 0:
            return 0.0
        t = x / self.scale
        return _prefactor(self.shape, t) / (t * self.scale)

    def quantile(self, p: float) -> float:
        if not 0.0 <= p < 1.0:
            raise DomainError(f"quantile needs 0 <= p < 1, got {p}")
        return self.scale * inv_reg_lower_gamma(self.shape, p)

    def sample(self, rng: np.random.Generator, size=None):
        # numpy's standard_gamma: Marsaglia-Tsang squeeze, boosted for a < 1
        return self.scale * rng.standard_gamma(self.shape, size)


def gamma_cdf(d: GammaDist, x):
    return d.cdf(x)


def gamma_quantile(d: GammaDist, p: float) -> float:
    return d.quantile(p)


def gamma_sample(d: GammaDist, rng: np.random.Generator, size=None):
    return d.sample(rng, size)


def moment_match(ncx2: NoncentralChiSquare) -> GammaDist:
    """Gamma law with the mean and variance of ``ncx2``."""
    k, lam = ncx2.dof, ncx2.noncentrality
    return GammaDist(
        shape=(k + lam) ** 2 / (2.0 * (k + 2.0 * lam)),
        scale=ncx2.scale * 2.0 * (k + 2.0 * lam) / (k + lam),
    )


def received_power_estimate_exact(params: ScenarioParams, tau: float) -> NoncentralChiSquare:
    d = derive(params, tau)
    return NoncentralChiSquare(d.n_samples, d.lambda_p, params.sigma2 / d.n_samples)


def received_power_estimate_dist(params: ScenarioParams, tau: float) -> GammaDist:
    """Gamma approximation of the received-power estimate P_hat.

    shape ``n (1+g)^2 / (2+4g)``, scale ``sigma2 (2+4g) / (n (1+g))`` with
    ``g = gamma`` and ``n`` the quantized sample count; mean ``sigma2 (1+g)``.
    """
    return moment_match(received_power_estimate_exact(params, tau))


def access_gain_estimate_exact(params: ScenarioParams) -> NoncentralChiSquare:
    return NoncentralChiSquare(1.0, params.lambda_s, params.sigma2 / (2.0 * params.N_s))


def access_gain_estimate_dist(params: ScenarioParams) -> GammaDist:
    """Gamma approximation of the estimated access gain ``|h_s_hat|^2``.

    Mean ``h_s^2 + sigma2 / (2 N_s)``.
    """
    return moment_match(access_gain_estimate_exact(params))
