"""Outage-constrained underlay spectrum sharing with estimated channels.

Analytic power control, outage, throughput and estimation-time optimum,
plus Monte Carlo ground truth for each of them.
"""
__version__ = "0.1.0"

from .numerics import (
    ConvergenceError,
    DomainError,
    Interval,
    NoSignChangeError,
    Tolerance,
    find_root,
    integrate,
    inv_reg_lower_gamma,
    log_gamma,
    maximize_scalar,
    reg_lower_gamma,
    reg_upper_gamma,
)
from .units import (
    DerivedQuantities,
    ParameterError,
    ScenarioParams,
    db_to_linear,
    dbm_to_mw,
    default_scenario,
    derive,
    linear_to_db,
    mw_to_dbm,
)
from .distributions import (
    GammaDist,
    NoncentralChiSquare,
    access_gain_estimate_dist,
    moment_match,
    received_power_estimate_dist,
)
from .power_control import (
    Binding,
    NoRegimeBoundary,
    OperatingRegime,
    PowerDecision,
    controlled_power,
    ideal_controlled_power,
    operating_regime_gamma,
    outage_probability,
)
from .throughput import ThroughputPoint, expected_throughput, ideal_throughput
from .tradeoff import (
    TradeoffResult,
    gamma_sweep,
    optimize_estimation_time,
    regime_at_optimum,
    tradeoff_curve,
)
from .montecarlo import SimConfig, SimSummary, empirical_outage, empirical_throughput
