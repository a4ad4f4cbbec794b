"""
Estimator laws and their Gamma approximations
=============================================

The received-power estimate at the secondary transmitter and the estimated
access gain are both scaled non-central chi-squared variables.  Each is
replaced by the Gamma law with the same mean and variance; here we look at
the parameters and at how well the approximation fits simulated samples.
"""
from underlay import default_scenario
from underlay.distributions import (
    access_gain_estimate_dist,
    access_gain_estimate_exact,
    received_power_estimate_dist,
)
from underlay.montecarlo import SimConfig, ks_distance, simulate_access_estimate, simulate_received_power

params = default_scenario()

for tau in (1e-4, 1e-3, 1e-2):
    law = received_power_estimate_dist(params, tau)
    print(f"tau={tau * 1e3:5.1f} ms  shape={law.shape:10.3f}  scale={law.scale:.4e} mW  mean={law.mean:.4e} mW")

law = access_gain_estimate_dist(params)
exact = access_gain_estimate_exact(params)
print(f"\naccess gain: shape={law.shape:.3f} scale={law.scale:.4e} mean={law.mean:.6e} (exact {exact.mean:.6e})")

#-------------------------------------------------------------------------
# Fit quality against simulated estimates
#-------------------------------------------------------------------------
sim = simulate_received_power(params, 1e-3, SimConfig(100_000, master_seed=1), method="signal")
print(f"\nKS(received power, tau=1 ms) = {ks_distance(sim, received_power_estimate_dist(params, 1e-3).cdf):.4f}")
sim = simulate_access_estimate(params, SimConfig(100_000, master_seed=2))
print(f"KS(access gain)              = {ks_distance(sim, law.cdf):.4f}")
