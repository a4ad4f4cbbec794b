"""
Saturation in gamma
===================

Sweeping gamma through the interference gain: once the cap binds the
optimal rate stops improving, however weak the interference channel.
With a -10 dBm cap the gap to the ideal model becomes large.
"""
import numpy as np

from underlay import default_scenario, gamma_sweep, regime_at_optimum

params = default_scenario()
gammas = np.arange(-20.0, 10.5, 2.0)
for rho_cont in (1.0, 0.1):
    scenario = params.replace(rho_cont=rho_cont)
    star = regime_at_optimum(scenario).gamma_star_db
    print(f"\nrho_cont={10 * np.log10(rho_cont):.0f} dBm, gamma*={star:.2f} dB")
    print(" gamma[dB]  tau_opt[ms]  R_est    R_ideal")
    for pt in gamma_sweep(scenario, gammas):
        print(f"{pt.gamma_db:9.1f}  {pt.tau_opt * 1e3:11.3f}  {pt.rate_opt:7.4f}  {pt.rate_ideal:7.4f}")
