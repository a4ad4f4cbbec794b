"""
Operating regime
================

Below gamma* the transmit cap binds and estimation buys nothing; above it
the outage rule sets the power.  As the estimate sharpens gamma* climbs to
theta_I P_tran / (rho_cont sigma2).
"""
import numpy as np

from underlay import NoRegimeBoundary, default_scenario, operating_regime_gamma

params = default_scenario()
taus = np.array([0.1, 0.3, 1, 3, 10, 30, 99]) * 1e-3
for rho_cont in (1.0, 0.1):
    scenario = params.replace(rho_cont=rho_cont)
    cells = []
    for tau in taus:
        try:
            cells.append(f"{operating_regime_gamma(scenario, tau).gamma_star_db:7.2f}")
        except NoRegimeBoundary:
            cells.append("   none")  # noise alone already breaks the outage budget
    print(f"rho_cont={10 * np.log10(rho_cont):4.0f} dBm:", " ".join(cells))

long_frame = params.replace(T=2.0)
for rho_cont in (1.0, 0.1):
    star = operating_regime_gamma(long_frame.replace(rho_cont=rho_cont), 1.0)
    print(f"10^6 samples, rho_cont={10 * np.log10(rho_cont):.0f} dBm: gamma*={star.gamma_star_db:.3f} dB")
