"""
Outage-constrained power control
================================

With the interference channel only known through a noisy received-power
estimate, the secondary transmitter backs off from the ideal power so that
the interference threshold is exceeded with probability rho_out at most.
"""
from underlay import controlled_power, default_scenario, ideal_controlled_power, mw_to_dbm, outage_probability

params = default_scenario()
print(f"ideal power (known channel): {mw_to_dbm(ideal_controlled_power(params)):.2f} dBm")

print("\n tau[ms]  rho_out   p_cont[dBm]  binding  outage")
for rho in (0.01, 0.1):
    scenario = params.replace(rho_out=rho)
    for tau in (1e-4, 1e-3, 1e-2):
        d = controlled_power(scenario, tau)
        out = outage_probability(scenario, tau, d.p_cont)
        print(f"{tau * 1e3:8.1f}  {rho:7.2f}  {mw_to_dbm(d.p_cont):12.3f}  {d.binding.value:>7}  {out:.4f}")

# a weak interference channel lets the transmit cap take over
weak = params.replace(g_p=1e-12, rho_cont=0.1)
d = controlled_power(weak, 1e-3)
print(f"\ngamma=-20 dB, cap -10 dBm: p_cont={mw_to_dbm(d.p_cont):.1f} dBm ({d.binding.value})")
