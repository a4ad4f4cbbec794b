"""
Estimation-throughput tradeoff
==============================

A longer estimation phase sharpens the power estimate (more transmit power
under the outage constraint) but leaves less of the frame for data.  The
expected rate therefore peaks at an intermediate estimation time.
"""
import numpy as np

from underlay import default_scenario, ideal_throughput, optimize_estimation_time, tradeoff_curve

params = default_scenario()
taus = np.linspace(0.1e-3, 10e-3, 100)
curves = {}
for rho in (0.01, 0.1):
    scenario = params.replace(rho_out=rho)
    curves[rho] = [pt.rate for pt in tradeoff_curve(scenario, taus)]
    best = optimize_estimation_time(scenario)
    print(f"rho_out={rho:<5g} tau_opt={best.tau_opt * 1e3:.4f} ms  R={best.rate_opt:.5f} bits/s/Hz")
print(f"ideal model: {ideal_throughput(params):.5f} bits/s/Hz")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for rho, rates in curves.items():
        ax.plot(taus * 1e3, rates, label=f"estimated, rho_out={rho}")
    ax.axhline(ideal_throughput(params), color="k", ls="--", label="ideal")
    ax.set_xlabel("estimation time [ms]")
    ax.set_ylabel("rate [bits/s/Hz]")
    ax.legend()
    fig.tight_layout()
    fig.savefig("tradeoff.png", dpi=120)
    print("saved tradeoff.png")
except ImportError:
    pass
