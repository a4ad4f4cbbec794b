"""
Monte Carlo validation
======================

Reproducible cross-checks of every analytic quantity.  Trials are split
into blocks with their own Philox streams, so the result does not depend
on the number of workers.
"""
from underlay import default_scenario
from underlay.validation import run_validation

for check in run_validation(default_scenario(), seed=42, trials=100_000):
    print(f"{check.name:28s} {check.measured:.3e} < {check.tolerance:.3e}  {'pass' if check.passed else 'FAIL'}")

# the same suite from the shell:
#   underlay validate --seed 42 --trials 100000 --workers 4 --out validation.csv
