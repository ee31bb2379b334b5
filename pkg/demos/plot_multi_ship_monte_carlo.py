"""
A fleet of victims, 100 Monte Carlo runs
========================================

Twenty ships are dropped at random over the area and sail alongshore. Each
run uses its own seed; every architecture sees the same fleet.
"""

import numpy as np

from uavrelay import Architecture, default_config
from uavrelay.metrics import rate_cdf
from uavrelay.scenario import compare_architectures

cfg = default_config("multi")
results = compare_architectures(cfg, n_runs=100)

for a in Architecture:
    agg = results[a]
    cdf = rate_cdf(agg.pooled_rates)
    print(f"{a.name:5s} mean {agg.mean_rate:6.3f} bit/s/Hz   "
          f"median {cdf.quantile(0.5):6.3f}   energy {agg.mean_cumulative_energy[-1]:9.1f} J")

# cumulative energy curves, averaged over runs
slots = np.arange(cfg.n_slots)
for a in (Architecture.FPR, Architecture.CFMR, Architecture.LSMR):
    e = results[a].mean_cumulative_energy
    print(a.name, " ".join(f"{v / 1e3:.0f}" for v in e[::4]), "kJ at slots", slots[::4])
