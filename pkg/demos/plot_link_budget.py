"""
Free-space link budget versus distance
======================================

The closed-form rate that still meets a target Eb/N0 falls with the square
of distance. Doubling the range quarters the rate.
"""

import numpy as np

from uavrelay import link_budget as lb

params = lb.LinkBudgetParams(p_tx=31.6, ebn0=10.0)

for label, value, unit in lb.budget_rows(params, 500.0):
    print(f"{label:16s} {value:12.5g} {unit}")

d = np.geomspace(10, 10_000, 7)
r = np.array([lb.analytic_rate(params, x) for x in d])
print()
print("d [m]      R [Mbit/s]   R(d)/R(2d)")
for x, v in zip(d, r):
    print(f"{x:8.1f}  {v / 1e6:12.4g}  {v / lb.analytic_rate(params, 2 * x):8.3f}")
