"""
One victim ship behind a blocking ship
======================================

A lone victim sails alongshore while a large stationary ship sits between it
and the shore base station. We compare the four relay architectures slot by
slot.
"""

import numpy as np

from uavrelay import Architecture, default_config
from uavrelay.scenario import compare_architectures

cfg = default_config("single")
results = compare_architectures(cfg)

# per-slot rate in bit/s/Hz, one column per architecture
print("slot " + "".join(f"{a.name:>8s}" for a in Architecture))
table = np.column_stack([results[a].mean_rate_per_slot for a in Architecture])
for j, row in enumerate(table):
    print(f"{j:4d} " + "".join(f"{v:8.3f}" for v in row))

# the hovering relay pays for hovering every second, the perched one doesn't
for a in (Architecture.FPR, Architecture.LSMR):
    print(f"{a.name} total energy: {results[a].runs[0].cumulative_energy[-1]:.1f} J")

# where the fixed relay ended up, including the altitude it needed for LoS
print("FPR pose:", results[Architecture.FPR].runs[0].slots[0].uav_pose.position)
