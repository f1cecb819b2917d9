"""
Two-user downlink: NOMA against FDMA
====================================

A strong user (|h| = 10) and a weak user (|h| = 1) share 10 W over a
unit-noise channel.
"""

# %%
import numpy as np

from nomasim import PowerAllocation, UserChannel
from nomasim.siso import (downlink_noma_rates, rate_region_sweep,
                          sum_capacity_vs_bandwidth)

strong, weak = UserChannel.scalar(10.0), UserChannel.scalar(1.0)

# %%
# Give the weak user just enough power for 1 bit/s/Hz and look at what is
# left for the strong user.
pa = PowerAllocation.ordered([4.5, 5.5], 10.0)
print(downlink_noma_rates([strong, weak], pa))

# %%
# Trace both regions.  At R_weak = 1 the NOMA strong rate is far above the
# equal-bandwidth FDMA one.
region = rate_region_sweep(strong, weak, 10.0, 401)
for series in ("noma", "oma_equal_bw"):
    print(series, round(region.strong_rate_at(series, 1.0), 3))

# %%
# The OMA frontier optimized over both band and power split still sits
# inside the NOMA boundary.
r_w, r_s = region.oma_boundary.T
print("max FDMA frontier at R_weak=1:", round(float(np.interp(1.0, r_w, r_s)), 3))

# %%
# Sum rate against the strong user's band share: NOMA does not depend on
# the split and stays on top everywhere.
curve = sum_capacity_vs_bandwidth(strong, weak, 10.0, pa, 11)
for w, n, o in zip(curve.bandwidth_strong, curve.sum_noma, curve.sum_oma):
    print(f"W={w:.1f}  NOMA {n:.3f}  OMA {o:.3f}")
