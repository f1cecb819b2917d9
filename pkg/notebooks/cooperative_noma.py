"""
Cooperative NOMA and NOMA relaying
==================================
"""

# %%
import numpy as np

from nomasim.channel import ChannelModel
from nomasim.coop import (CoopScenario, OutageSpec, PhasePowerPlan, RelayLinks,
                          cnoma_outage_mc, conventional_df_capacity,
                          crossover_index, crs_noma_capacity)
from nomasim.siso import PowerAllocation

# %%
# Two users over Rayleigh fading; the strong user relays the weak user's
# message in a second slot, and the weak user combines both copies.
scen = CoopScenario((ChannelModel.rayleigh(1.0), ChannelModel.rayleigh(0.01)),
                    {(0, 1): ChannelModel.rayleigh(0.01)})
plan = PhasePowerPlan(PowerAllocation.ordered([0.2, 0.8], 1.0), ((1.0,),))
spec = OutageSpec((1.0, 1.0))
for db in (20, 30, 40):
    res = cnoma_outage_mc(scen, plan.scaled(10 ** (db / 10)), spec, 20000, seed=1)
    print(f"{db} dB  weak user outage: coop {res['coop'][1].mean:.4f}  "
          f"non-coop {res['noncoop'][1].mean:.4f}")

# %%
# A dedicated relay: NOMA relaying sends two symbols in two slots and
# overtakes plain decode-and-forward once the SNR is high enough.
links = RelayLinks(np.sqrt(0.1), 1.0, np.sqrt(0.1))
db = np.arange(0, 41, 2.0)
crs = crs_noma_capacity(links, 0.8, 0.2, 10 ** (db / 10)).sum_rate
df = conventional_df_capacity(links, 10 ** (db / 10))
print("NOMA relaying ahead from", db[crossover_index(crs, df)], "dB")
