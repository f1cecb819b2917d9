"""
Power allocation strategies side by side
========================================
"""

# %%
import numpy as np

from nomasim.power import PaStrategy, allocate, maxmin_pa
from nomasim.siso import downlink_sinrs

strengths = np.array([100.0, 1.0])
P = 10.0


def rates(pa):
    order = list(pa.assumed_order)
    p = np.asarray(pa.powers)[order]
    r = np.log2(1 + downlink_sinrs(strengths[order], 1.0, p))
    return {u: round(float(x), 3) for u, x in zip(order, r)}


# %%
# Each strategy returns powers indexed by user; user 0 is the strong one.
for kind, kw in [("fixed", {"ratios": (0.2, 0.8)}), ("ftpc", {"decay": 1.0}),
                 ("maxmin", {}), ("sumrate", {}), ("cr_inspired", {}),
                 ("dynamic", {})]:
    pa = allocate(PaStrategy(kind, **kw), strengths, P)
    print(f"{kind:12s} powers {np.round(pa.powers, 3)}  rates {rates(pa)}")

# %%
# Max-min fairness equalizes the two rates; with equal strengths and
# P*s = 2 the strong share has a closed form.
pa, r = maxmin_pa([2.0, 2.0], 1.0)
print(pa.coefficients[0], (np.sqrt(3) - 1) / 2, r)
