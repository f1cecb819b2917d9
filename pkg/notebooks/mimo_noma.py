"""
Cluster-based MIMO-NOMA
=======================

Zero-forcing detection, signal alignment and the ergodic comparison with
time-shared MIMO-OMA.
"""

# %%
import numpy as np

from nomasim.mimo import (aligned_precoder, alignment_rows,
                          ergodic_cluster_sum_rates, signal_alignment_vectors,
                          uplink_mmse_sic_rates, zf_cluster_gains,
                          zf_detection_vector)

rng = np.random.default_rng(0)


def cn(*shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# %%
# With N >= M receive antennas a detection vector can null every other beam.
H = cn(3, 2)
v = zf_detection_vector(H, 0)
print("leakage onto beam 1:", abs(np.vdot(v, H[:, 1])))

# %%
# With fewer antennas, align the two users of each cluster instead and let
# the precoder remove the other clusters.
M, N = 3, 2
pairs = [(cn(N, M), cn(N, M)) for _ in range(M)]
vecs = [signal_alignment_vectors(a, b, cluster=i) for i, (a, b) in enumerate(pairs)]
rows = alignment_rows(pairs, vecs)
p0 = aligned_precoder(rows, cluster=0)
print("residual on other clusters:", np.abs(rows[2:] @ p0).max())

# %%
# Uplink MMSE-SIC: the decoding order moves rate between users but not the sum.
Hu = cn(3, 2)
for order in [(0, 1, 2), (2, 1, 0)]:
    rep = uplink_mmse_sic_rates(Hu, [1.0, 1.0, 1.0], 1.0, order)
    print(order, np.round(rep.per_user_rate, 3), round(rep.sum_rate, 6))

# %%
# Ergodic gap between NOMA and OMA grows as the far user gets weaker.
gains = np.array([zf_cluster_gains(1, t, 2, 2) for t in range(2000)])
for att in (1.0, 0.1, 0.01):
    noma, oma = ergodic_cluster_sum_rates(gains, att, 10 ** 3)
    print(f"attenuation {att:5}: gap {np.mean(noma - oma):.3f} bit/s/Hz")
