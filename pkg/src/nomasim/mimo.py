"""
Cluster-based MIMO-NOMA and uplink MMSE-SIC.

Downlink: the BS has ``M`` antennas and serves ``M`` clusters of two users
with ``N`` antennas each.  Zero-forcing detection (``N >= M``) or signal
alignment (``2N > M``) turns every cluster into an independent two-user
SISO-NOMA channel with effective gains ``|v^H H p_i|^2``.

Uplink: ``K`` single-antenna users reach an ``M``-antenna BS; MMSE
filtering plus SIC reaches the sum capacity for every decoding order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import null_space

from .channel import ChannelModel, SicOrdering, sample_gains, substream
from .errors import DegenerateClusterError, DimensionError, NoNullSpaceError
from .siso import RateReport

__all__ = [
    "MimoCluster",
    "ZfRates",
    "SicVerdict",
    "zf_detection_vector",
    "effective_gain",
    "zf_pair_rates",
    "cluster_zf_rates",
    "signal_alignment_vectors",
    "alignment_rows",
    "aligned_precoder",
    "sic_feasibility",
    "uplink_mmse_sic_rates",
    "mmse_sic_sum_capacity",
    "zf_cluster_gains",
    "ergodic_cluster_sum_rates",
]

_RANK_RCOND = 1e-10


def _unit(v):
    return v / np.linalg.norm(v)


def zf_detection_vector(H, cluster):
    """Unit detection vector nulling every BS beam except ``cluster``.

    Among all vectors orthogonal to the other columns of ``H`` the one
    maximizing the own-beam gain is returned.

    Raises
    ------
    DimensionError
        If ``H`` has fewer rows (receive antennas) than columns.
    """
    H = np.asarray(H, dtype=complex)
    n, m = H.shape
    if n < m:
        raise DimensionError(f"zero-forcing needs N >= M, got N={n}, M={m}; "
                             "use signal_alignment_vectors instead")
    others = np.delete(H, cluster, axis=1)
    if others.shape[1] == 0 or not np.any(others):
        Q = np.eye(n, dtype=complex)
    else:
        Q = null_space(others.conj().T, rcond=_RANK_RCOND)
    proj = Q @ (Q.conj().T @ H[:, cluster])
    if np.linalg.norm(proj) <= 1e-300:
        return _unit(Q[:, 0])
    return _unit(proj)


def effective_gain(v, H, cluster, precoder=None):
    """``|v^H H p|^2 / ||v||^2`` with ``p`` the cluster's precoder column."""
    H = np.asarray(H, dtype=complex)
    p = np.eye(H.shape[1])[:, cluster] if precoder is None else np.asarray(precoder)[:, cluster]
    v = np.asarray(v, dtype=complex)
    return float(np.abs(np.vdot(v, H @ p)) ** 2 / np.vdot(v, v).real)


@dataclass(frozen=True)
class MimoCluster:
    """Two users sharing BS beam ``index``.

    ``power_coefficients`` are (strong, weak) shares applied after the users
    are labeled by effective gain; ``snr`` is the transmit SNR rho.
    """

    channels: tuple
    power_coefficients: tuple
    snr: float
    index: int = 0
    precoder: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.channels) != 2:
            raise ValueError("a cluster holds two users")
        hs = tuple(np.asarray(h, dtype=complex) for h in self.channels)
        if hs[0].shape != hs[1].shape or hs[0].ndim != 2:
            raise ValueError("cluster channels must be N x M matrices of equal size")
        a = tuple(float(x) for x in self.power_coefficients)
        if len(a) != 2 or min(a) < 0 or sum(a) > 1 + 1e-12 or not all(np.isfinite(a)):
            raise ValueError("power coefficients must be two non-negative shares, sum <= 1")
        if not self.snr > 0:
            raise ValueError("snr must be > 0")
        object.__setattr__(self, "channels", hs)
        object.__setattr__(self, "power_coefficients", a)


class ZfRates(NamedTuple):
    strong: float
    weak: float
    weak_at_strong: float
    strong_user: int


def zf_pair_rates(g_strong, g_weak, snr, a_strong, a_weak):
    """Rates (strong after SIC, weak, weak's message at the strong user)."""
    gs = np.asarray(g_strong, dtype=float)
    gw = np.asarray(g_weak, dtype=float)
    r_strong = np.log2(1.0 + snr * a_strong * gs)
    r_weak = np.log2(1.0 + snr * a_weak * gw / (snr * a_strong * gw + 1.0))
    r_cross = np.log2(1.0 + snr * a_weak * gs / (snr * a_strong * gs + 1.0))
    return r_strong, r_weak, r_cross


def cluster_zf_rates(cluster, v1, v2):
    g = [effective_gain(v, H, cluster.index, cluster.precoder)
         for v, H in zip((v1, v2), cluster.channels)]
    if g[0] <= 0 and g[1] <= 0:
        raise DegenerateClusterError("both users have zero effective gain")
    strong = 0 if g[0] >= g[1] else 1
    a_s, a_w = cluster.power_coefficients
    rs, rw, rx = zf_pair_rates(g[strong], g[1 - strong], cluster.snr, a_s, a_w)
    return ZfRates(float(rs), float(rw), float(rx), strong)


def signal_alignment_vectors(H1, H2, cluster=None):
    """Detection vectors with ``v1^H H1 == v2^H H2``.

    The stacked vector ``[v1; v2]`` spans the null space of ``[H1^H, -H2^H]``
    and is returned with unit norm.  When ``cluster`` is given, the null-space
    direction maximizing that beam's aligned gain is chosen.

    Raises
    ------
    DimensionError
        Unless ``2N > M``.
    """
    H1 = np.asarray(H1, dtype=complex)
    H2 = np.asarray(H2, dtype=complex)
    if H1.shape != H2.shape:
        raise ValueError("H1 and H2 must have equal shape")
    n, m = H1.shape
    if 2 * n <= m:
        raise DimensionError(f"signal alignment needs 2N > M, got N={n}, M={m}")
    A = np.hstack([H1.conj().T, -H2.conj().T])
    Q = null_space(A, rcond=_RANK_RCOND)
    if Q.shape[1] == 0:
        raise NoNullSpaceError("alignment system has no null space")
    if cluster is None or Q.shape[1] == 1:
        z = Q[:, 0]
    else:
        w = Q[:n].conj().T @ H1[:, cluster]
        z = Q @ w if np.linalg.norm(w) > 0 else Q[:, 0]
    z = _unit(z)
    return z[:n], z[n:]


def alignment_rows(channel_pairs, vector_pairs):
    """Stack ``v^H H`` for every user of every cluster (2 rows per cluster)."""
    rows = []
    for (Ha, Hb), (va, vb) in zip(channel_pairs, vector_pairs):
        rows.append(np.asarray(va).conj() @ np.asarray(Ha))
        rows.append(np.asarray(vb).conj() @ np.asarray(Hb))
    return np.array(rows)


def aligned_precoder(effective_rows, cluster=None):
    """Unit precoder column annihilating the other clusters' aligned rows.

    ``effective_rows`` holds the other clusters' rows, or all ``2M`` rows
    when ``cluster`` names the two rows to drop.

    Raises
    ------
    NoNullSpaceError
        If the rows have full column rank.
    """
    R = np.atleast_2d(np.asarray(effective_rows, dtype=complex))
    m = R.shape[1]
    if cluster is not None and R.shape[0] == 2 * m:
        R = np.delete(R, [2 * cluster, 2 * cluster + 1], axis=0)
    if R.size == 0 or not np.any(R):
        return np.eye(m, dtype=complex)[:, 0]
    Q = null_space(R, rcond=_RANK_RCOND)
    if Q.shape[1] == 0:
        raise NoNullSpaceError(f"{R.shape[0]}x{m} row matrix has full column rank")
    return _unit(Q[:, 0])


class SicVerdict(NamedTuple):
    user: int
    feasible: bool
    violation: Optional[tuple] = None  # (k, n): user n cannot decode user k


def sic_feasibility(sinr_table, thresholds):
    """Check that every user's SINR target is met wherever it must be decoded.

    ``sinr_table[n][k]`` is the SINR of user ``k``'s signal at user ``n``
    (``k <= n``, ascending decoding order, 0-based).  User ``k`` is feasible
    iff ``thresholds[k] <= min(sinr_table[n][k] for n >= k)``.
    """
    K = len(thresholds)
    if len(sinr_table) != K:
        raise ValueError("table needs one row per user")
    out = []
    for k in range(K):
        bad = next((n for n in range(k, K) if thresholds[k] > sinr_table[n][k]), None)
        out.append(SicVerdict(k, bad is None, None if bad is None else (k, bad)))
    return out


def _uplink_inputs(channels, powers, noise_psd):
    Hm = np.atleast_2d(np.asarray(channels, dtype=complex))
    P = np.asarray(powers, dtype=float)
    if P.shape != (Hm.shape[0],):
        raise ValueError("one power per user required")
    if not noise_psd > 0:
        raise ValueError("noise_psd must be > 0")
    return Hm, P


def mmse_sic_sum_capacity(channels, powers, noise_psd):
    """``log2 det(I + sum_k P_k h_k h_k^H / N0)``."""
    Hm, P = _uplink_inputs(channels, powers, noise_psd)
    m = Hm.shape[1]
    C = np.eye(m) + (Hm.T * P) @ Hm.conj() / noise_psd
    return float(np.linalg.slogdet(C)[1] / np.log(2.0))


def uplink_mmse_sic_rates(channels, powers, noise_psd, order=None):
    """Per-user rates of MMSE-SIC decoding in ``order`` (first decoded first).

    The user decoded at stage ``t`` sees the not-yet-decoded users as
    coloured interference: ``SINR = P_k h_k^H Q^-1 h_k`` with
    ``Q = N0 I + sum_{later j} P_j h_j h_j^H``.
    """
    Hm, P = _uplink_inputs(channels, powers, noise_psd)
    K, m = Hm.shape
    order = SicOrdering.identity(K) if order is None else (
        order if isinstance(order, SicOrdering) else SicOrdering(order))
    if len(order) != K:
        raise ValueError("order must cover every user")
    rates = np.empty(K)
    seq = list(order)
    for t, k in enumerate(seq):
        Q = noise_psd * np.eye(m, dtype=complex)
        for j in seq[t + 1:]:
            Q += P[j] * np.outer(Hm[j], Hm[j].conj())
        h = Hm[k]
        sinr = P[k] * np.vdot(h, np.linalg.solve(Q, h)).real
        rates[k] = np.log2(1.0 + sinr)
    return RateReport.from_rates(rates)


# -- ergodic comparison ------------------------------------------------------

def zf_cluster_gains(seed, trial, n_rx, n_tx):
    """Unit-mean ZF effective gains of the two users of every cluster.

    Returns an ``(n_tx, 2)`` array; column 0 is the near user, column 1 the
    far user before any attenuation is applied.
    """
    model = ChannelModel.rayleigh(shape=(n_rx, n_tx))
    g = np.empty((n_tx, 2))
    for i in range(n_tx):
        for k in range(2):
            H = sample_gains(model, substream(seed, trial, 2 * i + k))
            v = zf_detection_vector(H, i)
            g[i, k] = effective_gain(v, H, i)
    return g


def ergodic_cluster_sum_rates(gains, attenuation, snr, alphas=(0.25, 0.75)):
    """Per-trial cluster sum rates of MIMO-NOMA and time-shared MIMO-OMA.

    ``gains`` comes from stacking :func:`zf_cluster_gains` over trials; the
    far user's gain is scaled by ``attenuation``.  In OMA the two users
    split the block 50/50, each with the full cluster power.

    Returns
    -------
    noma, oma : ndarray
        Shape ``gains.shape[:-1]``.
    """
    near = gains[..., 0]
    far = gains[..., 1] * attenuation
    gs = np.maximum(near, far)
    gw = np.minimum(near, far)
    rs, rw, _ = zf_pair_rates(gs, gw, snr, *alphas)
    noma = rs + rw
    oma = 0.5 * np.log2(1.0 + snr * gs) + 0.5 * np.log2(1.0 + snr * gw)
    return noma, oma
