"""
Cooperative NOMA protocols.

* Basic C-NOMA: a direct broadcast phase followed by ``K-1`` relay slots;
  in slot ``m`` user ``m`` re-broadcasts a superposition of the messages
  of the weaker users ``m+1..K-1``.  Receivers combine all observations
  of a message by maximum ratio combining, i.e. their SINRs add.
* CRS-NOMA: a source superposes two symbols, a relay SIC-decodes and
  forwards the second one at full power.
* Conventional half-duplex decode-and-forward relaying as the baseline.
* Two-stage relay selection.

Users are indexed strongest first throughout (user 0 is the strongest).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .channel import ChannelModel, sample_gains, substream
from .errors import NomaError
from .montecarlo import run_trials, summarize_proportion
from .siso import PowerAllocation

__all__ = [
    "CoopTopology",
    "PhasePowerPlan",
    "OutageSpec",
    "CnomaSinrs",
    "cnoma_sinr_tables",
    "cnoma_combined_sinrs",
    "outage_indicators",
    "CoopScenario",
    "sample_coop_gains",
    "cnoma_outage_mc",
    "RelayLinks",
    "CrsRates",
    "crs_noma_capacity",
    "conventional_df_capacity",
    "crossover_index",
    "RelaySelection",
    "two_stage_relay_select",
]


@dataclass(frozen=True)
class RelayLinks:
    """Source-destination, source-relay and relay-destination amplitude gains."""

    h_sd: complex
    h_sr: complex
    h_rd: complex
    noise_psd: float = 1.0

    @property
    def power_gains(self):
        return tuple(abs(complex(h)) ** 2 for h in (self.h_sd, self.h_sr, self.h_rd))


@dataclass(frozen=True)
class CoopTopology:
    """Link gains of a cooperative cell.

    ``inter_user[m][k]`` (``m < k``) is the amplitude gain from user ``m``
    to user ``k``; entries with ``m >= k`` are ignored.  ``noise_psd`` may be
    a scalar or one value per user.
    """

    bs_gains: tuple
    inter_user: Optional[np.ndarray] = None
    noise_psd: object = 1.0
    relay: Optional[RelayLinks] = None

    def __post_init__(self):
        g = np.asarray(self.bs_gains, dtype=complex)
        if not np.all(np.isfinite(g)):
            raise ValueError("gains must be finite")
        n = np.broadcast_to(np.asarray(self.noise_psd, dtype=float), g.shape)
        if np.any(n <= 0):
            raise ValueError("noise_psd must be > 0")
        object.__setattr__(self, "bs_gains", g)
        if self.inter_user is not None:
            iu = np.asarray(self.inter_user, dtype=complex)
            if iu.shape != (g.size, g.size):
                raise ValueError("inter_user must be a K x K table")
            object.__setattr__(self, "inter_user", iu)


@dataclass(frozen=True)
class PhasePowerPlan:
    """Direct-phase allocation plus one allocation per relay slot.

    ``relay_slots[m]`` holds the powers user ``m`` gives to the messages of
    users ``m+1..K-1`` (in that order).
    """

    direct: PowerAllocation
    relay_slots: tuple = field(default_factory=tuple)

    def __post_init__(self):
        K = len(self.direct.powers)
        slots = tuple(tuple(float(x) for x in (s.powers if isinstance(s, PowerAllocation) else s))
                      for s in self.relay_slots)
        if len(slots) > max(K - 1, 0):
            raise ValueError(f"at most {K - 1} relay slots for {K} users")
        for m, s in enumerate(slots):
            if len(s) != K - 1 - m:
                raise ValueError(f"relay slot {m} needs {K - 1 - m} powers, got {len(s)}")
            if any(x < 0 or not np.isfinite(x) for x in s):
                raise ValueError("relay powers must be finite and non-negative")
        object.__setattr__(self, "relay_slots", slots)

    def scaled(self, factor):
        """The same plan with every power multiplied by ``factor``."""
        d = self.direct
        return PhasePowerPlan(
            PowerAllocation([p * factor for p in d.powers], d.total * factor, d.assumed_order),
            tuple(tuple(p * factor for p in s) for s in self.relay_slots))


@dataclass(frozen=True)
class OutageSpec:
    """Per-user target rates and the prelog applied to every rate.

    ``prelog=None`` means ``1/K``: the direct phase plus ``K-1`` relay slots.
    """

    target_rates: tuple
    prelog: Optional[float] = None

    def __post_init__(self):
        t = tuple(float(x) for x in self.target_rates)
        if any(not x > 0 for x in t):
            raise ValueError("target rates must be > 0")
        if self.prelog is not None and not 0 < self.prelog <= 1:
            raise ValueError("prelog must lie in (0, 1]")
        object.__setattr__(self, "target_rates", t)

    def thresholds(self):
        pre = self.prelog if self.prelog is not None else 1.0 / len(self.target_rates)
        return 2.0 ** (np.asarray(self.target_rates) / pre) - 1.0


class CnomaSinrs(NamedTuple):
    """``[..., k, j]``: SINR of message ``j`` at user ``k`` (NaN for ``j < k``)."""

    direct: np.ndarray
    combined: np.ndarray


def _superposition_sinrs(gain, noise, powers):
    # gain, noise: (..., R) receivers; powers: (S,) messages in ascending
    # power order.  Message s is interfered by the messages ahead of it.
    p = np.asarray(powers, dtype=float)
    ahead = np.cumsum(p) - p
    g = gain[..., :, None]
    return p * g / (ahead * g + noise[..., :, None])


def cnoma_sinr_tables(bs_power_gains, inter_power_gains, noise, plan):
    """Vectorized C-NOMA SINR tables.

    Parameters
    ----------
    bs_power_gains : array, shape (..., K)
        |h_k|^2 from the BS.
    inter_power_gains : array, shape (..., K, K) or None
        ``[..., m, k]`` = |g_{m->k}|^2 for ``m < k``.
    noise : float or array broadcastable to (..., K)
    plan : PhasePowerPlan
    """
    G = np.asarray(bs_power_gains, dtype=float)
    K = G.shape[-1]
    N = np.broadcast_to(np.asarray(noise, dtype=float), G.shape)
    P = np.asarray(plan.direct.powers, dtype=float)
    if list(plan.direct.assumed_order) != list(range(K)):
        raise ValueError("C-NOMA users must be indexed strongest first")
    direct = np.full(G.shape + (K,), np.nan)
    all_msgs = _superposition_sinrs(G, N, P)  # (..., K receivers, K messages)
    mask = np.triu(np.ones((K, K), dtype=bool))
    direct[..., mask] = all_msgs[..., mask]
    combined = direct.copy()
    for m, slot in enumerate(plan.relay_slots):
        if not any(slot):
            continue
        if inter_power_gains is None:
            raise NomaError(f"relay slot {m} is active but no inter-user links are given")
        Gi = np.asarray(inter_power_gains, dtype=float)[..., m, m + 1:]
        if np.any(~np.isfinite(Gi)):
            raise NomaError(f"missing inter-user link from user {m}")
        s = _superposition_sinrs(Gi, N[..., m + 1:], slot)  # receivers m+1.., messages m+1..
        sub = combined[..., m + 1:, m + 1:]
        tri = np.triu(np.ones((K - 1 - m, K - 1 - m), dtype=bool))
        sub[..., tri] += s[..., tri]
    return CnomaSinrs(direct, combined)


def cnoma_combined_sinrs(topology, plan):
    """Direct-phase and MRC-accumulated SINR tables for one topology."""
    K = topology.bs_gains.size
    if K < 2:
        raise ValueError("C-NOMA needs at least two users")
    inter = None if topology.inter_user is None else np.abs(topology.inter_user) ** 2
    noise = np.broadcast_to(np.asarray(topology.noise_psd, dtype=float), (K,))
    return cnoma_sinr_tables(np.abs(topology.bs_gains) ** 2, inter, noise, plan)


def outage_indicators(table, thresholds):
    """Per-user outage: any message user ``k`` must decode falls short.

    User ``k`` decodes messages ``K-1, ..., k`` in turn, so a failure on any
    of them is an outage for ``k``.
    """
    th = np.asarray(thresholds, dtype=float)
    K = th.size
    fail = table < th  # NaN compares False
    mask = np.triu(np.ones((K, K), dtype=bool))
    return np.any(fail & mask, axis=-1)


@dataclass(frozen=True)
class CoopScenario:
    """Fading laws of the BS links and the inter-user links (unit noise)."""

    bs_models: tuple
    inter_models: dict = field(default_factory=dict)  # (m, k) -> ChannelModel
    noise_psd: float = 1.0

    def stream_ids(self):
        K = len(self.bs_models)
        links = sorted(self.inter_models)
        return K, links


def sample_coop_gains(scenario, trials, seed, threads=1):
    """Draw power gains for ``trials`` independent trials.

    Returns ``(bs, inter)`` with shapes ``(trials, K)`` and
    ``(trials, K, K)``; undefined inter-user links are NaN.
    """
    K, links = scenario.stream_ids()

    def trial(t):
        row = np.full(K + K * K, np.nan)
        for k, model in enumerate(scenario.bs_models):
            row[k] = abs(complex(sample_gains(model, substream(seed, t, k)))) ** 2
        for j, (m, k) in enumerate(links):
            h = sample_gains(scenario.inter_models[(m, k)], substream(seed, t, K + j))
            row[K + m * K + k] = abs(complex(h)) ** 2
        return row

    data = run_trials(trial, trials, threads)
    return data[:, :K], data[:, K:].reshape(-1, K, K)


def cnoma_outage_mc(scenario, plan, outage, trials, seed, threads=1, gains=None):
    """Cooperative and non-cooperative outage per user.

    Both schemes use the same draws and the same prelog, so the comparison
    is paired trial by trial.

    Returns
    -------
    dict
        ``{"coop": [MonteCarloSummary per user], "noncoop": [...],
        "indicators": (coop, noncoop)}`` with boolean arrays of shape
        ``(trials, K)``.
    """
    bs, inter = gains if gains is not None else sample_coop_gains(scenario, trials, seed, threads)
    tables = cnoma_sinr_tables(bs, inter, scenario.noise_psd, plan)
    th = outage.thresholds()
    coop = outage_indicators(tables.combined, th)
    noncoop = outage_indicators(tables.direct, th)
    K = bs.shape[-1]
    return {
        "coop": [summarize_proportion(f"outage_coop_user{k}", coop[:, k]) for k in range(K)],
        "noncoop": [summarize_proportion(f"outage_noncoop_user{k}", noncoop[:, k])
                    for k in range(K)],
        "indicators": (coop, noncoop),
    }


# -- relaying with a dedicated relay ----------------------------------------

class CrsRates(NamedTuple):
    sum_rate: float
    rate_x1: float
    rate_x2: float
    relay_x1_sinr: float
    relay_decodes_x1: bool


def crs_noma_capacity(links, a1, a2, total_power, joint_detection=False):
    """Sum rate of NOMA-based cooperative relaying over two slots.

    Slot 1: the source sends ``sqrt(a1 P) x1 + sqrt(a2 P) x2``; the
    destination decodes ``x1`` treating ``x2`` as noise, the relay decodes
    ``x1`` then ``x2``.  Slot 2: the relay forwards ``x2`` at full power.
    With ``joint_detection`` the destination also cancels ``x1`` from its
    slot-1 signal and combines that copy of ``x2`` with the relayed one.

    The relay's first SIC stage is reported (``relay_x1_sinr``,
    ``relay_decodes_x1``) but not folded into the rates.
    """
    if a1 <= a2:
        raise ValueError("x1 must get the larger power share (a1 > a2)")
    if abs(a1 + a2 - 1.0) > 1e-12 or a2 < 0:
        raise ValueError("a1 + a2 must equal 1")
    g_sd, g_sr, g_rd = links.power_gains
    N = links.noise_psd
    P = np.asarray(total_power, dtype=float)
    r1 = 0.5 * np.log2(1.0 + a1 * P * g_sd / (a2 * P * g_sd + N))
    relay_sinr = a1 * P * g_sr / (a2 * P * g_sr + N)
    dest_x2 = P * g_rd
    if joint_detection:
        dest_x2 = dest_x2 + a2 * P * g_sd
    r2 = 0.5 * np.log2(1.0 + np.minimum(a2 * P * g_sr, dest_x2) / N)
    ok = 0.5 * np.log2(1.0 + relay_sinr) >= r1 * (1 - 1e-12)
    if P.ndim == 0:
        return CrsRates(float(r1 + r2), float(r1), float(r2), float(relay_sinr), bool(ok))
    return CrsRates(r1 + r2, r1, r2, relay_sinr, ok)


def conventional_df_capacity(links, total_power):
    """Half-duplex DF rate: relay decode constraint vs. MRC at the destination."""
    g_sd, g_sr, g_rd = links.power_gains
    P = np.asarray(total_power, dtype=float)
    r = 0.5 * np.log2(1.0 + np.minimum(P * g_sr, P * g_sd + P * g_rd) / links.noise_psd)
    return float(r) if P.ndim == 0 else r


def crossover_index(rate_a, rate_b):
    """First sweep index from which ``rate_a > rate_b`` holds to the end.

    Returns None unless ``rate_a`` trails (or ties) somewhere before that
    index, i.e. unless there is a genuine crossover.
    """
    ahead = np.asarray(rate_a) > np.asarray(rate_b)
    if not ahead.size or not ahead[-1]:
        return None
    i = ahead.size - 1
    while i > 0 and ahead[i - 1]:
        i -= 1
    return i if i > 0 else None


class RelaySelection(NamedTuple):
    index: int
    target_met: bool


def two_stage_relay_select(candidates, target_rate_primary):
    """Pick a relay from ``(primary_rate, secondary_rate)`` candidates.

    Stage one keeps the candidates that give the primary user at least its
    target; stage two takes the one with the best secondary rate.  With no
    qualifying candidate the best primary rate wins and ``target_met`` is
    False.  Ties go to the lower index.
    """
    cands = [tuple(map(float, c)) for c in candidates]
    if not cands:
        raise ValueError("need at least one relay candidate")
    ok = [i for i, (p, _) in enumerate(cands) if p >= target_rate_primary]
    if ok:
        return RelaySelection(max(ok, key=lambda i: (cands[i][1], -i)), True)
    return RelaySelection(max(range(len(cands)), key=lambda i: (cands[i][0], -i)), False)
