"""
Achievable rates of single-antenna NOMA and the FDMA baseline.

All rates are in bit/s/Hz over a unit bandwidth.  Downlink NOMA assumes
perfect SIC: the user at decoding position ``t`` is interfered only by
the (lower-power) signals of the users ahead of it in the order.  Uplink
NOMA decodes along the order at a single receiver, treating the users not
yet decoded as noise.

The array-level helpers (:func:`downlink_sinrs`, :func:`uplink_sinrs`,
:func:`oma_rates`) take users along the last axis and broadcast over any
leading batch axes; the Monte Carlo code uses them directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .channel import SicOrdering
from .errors import OrderingViolationError

__all__ = [
    "PowerAllocation",
    "BandwidthSplit",
    "RateReport",
    "downlink_sinrs",
    "uplink_sinrs",
    "oma_rates",
    "downlink_noma_rates",
    "downlink_oma_rates",
    "uplink_noma_rates",
    "noma_boundary_strong_rate",
    "oma_boundary_strong_rate",
    "RateRegion",
    "rate_region_sweep",
    "SumCapacityCurve",
    "sum_capacity_vs_bandwidth",
]

_ORDER_RTOL = 1e-12


@dataclass(frozen=True)
class PowerAllocation:
    """Per-user transmit powers (indexed by user) and the SIC order they assume."""

    powers: tuple
    total: float
    assumed_order: SicOrdering
    notes: tuple = ()

    def __post_init__(self):
        p = tuple(float(x) for x in self.powers)
        if not all(np.isfinite(x) and x >= 0 for x in p):
            raise ValueError("powers must be finite and non-negative")
        if not self.total > 0:
            raise ValueError("total power must be > 0")
        if sum(p) > self.total + 1e-12 * max(1.0, self.total):
            raise ValueError(f"powers sum to {sum(p)} > total {self.total}")
        order = self.assumed_order
        if not isinstance(order, SicOrdering):
            order = SicOrdering(tuple(order))
        if len(order) != len(p):
            raise ValueError("assumed_order length differs from powers")
        object.__setattr__(self, "powers", p)
        object.__setattr__(self, "assumed_order", order)
        object.__setattr__(self, "notes", tuple(self.notes))

    @property
    def coefficients(self):
        """Power shares alpha_i = P_i / P."""
        return tuple(x / self.total for x in self.powers)

    @classmethod
    def ordered(cls, powers, total=None):
        """Allocation whose users are already indexed strongest first."""
        powers = tuple(powers)
        if total is None:
            total = sum(powers)
        return cls(powers, total, SicOrdering.identity(len(powers)))


@dataclass(frozen=True)
class BandwidthSplit:
    fractions: tuple

    def __post_init__(self):
        f = tuple(float(x) for x in self.fractions)
        if any(not 0.0 <= x <= 1.0 for x in f):
            raise ValueError("bandwidth fractions must lie in [0, 1]")
        if abs(sum(f) - 1.0) > 1e-12:
            raise ValueError(f"bandwidth fractions sum to {sum(f)}, not 1")
        object.__setattr__(self, "fractions", f)


@dataclass(frozen=True)
class RateReport:
    per_user_rate: tuple
    sum_rate: float
    flags: tuple = ()

    @classmethod
    def from_rates(cls, rates, flags=()):
        rates = tuple(float(r) for r in rates)
        return cls(rates, float(np.sum(rates)), tuple(flags))


# -- array kernels -----------------------------------------------------------

def downlink_sinrs(gains, noise, powers):
    """Downlink SINRs with users along the last axis in decoding order.

    ``gains`` are power gains |h|^2.  Position 0 is the strongest user and
    sees no intra-cluster interference; position ``t`` is interfered by the
    powers at positions ``< t``.
    """
    g = np.asarray(gains, dtype=float)
    n = np.asarray(noise, dtype=float)
    p = np.asarray(powers, dtype=float)
    ahead = np.cumsum(p, axis=-1) - p
    return p * g / (ahead * g + n)


def uplink_sinrs(gains, noise, powers):
    """Uplink SINRs at a common receiver, users in decoding order.

    Position ``t`` is interfered by the received powers at positions ``> t``.
    """
    rx = np.asarray(powers, dtype=float) * np.asarray(gains, dtype=float)
    behind = np.flip(np.cumsum(np.flip(rx, axis=-1), axis=-1), axis=-1) - rx
    return rx / (behind + np.asarray(noise, dtype=float))


def oma_rates(gains, noise, powers, fractions):
    """FDMA rates ``W_i log2(1 + P_i G_i / (W_i N_i))``; a zero band gives rate 0."""
    g, n, p, w = np.broadcast_arrays(*(np.asarray(a, dtype=float)
                                       for a in (gains, noise, powers, fractions)))
    out = np.zeros(g.shape)
    live = w > 0
    out[live] = w[live] * np.log2(1.0 + p[live] * g[live] / (w[live] * n[live]))
    return out


# -- report-level operations -------------------------------------------------

def _check(channels, pa):
    channels = list(channels)
    if len(channels) != len(pa.powers):
        raise ValueError(f"{len(channels)} channels but {len(pa.powers)} powers")
    for ch in channels:
        if ch.form != "scalar":
            raise ValueError("SISO rates need scalar-gain channels")
    return channels


def _power_flags(pa):
    ordered = [pa.powers[u] for u in pa.assumed_order]
    if any(b < a for a, b in zip(ordered, ordered[1:])):
        return ("inverted_power_order",)
    return ()


def downlink_noma_rates(channels, pa):
    """Per-user downlink NOMA rates under perfect SIC.

    Raises
    ------
    OrderingViolationError
        If the strengths ``|h|^2/N`` are not non-increasing along
        ``pa.assumed_order``.
    """
    channels = _check(channels, pa)
    order = list(pa.assumed_order)
    s = [channels[u].strength for u in order]
    for t in range(1, len(s)):
        if s[t] > s[t - 1] * (1 + _ORDER_RTOL):
            raise OrderingViolationError(
                f"user {order[t]} (strength {s[t]:g}) is decoded after "
                f"weaker user {order[t - 1]} (strength {s[t - 1]:g})")
    g = [channels[u].power_gain for u in order]
    n = [channels[u].noise_psd for u in order]
    p = [pa.powers[u] for u in order]
    r_ordered = np.log2(1.0 + downlink_sinrs(g, n, p))
    rates = np.empty(len(order))
    rates[order] = r_ordered
    return RateReport.from_rates(rates, _power_flags(pa))


def downlink_oma_rates(channels, pa, split):
    channels = _check(channels, pa)
    if len(split.fractions) != len(channels):
        raise ValueError("one bandwidth fraction per user required")
    rates = oma_rates([c.power_gain for c in channels],
                      [c.noise_psd for c in channels], pa.powers, split.fractions)
    return RateReport.from_rates(rates)


def uplink_noma_rates(channels, pa):
    """Per-user uplink NOMA rates, decoding along ``pa.assumed_order``.

    The receiver has a single noise PSD, so every channel must carry the
    same ``noise_psd``.
    """
    channels = _check(channels, pa)
    noise = {c.noise_psd for c in channels}
    if len(noise) != 1:
        raise ValueError("uplink NOMA needs one common receiver noise PSD, "
                         f"got {sorted(noise)}")
    order = list(pa.assumed_order)
    g = [channels[u].power_gain for u in order]
    p = [pa.powers[u] for u in order]
    r_ordered = np.log2(1.0 + uplink_sinrs(g, noise.pop(), p))
    rates = np.empty(len(order))
    rates[order] = r_ordered
    return RateReport.from_rates(rates)


# -- two-user region boundaries ----------------------------------------------

def noma_boundary_strong_rate(s_strong, s_weak, total_power, r_weak):
    """Largest strong-user NOMA rate when the weak user gets ``r_weak``.

    ``s_*`` are strengths G/N.  Returns ``nan`` where ``r_weak`` exceeds the
    weak user's single-user capacity.
    """
    r = np.asarray(r_weak, dtype=float)
    c = 2.0 ** r
    p_strong = (total_power * s_weak - (c - 1.0)) / (s_weak * c)
    with np.errstate(invalid="ignore"):
        out = np.log2(1.0 + p_strong * s_strong)
    return np.where(p_strong >= -1e-15, np.maximum(out, 0.0), np.nan)


def _oma_strong_given_weak(w, s_strong, s_weak, total_power, r):
    # Weak user holds band 1-w and just enough power for rate r.
    if w <= 0.0:
        return 0.0
    bw = 1.0 - w
    if bw <= 0.0:
        return -np.inf if r > 0 else w * np.log2(1 + total_power * s_strong / w)
    if r / bw > 1000.0:
        return -np.inf
    p_weak = bw * (2.0 ** (r / bw) - 1.0) / s_weak
    p_strong = total_power - p_weak
    if p_strong < 0:
        return -np.inf
    return w * np.log2(1.0 + p_strong * s_strong / w)


def _oma_strong_on_grid(ws, s_strong, s_weak, total_power, r):
    # vectorized _oma_strong_given_weak for 0 < w < 1, endpoints handled apart
    out = np.empty_like(ws)
    inner = (ws > 0) & (ws < 1)
    w, bw = ws[inner], 1.0 - ws[inner]
    with np.errstate(over="ignore"):
        p_weak = np.where(r / bw > 1000.0, np.inf, bw * (2.0 ** (r / bw) - 1.0) / s_weak)
    p_strong = total_power - p_weak
    val = np.full(w.shape, -np.inf)
    ok = p_strong >= 0
    val[ok] = w[ok] * np.log2(1.0 + p_strong[ok] * s_strong / w[ok])
    out[inner] = val
    for k in np.flatnonzero(~inner):
        out[k] = _oma_strong_given_weak(ws[k], s_strong, s_weak, total_power, r)
    return out


def oma_boundary_strong_rate(s_strong, s_weak, total_power, r_weak, grid=401):
    """Largest strong-user FDMA rate when the weak user gets ``r_weak``.

    Jointly optimizes the band fraction and power split: for each band
    fraction the weak user's power is the closed-form minimum, and the
    remaining 1-D problem is solved by a grid scan refined with a bounded
    scalar search.
    """
    def one(r):
        def f(w):
            v = _oma_strong_given_weak(w, s_strong, s_weak, total_power, r)
            return -v if np.isfinite(v) else 1e300

        ws = np.linspace(0.0, 1.0, grid)
        vals = -_oma_strong_on_grid(ws, s_strong, s_weak, total_power, r)
        vals[~np.isfinite(vals)] = 1e300
        k = int(np.argmin(vals))
        if vals[k] >= 1e300:
            return np.nan
        lo, hi = ws[max(k - 1, 0)], ws[min(k + 1, grid - 1)]
        res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        return max(-res.fun, -vals[k])

    r = np.asarray(r_weak, dtype=float)
    return np.vectorize(one, otypes=[float])(r)


@dataclass(frozen=True)
class RateRegion:
    """Labeled series of (R_weak, R_strong) points.

    ``noma`` and ``oma_equal_bw`` are indexed by ``alpha_strong``, the
    strong user's power share; ``oma_boundary`` is the FDMA frontier over
    both the band and power split, sampled on ``boundary_r_weak``.
    """

    alpha_strong: np.ndarray
    noma: np.ndarray
    oma_equal_bw: np.ndarray
    boundary_r_weak: np.ndarray
    oma_boundary: np.ndarray

    def strong_rate_at(self, series, r_weak):
        """Interpolate a series' R_strong at a given R_weak."""
        pts = getattr(self, series)
        idx = np.argsort(pts[:, 0])
        return float(np.interp(r_weak, pts[idx, 0], pts[idx, 1]))


def rate_region_sweep(g_strong, g_weak, total_power, grid_points):
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    s1, s2 = g_strong.strength, g_weak.strength
    if s1 < s2:
        raise OrderingViolationError("g_strong is weaker than g_weak")
    alpha = np.linspace(0.0, 1.0, grid_points)
    p1, p2 = alpha * total_power, (1.0 - alpha) * total_power
    gains = [g_strong.power_gain, g_weak.power_gain]
    noise = [g_strong.noise_psd, g_weak.noise_psd]
    noma = np.log2(1.0 + downlink_sinrs(gains, noise, np.stack([p1, p2], -1)))
    oma = oma_rates(gains, noise, np.stack([p1, p2], -1), [0.5, 0.5])
    r_max = np.log2(1.0 + total_power * s2)
    r_grid = np.linspace(0.0, r_max, grid_points)
    boundary = oma_boundary_strong_rate(s1, s2, total_power, r_grid)
    return RateRegion(
        alpha_strong=alpha,
        noma=noma[:, ::-1].copy(),
        oma_equal_bw=oma[:, ::-1].copy(),
        boundary_r_weak=r_grid,
        oma_boundary=np.column_stack([r_grid, boundary]),
    )


@dataclass(frozen=True)
class SumCapacityCurve:
    bandwidth_strong: np.ndarray
    sum_noma: np.ndarray
    sum_oma: np.ndarray


def sum_capacity_vs_bandwidth(g_strong, g_weak, total_power, pa, grid_points):
    """NOMA and FDMA sum rates against the strong user's band fraction W.

    ``pa`` holds (strong, weak) powers and is shared by both schemes, so the
    NOMA sum is the same at every W.
    """
    if len(pa.powers) != 2:
        raise ValueError("sum_capacity_vs_bandwidth is a two-user sweep")
    if abs(pa.total - total_power) > 1e-12 * max(1.0, total_power):
        raise ValueError("pa.total differs from total_power")
    chans = [g_strong, g_weak]
    noma = downlink_noma_rates(chans, pa).sum_rate
    w = np.linspace(0.0, 1.0, grid_points)
    gains = [g_strong.power_gain, g_weak.power_gain]
    noise = [g_strong.noise_psd, g_weak.noise_psd]
    oma = oma_rates(gains, noise, pa.powers, np.stack([w, 1.0 - w], -1)).sum(-1)
    return SumCapacityCurve(w, np.full(grid_points, noma), oma)
