"""
Single-carrier downlink power-allocation strategies.

Every strategy takes per-user strengths ``G_k / N_k`` indexed by user,
derives the canonical SIC order from them (strongest first, ties to the
lower index) and returns a :class:`~nomasim.siso.PowerAllocation` whose
``powers`` are still indexed by user.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import order_strengths
from .errors import InfeasibleError
from .siso import BandwidthSplit, PowerAllocation, downlink_sinrs, oma_rates

__all__ = [
    "PaStrategy",
    "fixed_pa",
    "ftpc_pa",
    "maxmin_pa",
    "maxmin_required_power",
    "sumrate_optimal_pa",
    "cr_inspired_pa",
    "dynamic_pa",
    "dynamic_pa_interval",
    "allocate",
]


@dataclass(frozen=True)
class PaStrategy:
    """A strategy name plus its parameters, as read from a run config.

    kind is one of ``fixed``, ``ftpc``, ``maxmin``, ``sumrate``,
    ``cr_inspired`` or ``dynamic``.
    """

    kind: str
    ratios: tuple = ()
    decay: float = 1.0
    tolerance: float = 1e-9
    weak_target_rate: float = 1.0
    oma_split: tuple = (0.5, 0.5)
    oma_ratios: tuple = (0.5, 0.5)

    def __post_init__(self):
        if self.kind not in ("fixed", "ftpc", "maxmin", "sumrate", "cr_inspired", "dynamic"):
            raise ValueError(f"unknown power-allocation strategy {self.kind!r}")
        if self.kind == "fixed" and abs(sum(self.ratios) - 1.0) > 1e-12:
            raise ValueError("fixed ratios must sum to 1")
        if self.decay < 0:
            raise ValueError("FTPC decay factor must be >= 0")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if not self.weak_target_rate > 0:
            raise ValueError("weak_target_rate must be > 0")


def _strengths(strengths):
    s = np.asarray(strengths, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("strengths must be a non-empty 1-d sequence")
    if np.any(~np.isfinite(s)) or np.any(s < 0):
        raise ValueError("strengths must be finite and non-negative")
    return s


def _by_position(order, ordered_powers):
    powers = np.empty(len(order))
    powers[list(order)] = ordered_powers
    return powers


def fixed_pa(strengths, total_power, ratios):
    """``ratios[t]`` of the budget to the user at ordered position ``t``."""
    s = _strengths(strengths)
    ratios = np.asarray(ratios, dtype=float)
    if ratios.shape != s.shape:
        raise ValueError(f"{ratios.size} ratios for {s.size} users")
    if abs(ratios.sum() - 1.0) > 1e-12 or np.any(ratios < 0):
        raise ValueError("ratios must be non-negative and sum to 1")
    order = order_strengths(s)
    return PowerAllocation(_by_position(order, ratios * total_power),
                           total_power, order)


def ftpc_pa(strengths, total_power, decay):
    """Fractional transmit power control: ``P_k`` proportional to ``s_k**-decay``."""
    s = _strengths(strengths)
    if np.any(s <= 0):
        raise ValueError("FTPC needs strictly positive strengths")
    if decay < 0:
        raise ValueError("decay factor must be >= 0")
    w = s ** (-float(decay))
    powers = total_power * w / w.sum()
    return PowerAllocation(powers, total_power, order_strengths(s))


def maxmin_required_power(ordered_strengths, rate):
    """Minimum powers giving every user exactly ``rate``, strongest first.

    User ``t`` is interfered only by the users ahead of it, so its power
    follows from theirs: ``P_t = (2**rate - 1) * (sum(P_<t) + 1/s_t)``.
    """
    c = 2.0 ** rate - 1.0
    out = np.empty(len(ordered_strengths))
    acc = 0.0
    for t, st in enumerate(ordered_strengths):
        out[t] = c * (acc + 1.0 / st) if st > 0 else np.inf
        acc += out[t]
    return out


def maxmin_pa(strengths, total_power, tolerance=1e-9):
    """Max-min fair allocation by bisection on the common target rate.

    Returns
    -------
    pa : PowerAllocation
    common_rate : float
        The smallest per-user rate achieved by ``pa``.
    """
    s = _strengths(strengths)
    if not total_power > 0:
        raise ValueError("total power must be > 0")
    if not tolerance > 0:
        raise ValueError("tolerance must be > 0")
    order = order_strengths(s)
    ss = s[list(order)]
    if ss[-1] <= 0:
        raise InfeasibleError("a user with zero strength cannot reach any rate",
                              user=int(order.order[-1]))
    lo, hi = 0.0, float(np.log2(1.0 + total_power * ss[0]))
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if maxmin_required_power(ss, mid).sum() <= total_power:
            lo = mid
        else:
            hi = mid
    need = maxmin_required_power(ss, lo)
    # Scaling every power up only raises each SINR, so the leftover budget
    # is spread proportionally without breaking feasibility.
    ordered = need * (total_power / need.sum()) if need.sum() > 0 else \
        np.full(len(ss), total_power / len(ss))
    pa = PowerAllocation(_by_position(order, ordered), total_power, order)
    rates = np.log2(1.0 + downlink_sinrs(ss, 1.0, ordered))
    return pa, float(rates.min())


def sumrate_optimal_pa(strengths, total_power):
    """Everything to the strongest user (lowest index on ties)."""
    s = _strengths(strengths)
    order = order_strengths(s)
    powers = np.zeros(s.size)
    powers[order.order[0]] = total_power
    return PowerAllocation(powers, total_power, order,
                           notes=("unfair: all power to the strongest user",))


def cr_inspired_pa(strengths, total_power, weak_target_rate):
    """Give the strong user whatever is left once the weak user meets its target.

    Raises
    ------
    InfeasibleError
        If the weak user misses ``weak_target_rate`` even with the full budget.
    """
    s = _strengths(strengths)
    if s.size != 2:
        raise ValueError("CR-inspired allocation is defined for two users")
    if not weak_target_rate > 0:
        raise ValueError("weak_target_rate must be > 0")
    order = order_strengths(s)
    s_weak = s[order.order[1]]
    c = 2.0 ** weak_target_rate
    needed = (c - 1.0) / s_weak if s_weak > 0 else np.inf
    if needed > total_power:
        raise InfeasibleError(
            f"weak user needs {needed:g} W for {weak_target_rate:g} bit/s/Hz "
            f"but the budget is {total_power:g} W",
            required=needed, available=total_power, shortfall=needed - total_power)
    p_strong = min(max((total_power * s_weak - (c - 1.0)) / (s_weak * c), 0.0),
                   total_power)
    return PowerAllocation(_by_position(order, [p_strong, total_power - p_strong]),
                           total_power, order)


def dynamic_pa_interval(strengths, total_power, oma_split, oma_ratios):
    """Strong-user power shares for which both NOMA rates beat the FDMA rates.

    Returns ``(alpha_lo, alpha_hi, oma_rates)``; the open interval
    ``(alpha_lo, alpha_hi)`` is non-empty only when NOMA can strictly
    improve both users.  ``oma_split`` and ``oma_ratios`` are given by
    ordered position (strong, weak).
    """
    s = _strengths(strengths)
    if s.size != 2:
        raise ValueError("dynamic allocation is defined for two users")
    split = oma_split if isinstance(oma_split, BandwidthSplit) else BandwidthSplit(oma_split)
    ratios = np.asarray(oma_ratios, dtype=float)
    order = order_strengths(s)
    s1, s2 = s[list(order)]
    r_oma = oma_rates([s1, s2], 1.0, ratios * total_power, split.fractions)
    lo = (2.0 ** r_oma[0] - 1.0) / (total_power * s1)
    hi = ((1.0 + total_power * s2) * 2.0 ** (-r_oma[1]) - 1.0) / (total_power * s2)
    return float(lo), float(hi), r_oma


def dynamic_pa(strengths, total_power, oma_split, oma_ratios, margin=1e-9):
    """Midpoint of the interval where NOMA strictly beats FDMA for both users.

    Raises
    ------
    InfeasibleError
        If the interval is empty or narrower than ``margin``; ``details``
        carries both bounds.
    """
    lo, hi, r_oma = dynamic_pa_interval(strengths, total_power, oma_split, oma_ratios)
    if not hi - lo > margin:
        raise InfeasibleError(
            f"no power split beats FDMA for both users: [{lo:.6g}, {hi:.6g}]",
            alpha_lo=lo, alpha_hi=hi)
    order = order_strengths(_strengths(strengths))
    a = 0.5 * (lo + hi)
    return PowerAllocation(_by_position(order, [a * total_power, (1 - a) * total_power]),
                           total_power, order,
                           notes=(f"alpha_interval=({lo:.17g}, {hi:.17g})",))


def allocate(strategy, strengths, total_power):
    """Dispatch a :class:`PaStrategy` to the matching allocation function."""
    k = strategy.kind
    if k == "fixed":
        return fixed_pa(strengths, total_power, strategy.ratios)
    if k == "ftpc":
        return ftpc_pa(strengths, total_power, strategy.decay)
    if k == "maxmin":
        return maxmin_pa(strengths, total_power, strategy.tolerance)[0]
    if k == "sumrate":
        return sumrate_optimal_pa(strengths, total_power)
    if k == "cr_inspired":
        return cr_inspired_pa(strengths, total_power, strategy.weak_target_rate)
    return dynamic_pa(strengths, total_power, strategy.oma_split, strategy.oma_ratios)
