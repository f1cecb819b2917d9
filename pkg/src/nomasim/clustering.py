"""
Channel-gain based user pairing over orthogonal resource blocks.

The pairing functions accept strengths indexed by user (in any order),
rank them with the canonical SIC ordering and return pairs of user
indices ``(strong, weak)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .channel import order_strengths
from .errors import OrderingViolationError
from .siso import RateReport, downlink_sinrs

__all__ = [
    "LeftoverMode",
    "PairingPlan",
    "best_worst_pairing",
    "two_group_pairing",
    "hybrid_assign",
    "virtual_pairing_rates",
]


class LeftoverMode(NamedTuple):
    kind: str  # "oma" or "virtual"
    strong_index: Optional[int] = None


OMA_FALLBACK = LeftoverMode("oma")


@dataclass(frozen=True)
class PairingPlan:
    pairs: tuple
    leftovers: tuple = ()
    modes: tuple = ()

    def __post_init__(self):
        if len(self.leftovers) != len(self.modes):
            raise ValueError("one mode per leftover user required")

    def users(self):
        out = [u for p in self.pairs for u in p]
        return sorted(out + list(self.leftovers))


def _ranked(strengths, even=True):
    order = order_strengths(strengths).order
    if even and len(order) % 2:
        raise ValueError(f"{len(order)} users cannot be perfectly paired; "
                         "use hybrid_assign for odd counts")
    return order


def best_worst_pairing(strengths):
    """Pair the k-th strongest user with the k-th weakest."""
    r = _ranked(strengths)
    m = len(r) // 2
    return PairingPlan(tuple((r[k], r[-1 - k]) for k in range(m)))


def two_group_pairing(strengths):
    """Split into a strong and a weak half and pair them rank by rank."""
    r = _ranked(strengths)
    m = len(r) // 2
    return PairingPlan(tuple((r[k], r[m + k]) for k in range(m)))


def hybrid_assign(strengths, leftover_mode="oma"):
    """Two-group pairing for any user count.

    With an odd count the median-strength user is left over: it falls back
    to OMA (``leftover_mode="oma"``) or shares the band of the strongest
    pair's strong user as a virtual pair (``leftover_mode="virtual"``).
    """
    if leftover_mode not in ("oma", "virtual"):
        raise ValueError(f"unknown leftover mode {leftover_mode!r}")
    r = _ranked(strengths, even=False)
    n = len(r)
    if n == 0:
        raise ValueError("need at least one user")
    m = n // 2
    if n % 2 == 0:
        return PairingPlan(tuple((r[k], r[m + k]) for k in range(m)))
    strong, mid, weak = r[:m], r[m], r[m + 1:]
    pairs = tuple(zip(strong, weak))
    if leftover_mode == "virtual" and pairs:
        mode = LeftoverMode("virtual", pairs[0][0])
    else:
        mode = OMA_FALLBACK
    return PairingPlan(pairs, (mid,), (mode,))


def virtual_pairing_rates(strong, weak_a, weak_b, pa_half_a, pa_half_b):
    """Rates of a strong user sharing two half bands with two weak users.

    Each half band carries a two-user NOMA pair with bandwidth 1/2 and noise
    scaled by 1/2.  ``pa_half_*`` hold (strong, weak) powers for that half.

    Returns
    -------
    RateReport
        Rates of (strong, weak_a, weak_b); the strong rate is the sum of
        its two half-band rates.
    """
    for w in (weak_a, weak_b):
        if w.strength > strong.strength:
            raise OrderingViolationError("the strong user is weaker than a weak user")
    halves = []
    for weak, pa in ((weak_a, pa_half_a), (weak_b, pa_half_b)):
        if len(pa.powers) != 2:
            raise ValueError("each half band carries exactly two users")
        p = [pa.powers[u] for u in pa.assumed_order]
        g = [strong.power_gain, weak.power_gain]
        n = [0.5 * strong.noise_psd, 0.5 * weak.noise_psd]
        halves.append(0.5 * np.log2(1.0 + downlink_sinrs(g, n, p)))
    return RateReport.from_rates([halves[0][0] + halves[1][0],
                                  halves[0][1], halves[1][1]])
