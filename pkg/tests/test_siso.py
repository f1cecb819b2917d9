import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from nomasim import OrderingViolationError, UserChannel
from nomasim.channel import SicOrdering
from nomasim.siso import (BandwidthSplit, PowerAllocation, downlink_noma_rates,
                          downlink_oma_rates, noma_boundary_strong_rate,
                          oma_boundary_strong_rate, rate_region_sweep,
                          sum_capacity_vs_bandwidth, uplink_noma_rates)


def scalars(*gains, noise=1.0):
    return [UserChannel.scalar(g, noise) for g in gains]


# -- downlink NOMA ----------------------------------------------------------

def test_downlink_fig3_anchor(fig3_channels):
    rep = downlink_noma_rates(fig3_channels, PowerAllocation.ordered([4.5, 5.5], 10))
    assert rep.per_user_rate[0] == pytest.approx(math.log2(451), abs=1e-12)
    assert rep.per_user_rate[0] == pytest.approx(8.817, abs=5e-4)
    assert rep.per_user_rate[1] == pytest.approx(1.0, abs=1e-12)
    assert rep.flags == ()


def test_downlink_zero_power_weak(fig3_channels):
    rep = downlink_noma_rates(fig3_channels, PowerAllocation.ordered([7.0, 0.0], 10))
    assert rep.per_user_rate == (pytest.approx(math.log2(1 + 700)), 0.0)
    assert "inverted_power_order" in rep.flags


def test_downlink_symmetric_hand_value():
    rep = downlink_noma_rates(scalars(1, 1), PowerAllocation.ordered([0.5, 0.5]))
    assert rep.per_user_rate[0] == pytest.approx(math.log2(1.5), abs=1e-12)
    assert rep.per_user_rate[1] == pytest.approx(math.log2(4 / 3), abs=1e-12)


def test_downlink_k_users_matches_loop_oracle(rng):
    for _ in range(50):
        K = rng.integers(1, 7)
        g = np.sort(rng.exponential(size=K))[::-1]
        n = np.ones(K)
        p = rng.uniform(0, 3, K)
        rep = downlink_noma_rates(scalars(*np.sqrt(g)),
                                  PowerAllocation.ordered(p, p.sum() + 1))
        for k in range(K):
            interf = sum(p[j] for j in range(k)) * g[k]
            assert rep.per_user_rate[k] == pytest.approx(
                math.log2(1 + p[k] * g[k] / (interf + n[k])), rel=1e-12, abs=1e-14)


def test_downlink_results_indexed_by_user():
    chans = scalars(1, 10)
    pa = PowerAllocation([5.5, 4.5], 10, SicOrdering((1, 0)))
    rep = downlink_noma_rates(chans, pa)
    assert rep.per_user_rate[1] == pytest.approx(math.log2(451))
    assert rep.per_user_rate[0] == pytest.approx(1.0)


def test_downlink_ordering_violation(fig3_channels):
    pa = PowerAllocation([4.5, 5.5], 10, SicOrdering((1, 0)))
    with pytest.raises(OrderingViolationError):
        downlink_noma_rates(fig3_channels, pa)


# -- downlink OMA -------------------------------------------------------------

def test_oma_equal_bw_point(fig3_channels):
    rep = downlink_oma_rates(fig3_channels, PowerAllocation.ordered([8.5, 1.5], 10),
                             BandwidthSplit([0.5, 0.5]))
    assert rep.per_user_rate[0] == pytest.approx(0.5 * math.log2(1701), abs=1e-12)
    assert rep.per_user_rate[0] == pytest.approx(5.365, abs=2e-3)
    assert rep.per_user_rate[1] == pytest.approx(1.0, abs=1e-12)


def test_oma_degenerate_split(fig3_channels):
    rep = downlink_oma_rates(fig3_channels, PowerAllocation.ordered([4.5, 5.5], 10),
                             BandwidthSplit([1.0, 0.0]))
    assert rep.per_user_rate == (pytest.approx(math.log2(1 + 450)), 0.0)


def test_oma_symmetric_anchor():
    rep = downlink_oma_rates(scalars(1, 1), PowerAllocation.ordered([0.5, 0.5]),
                             BandwidthSplit([0.5, 0.5]))
    assert rep.per_user_rate == (pytest.approx(0.5), pytest.approx(0.5))


def test_bandwidth_split_validation():
    with pytest.raises(ValueError):
        BandwidthSplit([0.5, 0.4])
    with pytest.raises(ValueError):
        BandwidthSplit([1.5, -0.5])


# -- uplink NOMA ----------------------------------------------------------------

def test_uplink_two_users():
    rep = uplink_noma_rates(scalars(2, 1), PowerAllocation.ordered([1, 1]))
    assert rep.per_user_rate == (pytest.approx(math.log2(3)), pytest.approx(1.0))
    assert rep.sum_rate == pytest.approx(math.log2(6), abs=1e-12)


def test_uplink_silent_user():
    rep = uplink_noma_rates(scalars(2, 1), PowerAllocation.ordered([0, 3]))
    assert rep.per_user_rate == (0.0, pytest.approx(math.log2(4)))


def test_uplink_three_users():
    rep = uplink_noma_rates(scalars(3, 2, 1), PowerAllocation.ordered([1, 1, 1]))
    assert rep.per_user_rate == pytest.approx((math.log2(2.5), math.log2(3), 1.0), abs=1e-12)
    assert rep.per_user_rate == pytest.approx((1.322, 1.585, 1.0), abs=5e-4)


def test_uplink_rejects_distinct_noise():
    chans = [UserChannel.scalar(2, 1.0), UserChannel.scalar(1, 2.0)]
    with pytest.raises(ValueError):
        uplink_noma_rates(chans, PowerAllocation.ordered([1, 1]))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.floats(0.0, 30.0), st.floats(0.0, 10.0)), min_size=1, max_size=6),
       st.floats(0.1, 5.0))
def test_uplink_mac_sum_identity(users, noise):
    amps, powers = zip(*users)
    chans = [UserChannel.scalar(a, noise) for a in amps]
    rep = uplink_noma_rates(chans, PowerAllocation.ordered(powers, sum(powers) + 1))
    exact = math.log2(1 + sum(p * a * a for a, p in users) / noise)
    assert rep.sum_rate == pytest.approx(exact, abs=1e-12 * max(1.0, exact))


# -- properties ----------------------------------------------------------------

def test_downlink_monotone_in_power_share(fig3_channels):
    a = np.linspace(0.01, 0.99, 99)
    strong, weak = [], []
    for x in a:
        r = downlink_noma_rates(fig3_channels, PowerAllocation.ordered([10 * x, 10 * (1 - x)], 10))
        strong.append(r.per_user_rate[0])
        weak.append(r.per_user_rate[1])
    assert np.all(np.diff(strong) > 0)
    assert np.all(np.diff(weak) < 0)


def _noma_alpha_for_weak_rate(s1, s2, P, r):
    f = lambda a: math.log2(1 + (1 - a) * P * s2 / (a * P * s2 + 1)) - r
    return brentq(f, 0.0, 1.0, xtol=1e-15)


def test_symmetric_region_equality_by_search():
    s, P = 1.0, 10.0
    r_grid = np.linspace(0.05, math.log2(1 + P * s) - 0.05, 50)
    oma = oma_boundary_strong_rate(s, s, P, r_grid)
    for r, o in zip(r_grid, oma):
        a = _noma_alpha_for_weak_rate(s, s, P, r)
        assert math.log2(1 + a * P * s) == pytest.approx(o, abs=1e-9)
    # and back: each NOMA point sits on the OMA boundary
    for a in np.linspace(0.02, 0.98, 50):
        r_w = math.log2(1 + (1 - a) * P * s / (a * P * s + 1))
        assert oma_boundary_strong_rate(s, s, P, r_w) == pytest.approx(
            math.log2(1 + a * P * s), abs=1e-9)


def test_oma_boundary_matches_grid_oracle():
    s1, s2, P = 100.0, 1.0, 10.0
    a = np.linspace(0, 1, 801)[:, None]
    w = np.linspace(1e-6, 1 - 1e-6, 801)[None, :]
    r1 = w * np.log2(1 + a * P * s1 / w)
    r2 = (1 - w) * np.log2(1 + (1 - a) * P * s2 / (1 - w))
    for r in (0.5, 1.0, 2.0, 3.0):
        best = r1[r2 >= r].max()
        got = float(oma_boundary_strong_rate(s1, s2, P, r))
        assert got >= best - 1e-9
        assert got == pytest.approx(best, abs=0.02)


def test_asymmetric_region_containment(fig3_channels):
    reg = rate_region_sweep(*fig3_channels, 10.0, 201)
    r_w, r_s = reg.oma_boundary[:, 0], reg.oma_boundary[:, 1]
    noma = noma_boundary_strong_rate(100.0, 1.0, 10.0, r_w)
    assert np.all(noma >= r_s - 1e-12)


# -- sweeps -------------------------------------------------------------------------

def test_region_endpoints(fig3_channels):
    reg = rate_region_sweep(*fig3_channels, 10.0, 11)
    assert tuple(reg.noma[0]) == pytest.approx((math.log2(11), 0.0))
    assert tuple(reg.noma[-1]) == pytest.approx((0.0, math.log2(1001)))
    assert reg.strong_rate_at("noma", 1.0) == pytest.approx(8.82, abs=0.05)


def test_region_needs_two_points(fig3_channels):
    with pytest.raises(ValueError):
        rate_region_sweep(*fig3_channels, 10.0, 1)


def test_sum_capacity_curve(fig3_channels):
    pa = PowerAllocation.ordered([4.5, 5.5], 10)
    c = sum_capacity_vs_bandwidth(*fig3_channels, 10.0, pa, 101)
    assert np.allclose(c.sum_noma, math.log2(451) + 1.0, atol=1e-12)
    assert c.sum_noma[0] == pytest.approx(9.817, abs=5e-4)
    assert c.bandwidth_strong[0] == 0.0
    assert c.sum_oma[0] == pytest.approx(math.log2(6.5), abs=1e-12)
    assert np.all(c.sum_noma >= c.sum_oma)
