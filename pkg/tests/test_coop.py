import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nomasim.channel import ChannelModel
from nomasim.coop import (CoopScenario, CoopTopology, OutageSpec,
                          PhasePowerPlan, RelayLinks, cnoma_combined_sinrs,
                          cnoma_outage_mc, cnoma_sinr_tables,
                          conventional_df_capacity, crossover_index,
                          crs_noma_capacity, outage_indicators,
                          sample_coop_gains, two_stage_relay_select)
from nomasim.errors import NomaError
from nomasim.siso import PowerAllocation


def two_user(inter=2.0, relay=1.0):
    topo = CoopTopology((10.0, 1.0), np.array([[0, inter], [0, 0]]))
    plan = PhasePowerPlan(PowerAllocation.ordered([4.5, 5.5], 10), ((relay,),))
    return topo, plan


def loop_oracle(G, Gi, N, P, slots):
    """Combined SINR[k][j] by explicit sums over phases."""
    K = len(G)
    out = np.full((K, K), np.nan)
    for k in range(K):
        for j in range(k, K):
            v = P[j] * G[k] / (sum(P[:j]) * G[k] + N)
            for m, slot in enumerate(slots):
                if m < k:
                    loc = j - m - 1
                    v += slot[loc] * Gi[m][k] / (sum(slot[:loc]) * Gi[m][k] + N)
            out[k, j] = v
    return out


# -- SINR tables -------------------------------------------------------------------

def test_two_user_mrc_example():
    topo, plan = two_user()
    t = cnoma_combined_sinrs(topo, plan)
    assert t.combined[1, 1] == pytest.approx(5.0, abs=1e-12)
    assert t.direct[1, 1] == pytest.approx(1.0, abs=1e-12)
    assert np.isnan(t.combined[1, 0])
    assert 0.5 * math.log2(1 + t.combined[1, 1]) == pytest.approx(0.5 * math.log2(6))


@pytest.mark.parametrize("inter,relay", [(0.0, 1.0), (2.0, 0.0)])
def test_no_cooperation_means_direct(inter, relay):
    t = cnoma_combined_sinrs(*two_user(inter, relay))
    assert np.array_equal(t.combined, t.direct, equal_nan=True)


def test_three_user_matches_loop(rng):
    for _ in range(30):
        G = np.sort(rng.exponential(size=3))[::-1]
        Gi = rng.exponential(size=(3, 3))
        P = rng.uniform(0.1, 3, 3)
        slots = ((rng.uniform(0, 2), rng.uniform(0, 2)), (rng.uniform(0, 2),))
        plan = PhasePowerPlan(PowerAllocation.ordered(P, P.sum()), slots)
        t = cnoma_sinr_tables(G, Gi, 0.7, plan)
        np.testing.assert_allclose(t.combined, loop_oracle(G, Gi, 0.7, P, slots), rtol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 100), min_size=4, max_size=4),
       st.lists(st.floats(0, 100), min_size=6, max_size=6))
def test_cooperation_never_lowers_sinr(g, r):
    K = 4
    slots = ((r[0], r[1], r[2]), (r[3], r[4]), (r[5],))
    plan = PhasePowerPlan(PowerAllocation.ordered([1, 2, 3, 4], 10), slots)
    Gi = np.triu(np.full((K, K), 0.5), 1)
    t = cnoma_sinr_tables(np.sort(g)[::-1], Gi, 1.0, plan)
    mask = np.triu(np.ones((K, K), bool))
    assert np.all(t.combined[mask] >= t.direct[mask])


def test_missing_link_error():
    topo = CoopTopology((10.0, 1.0))
    _, plan = two_user()
    with pytest.raises(NomaError):
        cnoma_combined_sinrs(topo, plan)


def test_plan_validation():
    pa = PowerAllocation.ordered([1, 1, 1], 3)
    with pytest.raises(ValueError):
        PhasePowerPlan(pa, ((1.0,),))
    with pytest.raises(ValueError):
        PhasePowerPlan(pa, ((1.0, -1.0),))
    with pytest.raises(ValueError):
        OutageSpec((1.0, 0.0))
    with pytest.raises(ValueError):
        CoopTopology((1.0,), noise_psd=0.0)


# -- outage ------------------------------------------------------------------------

def test_outage_all_met_and_constructed_separation():
    topo, plan = two_user()
    t = cnoma_combined_sinrs(topo, plan)
    # 1.1 bits needs SINR 1.14: user 0 sees x2 at 1.22, user 1 gets 1 direct, 5 combined
    th = OutageSpec((0.1, 1.1), prelog=1.0).thresholds()
    assert list(outage_indicators(t.combined, th)) == [False, False]
    assert list(outage_indicators(t.direct, th)) == [False, True]


def test_strong_user_inherits_weak_message_failure():
    table = np.array([[10.0, 0.5], [np.nan, 10.0]])
    assert list(outage_indicators(table, [1.0, 1.0])) == [True, False]


def test_default_prelog_is_one_over_k():
    assert OutageSpec((1.0, 1.0)).thresholds() == pytest.approx([3.0, 3.0])


def rayleigh_scenario(mean_weak=0.01, inter=0.01):
    return CoopScenario((ChannelModel.rayleigh(1.0), ChannelModel.rayleigh(mean_weak)),
                        {(0, 1): ChannelModel.rayleigh(inter)})


def test_mc_paired_dominance_and_determinism():
    scen = rayleigh_scenario()
    plan = PhasePowerPlan(PowerAllocation.ordered([200, 800], 1000), ((1000,),))
    spec = OutageSpec((1.0, 1.0))
    a = cnoma_outage_mc(scen, plan, spec, 4000, seed=3)
    coop, non = a["indicators"]
    assert np.all(coop <= non)
    assert a["coop"][1].mean < a["noncoop"][1].mean
    b = cnoma_outage_mc(scen, plan, spec, 4000, seed=3, threads=3)
    assert np.array_equal(b["indicators"][0], coop)


def test_sample_gains_shapes_and_nan():
    bs, inter = sample_coop_gains(rayleigh_scenario(), 10, seed=1)
    assert bs.shape == (10, 2) and inter.shape == (10, 2, 2)
    assert np.all(np.isfinite(inter[:, 0, 1])) and np.all(np.isnan(inter[:, 1, 0]))


def test_deterministic_channels_no_outage():
    scen = CoopScenario((ChannelModel.deterministic(10.0), ChannelModel.deterministic(1.0)),
                        {(0, 1): ChannelModel.deterministic(2.0)})
    plan = PhasePowerPlan(PowerAllocation.ordered([4.5, 5.5], 10), ((1.0,),))
    r = cnoma_outage_mc(scen, plan, OutageSpec((0.1, 0.1)), 50, seed=0)
    assert all(s.mean == 0 for s in r["coop"] + r["noncoop"])


# -- CRS-NOMA and DF ---------------------------------------------------------------

def links(g_sd, g_sr, g_rd):
    return RelayLinks(math.sqrt(g_sd), math.sqrt(g_sr), math.sqrt(g_rd))


def test_crs_example():
    r = crs_noma_capacity(links(1, 4, 4), 0.8, 0.2, 10.0)
    assert r.rate_x1 == pytest.approx(0.5 * math.log2(1 + 8 / 3))
    assert r.rate_x2 == pytest.approx(0.5 * math.log2(9))
    assert r.sum_rate == pytest.approx(2.522, abs=1e-3)
    assert r.relay_decodes_x1


def test_crs_degenerate():
    assert crs_noma_capacity(links(1, 4, 0), 0.8, 0.2, 10.0).rate_x2 == 0
    with pytest.raises(ValueError):
        crs_noma_capacity(links(1, 4, 4), 0.5, 0.5, 10.0)
    with pytest.raises(ValueError):
        crs_noma_capacity(links(1, 4, 4), 0.2, 0.8, 10.0)


def test_crs_joint_detection_helps():
    base = crs_noma_capacity(links(1, 4, 0.1), 0.8, 0.2, 10.0)
    jd = crs_noma_capacity(links(1, 4, 0.1), 0.8, 0.2, 10.0, joint_detection=True)
    assert jd.rate_x2 > base.rate_x2


def test_df_examples():
    assert conventional_df_capacity(links(1, 4, 4), 10.0) == pytest.approx(0.5 * math.log2(41))
    assert conventional_df_capacity(links(1, 1e12, 4), 10.0) == pytest.approx(0.5 * math.log2(51))
    assert conventional_df_capacity(links(0, 4, 0), 10.0) == 0.0


def test_crs_crossover_reference_geometry():
    snr = 10 ** (np.arange(0, 41) / 10)
    lk = links(0.1, 1.0, 0.1)
    crs = crs_noma_capacity(lk, 0.8, 0.2, snr).sum_rate
    df = conventional_df_capacity(lk, snr)
    i = crossover_index(crs, df)
    assert i is not None and 1 <= i <= 40


def test_crossover_index_rules():
    assert crossover_index([0, 0, 2, 2], [1, 1, 1, 1]) == 2
    assert crossover_index([2, 2], [1, 1]) is None
    assert crossover_index([0, 2, 0], [1, 1, 1]) is None


# -- relay selection --------------------------------------------------------------

def test_relay_select_examples():
    c = [(2.0, 1.0), (1.5, 3.0), (2.5, 2.0)]
    assert two_stage_relay_select(c, 1.8) == (2, True)
    assert two_stage_relay_select(c, 9.0) == (2, False)
    assert two_stage_relay_select([(1.0, 0.1)], 0.5) == (0, True)
    with pytest.raises(ValueError):
        two_stage_relay_select([], 1.0)
