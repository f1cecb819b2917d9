"""
Experiment configuration, execution and CSV emission.

A run config is a TOML file with a few top-level keys and one
``[scenario]`` table::

    experiment = "rate_region"
    seed = 1
    trials = 1
    output_path = "fig3.csv"

    [scenario]
    strong_gain = 10.0
    weak_gain = 1.0
    total_power = 10.0
    grid_points = 101

Unknown keys and out-of-range values are rejected before anything runs.
Closed-form values are written with 17 significant digits, Monte Carlo
statistics with 6.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import clustering, coop, mimo, power, siso
from .channel import ChannelModel, UserChannel
from .errors import ConfigError
from .montecarlo import run_trials, summarize_mean

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = ["ExperimentConfig", "load_config", "parse_config", "run", "reproduce",
           "FIGURES", "EXPERIMENTS"]

MAX_SEED = 2 ** 64 - 1


# -- validation helpers -------------------------------------------------------

def _num(lo=None, hi=None, lo_open=False, integer=False):
    def check(name, v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{name}: expected a number, got {v!r}")
        if integer and (not isinstance(v, int)):
            raise ConfigError(f"{name}: expected an integer, got {v!r}")
        if not math.isfinite(v):
            raise ConfigError(f"{name}: must be finite")
        if lo is not None and (v <= lo if lo_open else v < lo):
            raise ConfigError(f"{name}: must be {'>' if lo_open else '>='} {lo}, got {v}")
        if hi is not None and v > hi:
            raise ConfigError(f"{name}: must be <= {hi}, got {v}")
        return int(v) if integer else float(v)
    return check


def _list(item, min_len=1, max_len=None):
    def check(name, v):
        if not isinstance(v, list):
            raise ConfigError(f"{name}: expected a list, got {v!r}")
        if len(v) < min_len or (max_len is not None and len(v) > max_len):
            raise ConfigError(f"{name}: expected between {min_len} and {max_len} entries")
        return [item(f"{name}[{i}]", x) for i, x in enumerate(v)]
    return check


def _choice(*options):
    def check(name, v):
        if v not in options:
            raise ConfigError(f"{name}: must be one of {', '.join(options)}, got {v!r}")
        return v
    return check


def _flag(name, v):
    if not isinstance(v, bool):
        raise ConfigError(f"{name}: expected true or false, got {v!r}")
    return v


POS = _num(0.0, lo_open=True)
NONNEG = _num(0.0)
SHARE = _num(0.0, 1.0)
DB = _num(-100.0, 200.0)

# experiment -> {key: (default, validator)}; a default of None means required
EXPERIMENTS = {
    "rate_region": {
        "strong_gain": (10.0, POS), "weak_gain": (1.0, POS), "noise_psd": (1.0, POS),
        "total_power": (10.0, POS), "grid_points": (101, _num(2, 10 ** 6, integer=True)),
    },
    "sum_capacity_vs_bw": {
        "strong_gain": (10.0, POS), "weak_gain": (1.0, POS), "noise_psd": (1.0, POS),
        "total_power": (10.0, POS), "powers": ([4.5, 5.5], _list(NONNEG, 2, 2)),
        "grid_points": (101, _num(2, 10 ** 6, integer=True)),
    },
    "pa_strategy_bench": {
        "gains": ([10.0, 1.0], _list(POS, 1, 64)), "noise_psd": (1.0, POS),
        "total_power": (10.0, POS),
        "strategies": (["fixed", "ftpc", "maxmin", "sumrate", "cr_inspired", "dynamic"],
                       _list(_choice("fixed", "ftpc", "maxmin", "sumrate",
                                     "cr_inspired", "dynamic"), 1, 6)),
        "fixed_ratios": ([0.2, 0.8], _list(SHARE, 1, 64)),
        "ftpc_decay": (1.0, NONNEG), "maxmin_tolerance": (1e-9, POS),
        "cr_target_rate": (1.0, POS),
        "dynamic_split": ([0.5, 0.5], _list(SHARE, 2, 2)),
        "dynamic_ratios": ([0.5, 0.5], _list(SHARE, 2, 2)),
    },
    "pairing_bench": {
        "gains": ([8.0, 6.0, 4.0, 3.0, 2.0, 1.0], _list(POS, 1, 1024)),
        "noise_psd": (1.0, POS), "block_power": (10.0, POS),
        "fixed_ratios": ([0.2, 0.8], _list(SHARE, 2, 2)),
        "leftover_mode": ("oma", _choice("oma", "virtual")),
    },
    "mimo_ergodic": {
        "n_tx": (2, _num(1, 16, integer=True)), "n_rx": (2, _num(1, 16, integer=True)),
        "snr_db": ([20.0, 25.0, 30.0, 35.0, 40.0], _list(DB, 1, 100)),
        "attenuation": ([1.0, 0.1, 0.01], _list(POS, 1, 20)),
        "alphas": ([0.25, 0.75], _list(SHARE, 2, 2)),
    },
    "coop_outage": {
        "bs_mean_gains": ([1.0, 0.01], _list(POS, 2, 8)),
        "inter_mean_gains": ([0.01], _list(POS, 1, 28)),
        "fading": ("rayleigh", _choice("rayleigh", "rician")),
        "k_factor": (0.0, NONNEG),
        "direct_shares": ([0.2, 0.8], _list(SHARE, 2, 8)),
        "relay_shares": (None, _list(_list(SHARE, 1, 7), 1, 7)),
        "snr_db": ([10.0, 20.0, 30.0, 35.0, 40.0], _list(DB, 1, 100)),
        "target_rates": ([1.0, 1.0], _list(POS, 2, 8)),
        "prelog": (None, _num(0.0, 1.0, lo_open=True)),
    },
    "crs_sweep": {
        "g_sd": (0.1, NONNEG), "g_sr": (1.0, NONNEG), "g_rd": (0.1, NONNEG),
        "a1": (0.8, SHARE), "a2": (0.2, SHARE), "noise_psd": (1.0, POS),
        "snr_db": (None, _list(DB, 1, 10000)),
        "snr_db_start": (0.0, DB), "snr_db_stop": (40.0, DB), "snr_db_step": (1.0, POS),
        "joint_detection": (False, _flag),
    },
}

@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    scenario: dict
    trials: int = 1
    seed: int = 0
    output_path: str = "results.csv"
    extra: dict = field(default_factory=dict)


def parse_config(data):
    """Validate a config mapping and fill in defaults.

    Raises
    ------
    ConfigError
        Naming the first offending field.
    """
    if not isinstance(data, dict):
        raise ConfigError("config must be a table")
    allowed = {"experiment", "seed", "trials", "output_path", "scenario"}
    for k in data:
        if k not in allowed:
            raise ConfigError(f"{k}: unknown key")
    exp = data.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"experiment: must be one of {', '.join(EXPERIMENTS)}, got {exp!r}")
    seed = _num(0, MAX_SEED, integer=True)("seed", data.get("seed", 0))
    trials = _num(1, 10 ** 9, integer=True)("trials", data.get("trials", 1))
    out = data.get("output_path", "results.csv")
    if not isinstance(out, str) or not out:
        raise ConfigError("output_path: expected a non-empty string")
    raw = data.get("scenario", {})
    if not isinstance(raw, dict):
        raise ConfigError("scenario: expected a table")
    schema = EXPERIMENTS[exp]
    scen = {}
    for k, v in raw.items():
        if k not in schema:
            raise ConfigError(f"scenario.{k}: unknown key for experiment {exp}")
        scen[k] = schema[k][1](f"scenario.{k}", v)
    for k, (default, _) in schema.items():
        if k not in scen:
            scen[k] = default
    _cross_check(exp, scen)
    return ExperimentConfig(exp, scen, trials, seed, out)


def _cross_check(exp, s):
    if exp == "sum_capacity_vs_bw" and sum(s["powers"]) > s["total_power"] * (1 + 1e-12):
        raise ConfigError("scenario.powers: sum exceeds scenario.total_power")
    if exp in ("rate_region", "sum_capacity_vs_bw") and s["strong_gain"] < s["weak_gain"]:
        raise ConfigError("scenario.strong_gain: must be >= scenario.weak_gain")
    if exp == "pa_strategy_bench":
        if "fixed" in s["strategies"]:
            if len(s["fixed_ratios"]) != len(s["gains"]):
                raise ConfigError("scenario.fixed_ratios: need one ratio per user")
            if abs(sum(s["fixed_ratios"]) - 1) > 1e-12:
                raise ConfigError("scenario.fixed_ratios: must sum to 1")
        if len(s["gains"]) != 2 and {"cr_inspired", "dynamic"} & set(s["strategies"]):
            raise ConfigError("scenario.strategies: cr_inspired and dynamic need 2 users")
        if abs(sum(s["dynamic_split"]) - 1) > 1e-12:
            raise ConfigError("scenario.dynamic_split: must sum to 1")
        if sum(s["dynamic_ratios"]) > 1 + 1e-12:
            raise ConfigError("scenario.dynamic_ratios: must sum to at most 1")
    if exp == "pairing_bench" and abs(sum(s["fixed_ratios"]) - 1) > 1e-12:
        raise ConfigError("scenario.fixed_ratios: must sum to 1")
    if exp == "mimo_ergodic":
        if s["n_rx"] < s["n_tx"]:
            raise ConfigError("scenario.n_rx: zero-forcing needs n_rx >= n_tx")
        if sum(s["alphas"]) > 1 + 1e-12:
            raise ConfigError("scenario.alphas: must sum to at most 1")
    if exp == "coop_outage":
        K = len(s["bs_mean_gains"])
        for key, n in (("direct_shares", K), ("target_rates", K),
                       ("inter_mean_gains", K * (K - 1) // 2)):
            if len(s[key]) != n:
                raise ConfigError(f"scenario.{key}: expected {n} entries for {K} users")
        if sum(s["direct_shares"]) > 1 + 1e-12:
            raise ConfigError("scenario.direct_shares: must sum to at most 1")
        if s["relay_shares"] is not None:
            rs = s["relay_shares"]
            if len(rs) != K - 1 or any(len(r) != K - 1 - m for m, r in enumerate(rs)):
                raise ConfigError("scenario.relay_shares: slot m needs K-1-m shares")
            if any(sum(r) > 1 + 1e-12 for r in rs):
                raise ConfigError("scenario.relay_shares: each slot must sum to at most 1")
    if exp == "crs_sweep":
        if not s["a1"] > s["a2"]:
            raise ConfigError("scenario.a1: must exceed scenario.a2")
        if abs(s["a1"] + s["a2"] - 1) > 1e-12:
            raise ConfigError("scenario.a2: a1 + a2 must equal 1")
        if s["snr_db"] is None and s["snr_db_stop"] < s["snr_db_start"]:
            raise ConfigError("scenario.snr_db_stop: must be >= snr_db_start")


def load_config(path):
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e
    return parse_config(data)


# -- experiments ---------------------------------------------------------------

def _g(x):
    return format(float(x), ".17g")


def _m(x):
    return format(float(x), ".6g")


def _rate_region(cfg, threads):
    s = cfg.scenario
    n = s["noise_psd"]
    reg = siso.rate_region_sweep(UserChannel.scalar(s["strong_gain"], n),
                                 UserChannel.scalar(s["weak_gain"], n),
                                 s["total_power"], s["grid_points"])
    header = ["alpha_strong", "R_weak_noma", "R_strong_noma", "R_weak_oma", "R_strong_oma"]
    rows = [[_g(a), _g(nw), _g(ns), _g(ow), _g(os_)]
            for a, (nw, ns), (ow, os_) in zip(reg.alpha_strong, reg.noma, reg.oma_equal_bw)]
    summary = [f"R_strong_noma at R_weak=1: {reg.strong_rate_at('noma', 1.0):.6f}",
               f"R_strong_oma (equal BW) at R_weak=1: {reg.strong_rate_at('oma_equal_bw', 1.0):.6f}"]
    return header, rows, summary


def _sum_capacity(cfg, threads):
    s = cfg.scenario
    n = s["noise_psd"]
    pa = siso.PowerAllocation.ordered(s["powers"], s["total_power"])
    curve = siso.sum_capacity_vs_bandwidth(UserChannel.scalar(s["strong_gain"], n),
                                           UserChannel.scalar(s["weak_gain"], n),
                                           s["total_power"], pa, s["grid_points"])
    header = ["W", "sum_noma", "sum_oma"]
    rows = [[_g(w), _g(a), _g(b)]
            for w, a, b in zip(curve.bandwidth_strong, curve.sum_noma, curve.sum_oma)]
    summary = [f"sum_noma: {curve.sum_noma[0]:.6f}",
               f"max sum_oma: {curve.sum_oma.max():.6f}"]
    return header, rows, summary


def _pa_bench(cfg, threads):
    s = cfg.scenario
    n = s["noise_psd"]
    chans = [UserChannel.scalar(g, n) for g in s["gains"]]
    strengths = [c.strength for c in chans]
    P = s["total_power"]
    header = ["strategy", "user", "power", "rate"]
    rows, summary = [], []
    for kind in s["strategies"]:
        strat = power.PaStrategy(
            kind, ratios=tuple(s["fixed_ratios"]), decay=s["ftpc_decay"],
            tolerance=s["maxmin_tolerance"], weak_target_rate=s["cr_target_rate"],
            oma_split=tuple(s["dynamic_split"]), oma_ratios=tuple(s["dynamic_ratios"]))
        pa = power.allocate(strat, strengths, P)
        rep = siso.downlink_noma_rates(chans, pa)
        for u, (p, r) in enumerate(zip(pa.powers, rep.per_user_rate)):
            rows.append([kind, str(u), _g(p), _g(r)])
        summary.append(f"{kind}: sum {rep.sum_rate:.6f}, min {min(rep.per_user_rate):.6f}")
    return header, rows, summary


def _pair_rates(chans, users, power_total, ratios):
    # F-PA NOMA pair vs equal-band FDMA with the same powers.
    sub = [chans[u] for u in users]
    pa = siso.PowerAllocation.ordered([r * power_total for r in ratios], power_total)
    noma = siso.downlink_noma_rates(sub, pa)
    oma = siso.downlink_oma_rates(sub, pa, siso.BandwidthSplit([0.5, 0.5]))
    return noma, oma


def _pairing_bench(cfg, threads):
    s = cfg.scenario
    n = s["noise_psd"]
    chans = [UserChannel.scalar(g, n) for g in s["gains"]]
    strengths = [c.strength for c in chans]
    P, ratios = s["block_power"], s["fixed_ratios"]
    plans = []
    if len(chans) % 2 == 0:
        plans += [("best_worst", clustering.best_worst_pairing(strengths)),
                  ("two_group", clustering.two_group_pairing(strengths))]
    plans.append(("hybrid", clustering.hybrid_assign(strengths, s["leftover_mode"])))
    header = ["scheme", "block", "mode", "users", "rates_noma", "sum_noma", "sum_oma"]
    rows, summary = [], []
    for name, plan in plans:
        total_noma = total_oma = 0.0
        virtual = {m.strong_index: u for u, m in zip(plan.leftovers, plan.modes)
                   if m.kind == "virtual"}
        block = 0
        for strong, weak in plan.pairs:
            if strong in virtual:
                extra = virtual[strong]
                half = siso.PowerAllocation.ordered([r * P / 2 for r in ratios], P / 2)
                rep = clustering.virtual_pairing_rates(chans[strong], chans[weak],
                                                       chans[extra], half, half)
                users = [strong, weak, extra]
                g = [chans[u].power_gain for u in users]
                pw = [ratios[0] * P, ratios[1] * P / 2, ratios[1] * P / 2]
                oma = float(siso.oma_rates(g, n, pw, [1 / 3] * 3).sum())
                mode, rates = "virtual", rep.per_user_rate
            else:
                users = [strong, weak]
                rep, orep = _pair_rates(chans, users, P, ratios)
                mode, rates, oma = "pair", rep.per_user_rate, orep.sum_rate
            rows.append([name, str(block), mode, ";".join(map(str, users)),
                         ";".join(_g(r) for r in rates), _g(sum(rates)), _g(oma)])
            total_noma += sum(rates)
            total_oma += oma
            block += 1
        for u, m in zip(plan.leftovers, plan.modes):
            if m.kind == "oma":
                r = float(np.log2(1 + P * chans[u].strength))
                rows.append([name, str(block), "oma_fallback", str(u), _g(r), _g(r), _g(r)])
                total_noma += r
                total_oma += r
                block += 1
        summary.append(f"{name}: sum_noma {total_noma:.6f}, sum_oma {total_oma:.6f}")
    return header, rows, summary


def _mimo_ergodic(cfg, threads):
    s = cfg.scenario
    gains = run_trials(lambda t: mimo.zf_cluster_gains(cfg.seed, t, s["n_rx"], s["n_tx"]),
                       cfg.trials, threads)
    header = ["attenuation", "snr_db",
              "mean_noma", "ci95_low_noma", "ci95_high_noma",
              "mean_oma", "ci95_low_oma", "ci95_high_oma",
              "mean_gap", "ci95_low_gap", "ci95_high_gap", "trials"]
    rows, summary = [], []
    for att in s["attenuation"]:
        for db in s["snr_db"]:
            noma, oma = mimo.ergodic_cluster_sum_rates(gains, att, 10 ** (db / 10),
                                                       tuple(s["alphas"]))
            # one value per trial: mean cluster sum rate over the clusters
            noma, oma = noma.mean(-1), oma.mean(-1)
            row = [_g(att), _g(db)]
            for name, x in (("noma", noma), ("oma", oma), ("gap", noma - oma)):
                st = summarize_mean(name, x)
                row += [_m(st.mean), _m(st.ci95_low), _m(st.ci95_high)]
            rows.append(row + [str(cfg.trials)])
        summary.append(f"attenuation {att:g}: gap at {s['snr_db'][-1]:g} dB = {rows[-1][8]}")
    return header, rows, summary


def coop_scenario(s):
    K = len(s["bs_mean_gains"])

    def model(msg):
        if s["fading"] == "rician":
            return ChannelModel.rician(s["k_factor"], msg)
        return ChannelModel.rayleigh(msg)

    links = [(m, k) for m in range(K) for k in range(m + 1, K)]
    scen = coop.CoopScenario(tuple(model(g) for g in s["bs_mean_gains"]),
                             {lk: model(g) for lk, g in zip(links, s["inter_mean_gains"])})
    shares = s["relay_shares"]
    if shares is None:
        shares = [[1.0 / (K - 1 - m)] * (K - 1 - m) for m in range(K - 1)]
    plan = coop.PhasePowerPlan(siso.PowerAllocation.ordered(s["direct_shares"], 1.0),
                               tuple(tuple(r) for r in shares))
    return scen, plan


def _coop_outage(cfg, threads):
    s = cfg.scenario
    scen, plan = coop_scenario(s)
    spec = coop.OutageSpec(tuple(s["target_rates"]), s["prelog"])
    gains = coop.sample_coop_gains(scen, cfg.trials, cfg.seed, threads)
    header = ["snr_db", "user", "outage_coop", "ci95_low_coop", "ci95_high_coop",
              "outage_noncoop", "ci95_low_noncoop", "ci95_high_noncoop", "trials"]
    rows, summary = [], []
    for db in s["snr_db"]:
        res = coop.cnoma_outage_mc(scen, plan.scaled(10 ** (db / 10)), spec,
                                   cfg.trials, cfg.seed, gains=gains)
        for k, (c, nc) in enumerate(zip(res["coop"], res["noncoop"])):
            rows.append([_g(db), str(k), _m(c.mean), _m(c.ci95_low), _m(c.ci95_high),
                         _m(nc.mean), _m(nc.ci95_low), _m(nc.ci95_high), str(cfg.trials)])
    last = [r for r in rows if r[0] == _g(s["snr_db"][-1])]
    for r in last:
        summary.append(f"user {r[1]} at {s['snr_db'][-1]:g} dB: coop {r[2]}, noncoop {r[5]}")
    return header, rows, summary


def crs_snr_grid(s):
    if s["snr_db"] is not None:
        return np.asarray(s["snr_db"], dtype=float)
    n = int(math.floor((s["snr_db_stop"] - s["snr_db_start"]) / s["snr_db_step"] + 1e-9)) + 1
    return s["snr_db_start"] + s["snr_db_step"] * np.arange(n)


def _crs_sweep(cfg, threads):
    s = cfg.scenario
    links = coop.RelayLinks(math.sqrt(s["g_sd"]), math.sqrt(s["g_sr"]),
                            math.sqrt(s["g_rd"]), s["noise_psd"])
    db = crs_snr_grid(s)
    P = 10 ** (db / 10)
    crs = coop.crs_noma_capacity(links, s["a1"], s["a2"], P, s["joint_detection"])
    df = coop.conventional_df_capacity(links, P)
    header = ["snr_db", "sum_crs", "rate_x1", "rate_x2", "rate_df", "relay_decodes_x1"]
    rows = [[_g(d), _g(a), _g(b), _g(c), _g(e), str(bool(ok)).lower()]
            for d, a, b, c, e, ok in zip(db, crs.sum_rate, crs.rate_x1, crs.rate_x2, df,
                                         crs.relay_decodes_x1)]
    cross = coop.crossover_index(crs.sum_rate, df)
    summary = ["no crossover in range" if cross is None
               else f"CRS-NOMA ahead of DF from {db[cross]:g} dB on"]
    return header, rows, summary


RUNNERS = {
    "rate_region": _rate_region, "sum_capacity_vs_bw": _sum_capacity,
    "pa_strategy_bench": _pa_bench, "pairing_bench": _pairing_bench,
    "mimo_ergodic": _mimo_ergodic, "coop_outage": _coop_outage, "crs_sweep": _crs_sweep,
}


def render_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def execute(cfg, threads=1):
    """Run an experiment and return ``(csv_text, summary_lines)``."""
    header, rows, summary = RUNNERS[cfg.experiment](cfg, max(1, int(threads)))
    return render_csv(header, rows), summary


def run(cfg, threads=1, out=None, stdout=None):
    """Run ``cfg``, write its CSV and print the summary.

    Returns the CSV text.
    """
    text, summary = execute(cfg, threads)
    path = out or cfg.output_path
    if path == "-":
        (stdout or sys.stdout).write(text)
    else:
        with open(path, "w", newline="", encoding="utf-8") as f:
            f.write(text)
    # keep stdout pure CSV when it carries the data
    stream = stdout or (sys.stderr if path == "-" else sys.stdout)
    stream.write(f"{cfg.experiment}: {len(text.splitlines()) - 1} rows -> {path}\n")
    for line in summary:
        stream.write(f"  {line}\n")
    return text


# -- canonical figure recipes ----------------------------------------------------

FIGURES = {
    "fig3": {"experiment": "rate_region", "output_path": "fig3.csv",
             "scenario": {"strong_gain": 10.0, "weak_gain": 1.0, "total_power": 10.0,
                          "grid_points": 1001}},
    "fig4": {"experiment": "sum_capacity_vs_bw", "output_path": "fig4.csv",
             "scenario": {"strong_gain": 10.0, "weak_gain": 1.0, "total_power": 10.0,
                          "powers": [4.5, 5.5], "grid_points": 101}},
    "fig7_trend": {"experiment": "mimo_ergodic", "output_path": "fig7_trend.csv",
                   "trials": 10000, "seed": 7, "scenario": {}},
    "coop_outage": {"experiment": "coop_outage", "output_path": "coop_outage.csv",
                    "trials": 100000, "seed": 5, "scenario": {}},
    "crs": {"experiment": "crs_sweep", "output_path": "crs.csv", "scenario": {}},
}


def figure_config(figure, seed=None, trials=None, out=None):
    if figure not in FIGURES:
        raise ConfigError(f"figure: must be one of {', '.join(FIGURES)}, got {figure!r}")
    data = {k: (dict(v) if isinstance(v, dict) else v) for k, v in FIGURES[figure].items()}
    if seed is not None:
        data["seed"] = seed
    if trials is not None:
        data["trials"] = trials
    if out is not None:
        data["output_path"] = out
    return parse_config(data)


def reproduce(figure, seed=None, trials=None, out=None, threads=1, stdout=None):
    """Run the built-in config behind ``figure`` and write its CSV."""
    return run(figure_config(figure, seed, trials, out), threads, stdout=stdout)
