"""Exit criteria for the toolkit, one group per criterion.

Each check prints a PASS/FAIL line; a per-criterion summary is printed at the
end of the pytest run (see conftest.py).
"""

import math
import random
import subprocess
import sys
from pathlib import Path

import pytest

import conftest
from vhcn import (
    ActiveUserDistribution,
    CacheNode,
    ContentionScenario,
    NetworkPath,
    PonScenario,
    PonStandard,
    b_percentile,
    cache_efficiency,
    cache_speedup,
    critical_rtt,
    effective_throughput,
    mathis_throughput,
    per_user_bitrate,
    percentile_active,
    prob_full_speed,
    project_demand,
    required_link_capacity,
    required_plr,
    required_rtt,
    upstream_bandwidth,
)
from vhcn import pon_dim
from vhcn.report import parse_csv, render_csv, run
from vhcn.scenario import load_scenario

ROOT = Path(__file__).resolve().parents[1]

STANDARDS = [PonStandard("GPON", 2.5e9), PonStandard("XGPON", 10e9), PonStandard("TWDM-PON", 40e9)]
FILLINGS = [1.0, 0.6, 0.25, 0.08]
BASE = PonScenario(splitting_factor=64, activity_factor=0.15, b_max=1e9, availability=0.99)

# published reference grid, percent and Mbit/s
PRINTED_BETA = {
    "GPON": [0.0, 6.1, 56.1, 97.4],
    "XGPON": [63.8, 97.9, 100.0, 100.0],
    "TWDM-PON": [100.0, 100.0, 100.0, 100.0],
}
PRINTED_B99 = {
    "GPON": [147.1, 227.3, 416.7, 1000.0],
    "XGPON": [588.2, 909.1, 1000.0, 1000.0],
    "TWDM-PON": [1000.0, 1000.0, 1000.0, 1000.0],
}
# GPON at 8% filling: the exact model puts 3 users at the 99th percentile
# (CDF(2; 5, 0.15) = 0.9734 < 0.99), i.e. 2500/3 Mbit/s, while the table prints 1,000.
GPON_LITTLE_MODEL_B99 = 833.3

CELLS = [(std, i, f) for std in STANDARDS for i, f in enumerate(FILLINGS)]
CELL_IDS = [f"{std.name}@{f:.0%}" for std, _, f in CELLS]


def record(criterion, ok, detail):
    conftest.ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


# --- 1. reference grid golden values -----------------------------------------

@pytest.mark.parametrize("std, col, filling", CELLS, ids=CELL_IDS)
def test_c1_beta_cell(std, col, filling):
    beta = 100 * prob_full_speed(std, BASE.with_filling(filling))
    printed = PRINTED_BETA[std.name][col]
    record(1, abs(beta - printed) <= 0.1,
           f"beta {std.name}@{filling:.0%}: model {beta:.3f}% vs printed {printed}% (tol 0.1 pp)")


@pytest.mark.parametrize("std, col, filling", CELLS, ids=CELL_IDS)
def test_c1_b99_cell(std, col, filling):
    b = b_percentile(std, BASE.with_filling(filling)) / 1e6
    if std.name == "GPON" and filling == 0.08:
        record(1, abs(b - GPON_LITTLE_MODEL_B99) <= 0.1,
               f"B_99 GPON@8%: model {b:.2f} Mbit/s vs expected {GPON_LITTLE_MODEL_B99} "
               "(printed 1,000: known divergence, exact model asserted)")
        return
    printed = PRINTED_B99[std.name][col]
    record(1, abs(b - printed) <= 0.1,
           f"B_99 {std.name}@{filling:.0%}: model {b:.2f} vs printed {printed} Mbit/s (tol 0.1)")


# --- 2. Mathis window --------------------------------------------------------

def test_c2_mathis_window():
    eff = effective_throughput(NetworkPath(1e9, 1e-3, 1e-3, mss=1450, mathis_c=1.0))
    record(2, 350e6 <= eff <= 400e6, f"1 ms / 0.1%: effective {eff / 1e6:.2f} Mbit/s in [350, 400]")
    th = mathis_throughput(NetworkPath(1e9, 0.5e-3, 5e-4, mss=1450, mathis_c=1.0))
    record(2, th >= 1e9, f"0.5 ms / 0.05%: uncapped {th / 1e6:.2f} Mbit/s >= 1000")


# --- 3. Contention worked examples --------------------------------------------

def test_c3_contention():
    br = per_user_bitrate(ContentionScenario(1e9, 1000, 0.10))
    record(3, br == 10e6, f"per-user rate {br!r} == 10e6")
    cap = required_link_capacity(50e6, 1000, 0.10)
    record(3, cap == 5e9, f"required capacity {cap!r} == 5e9")
    for g in (0.25, 0.26, 0.27, 0.28, 0.29, 0.30):
        d = project_demand(50e6, g, 3)
        record(3, 97e6 <= d <= 110e6, f"growth {g:.2f} over 3 years: {d / 1e6:.2f} Mbit/s in [97, 110]")


# --- 4. Cache legend ----------------------------------------------------------

def test_c4_cache():
    half = CacheNode(100e6, 50e6)
    e_c = cache_efficiency(half)
    record(4, e_c == 0.5, f"half offload E_c = {e_c!r}")
    record(4, cache_speedup(e_c) == 2.0, f"half offload S_u = {cache_speedup(e_c)!r}")
    none = CacheNode(100e6, 0.0)
    record(4, upstream_bandwidth(none) == none.b_out, f"no cache B_in = {upstream_bandwidth(none)!r}")


# --- 5. Monte Carlo oracle equivalence -----------------------------------------

MC_SAMPLES = 1_000_000
MC_SEED = 20240601


@pytest.mark.parametrize("std, col, filling", CELLS, ids=CELL_IDS)
def test_c5_monte_carlo(std, col, filling):
    scn = BASE.with_filling(filling)
    mc = pon_dim.monte_carlo(std, scn, MC_SAMPLES, MC_SEED)
    exact_b = b_percentile(std, scn)
    exact_beta = prob_full_speed(std, scn)
    if pon_dim.on_knife_edge(scn, MC_SAMPLES):
        record(5, True, f"{std.name}@{filling:.0%}: percentile on a CDF knife-edge, exact match not required")
    else:
        record(5, mc.b_percentile == exact_b,
               f"{std.name}@{filling:.0%}: MC B_99 {mc.b_percentile / 1e6:.3f} == exact {exact_b / 1e6:.3f}")
    se = math.sqrt(exact_beta * (1 - exact_beta) / MC_SAMPLES)
    diff = abs(mc.prob_full_speed - exact_beta)
    record(5, diff <= 3 * se,
           f"{std.name}@{filling:.0%}: MC beta {mc.prob_full_speed:.6f} vs exact {exact_beta:.6f}, "
           f"|diff| {diff:.2e} <= 3 SE {3 * se:.2e}")


# --- 6. Property suites (deterministic grids) ---------------------------------

def _grid(seed=12345, n=200):
    rng = random.Random(seed)
    for _ in range(n):
        yield (10 ** rng.uniform(4, 11), 10 ** rng.uniform(-5, 0), 10 ** rng.uniform(-8, -1),
               rng.uniform(100, 9000), rng.uniform(0.8, 1.3), rng.uniform(1.1, 50))


def test_c6_mathis_laws():
    ok = True
    for br, rtt, plr, m, c, k in _grid():
        base = mathis_throughput(NetworkPath(br, rtt, plr, m, c))
        slower = mathis_throughput(NetworkPath(br, rtt * k, plr, m, c))
        ok &= slower < base and math.isclose(slower, base / k, rel_tol=1e-12)
        if plr * k < 1:
            lossier = mathis_throughput(NetworkPath(br, rtt, plr * k, m, c))
            ok &= lossier < base and math.isclose(lossier, base / math.sqrt(k), rel_tol=1e-12)
    record(6, ok, "Mathis monotonicity and exact 1/k, 1/sqrt(k) scaling")


def test_c6_min_cap():
    ok = True
    for br, rtt, plr, m, c, _ in _grid(1):
        path = NetworkPath(br, rtt, plr, m, c)
        eff, ca = effective_throughput(path), mathis_throughput(path)
        ok &= eff <= br and eff <= ca and (eff == br or eff == ca)
    record(6, ok, "effective throughput = min(Mathis, bit-rate)")


def test_c6_fixed_point_and_inverses():
    worst = 0.0
    for br, rtt, plr, m, c, _ in _grid(2):
        r = critical_rtt(br, plr, m, c)
        worst = max(worst, abs(mathis_throughput(NetworkPath(br, r, plr, m, c)) / br - 1))
        r = required_rtt(br, plr, m, c)
        worst = max(worst, abs(mathis_throughput(NetworkPath(1e9, r, plr, m, c)) / br - 1))
        p = required_plr(br, rtt, m, c)
        if 0 < p < 0.99:
            worst = max(worst, abs(mathis_throughput(NetworkPath(1e9, rtt, p, m, c)) / br - 1))
    record(6, worst <= 1e-9, f"critical_rtt fixed point and inverse round-trips, worst rel err {worst:.1e}")


def test_c6_binomial_normalization_and_minimality():
    worst = 0.0
    minimal = True
    for n in range(0, 65):
        for p in (0.01, 0.15, 0.5, 0.93):
            dist = ActiveUserDistribution(n, p)
            worst = max(worst, abs(math.fsum(dist.pmf(k) for k in range(n + 1)) - 1))
            for a in (0.5, 0.9, 0.99, 0.999):
                k = percentile_active(dist, a)
                minimal &= a <= dist.cdf(k) and (k == 0 or dist.cdf(k - 1) < a)
    record(6, worst <= 1e-12, f"pmf normalization, worst |sum - 1| {worst:.1e}")
    record(6, minimal, "percentile minimality cdf(k*-1) < p <= cdf(k*)")


def test_c6_contention_laws():
    ok = True
    rng = random.Random(3)
    for _ in range(200):
        cap, users, s = 10 ** rng.uniform(6, 12), rng.randint(1, 100_000), rng.uniform(1e-3, 1)
        sc = ContentionScenario(cap, users, s)
        ok &= math.isclose(per_user_bitrate(sc) * sc.simultaneous_users, cap, rel_tol=1e-12)
        base, g, a, b = 10 ** rng.uniform(0, 12), rng.uniform(0, 1), rng.randint(0, 20), rng.randint(0, 20)
        ok &= math.isclose(project_demand(project_demand(base, g, a), g, b), project_demand(base, g, a + b),
                           rel_tol=1e-12)
    record(6, ok, "contention conservation BR * N_c = BR_a and growth composition")


def test_c6_csv_round_trip():
    report = run(load_scenario((ROOT / "scenarios" / "worked_examples.ini").read_text()))
    parsed = parse_csv(render_csv(report))
    records = [r for s in report.sections for r in s.records]
    ok = len(parsed) == len(records)
    for row, rec in zip(parsed, records):
        if isinstance(rec.value, (bool, str)):
            ok &= row[3] == rec.value
        else:
            ok &= row[3] == float(rec.value)
    record(6, ok, f"CSV round trip over {len(records)} records")


def test_c6_cli_determinism():
    cmd = [sys.executable, "-m", "vhcn.cli", "run", str(ROOT / "scenarios" / "worked_examples.ini"), "--format", "csv"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    record(6, outs[0] == outs[1] and len(outs[0]) > 0, f"CLI repeated runs byte-identical ({len(outs[0])} bytes)")


# --- 7. GPON medium filling below 500 Mbit/s -----------------------------------

def test_c7_gpon_medium():
    b = b_percentile(STANDARDS[0], BASE.with_filling(0.25))
    record(7, b < 500e6, f"GPON@25% B_99 {b / 1e6:.1f} Mbit/s < 500")
