"""One test per acceptance criterion; each records a PASS/FAIL line."""
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import disc_brute
from psthue import beatty, census, checks, fourier
from psthue.digitcore import Word, thue_morse_prefix
from psthue.fourier import CoeffBlock, ShiftProfile
from psthue.powerfloor import ExponentSpec, floor_power, floor_power_range

C75 = ExponentSpec.rational(7, 5)

# Block histograms of t(floor(n**(7/5))), L = 3, words 000..111, from a
# pure-Python count (iroot by integer search, popcount via bin()).
NORMALITY_FIXTURE = {
    10**4: [1252, 1231, 1242, 1261, 1231, 1271, 1261, 1251],
    10**5: [12434, 12499, 12604, 12482, 12500, 12586, 12482, 12413],
    10**6: [125328, 124705, 124777, 125231, 124705, 125302, 125230, 124722],
}
NORMALITY_THRESHOLD = 0.01


@pytest.fixture(scope="module")
def fourier_tables():
    rng = random.Random(20240601)
    out = []
    t0 = time.perf_counter()
    for _ in range(200):
        L = rng.randint(1, 3)
        r = rng.randint(L, 64)
        lam = rng.randint(0, 10)
        i = ShiftProfile.random(L, r, rng)
        b = CoeffBlock((1,) + tuple(rng.randint(0, 1) for _ in range(L - 1)), r)
        d = rng.randrange(1 << lam)
        out.append((fourier.fourier_recursive(lam, i, b, d), fourier.fourier_direct(lam, i, b, d)))
    return out, time.perf_counter() - t0


def test_01_recurrence_equals_direct(fourier_tables, record):
    tables, secs = fourier_tables
    worst = max(float(np.max(np.abs(a.entries - b.entries))) for a, b in tables)
    ok = worst <= 1e-9 and secs < 60
    record(1, ok, f"200 instances, max |rec - direct| = {worst:.2e}, {secs:.1f} s")
    assert ok


def test_02_parseval(fourier_tables, record):
    tables, _ = fourier_tables
    worst = max(abs(t.parseval() - 1) for pair in tables for t in pair)
    ok = worst <= 1e-9
    record(2, ok, f"400 tables, max |sum |G|^2 - 1| = {worst:.2e}")
    assert ok


def test_03_good_position_census(record):
    t0 = time.perf_counter()
    lam, x, m = 20, 10, 5
    rng = random.Random(3)
    ok = True
    for i in (ShiftProfile.zero(1, 1 << x), ShiftProfile.random(1, 3 << x, rng)):
        dist = fourier.good_set_distribution(lam, i.r, m, i)
        ok &= len(dist) == 4 and sum(dist.values()) == 1 << lam
        ok &= all(n == fourier.census_formula(lam, x, m, len(M)) for M, n in dist.items())
    secs = time.perf_counter() - t0
    ok &= secs < 300
    counts = {tuple(sorted(M)): n for M, n in dist.items()}
    record(3, ok, f"counts {counts} sum to 2^20, formula exact, {secs:.1f} s")
    assert ok


def test_04_saving(record):
    t0 = time.perf_counter()
    rng = random.Random(4)
    m, r = 5, 1 << 10
    b = CoeffBlock((1,), r)
    cases = bad = 0
    for _ in range(20):
        i = fourier.random_prepared_profile(1, r, m, rng)
        assert i.at_r % 32 in (1, 2)
        for z in (0, 3, 5):
            for d in range(1 << z):
                lhs, rhs = fourier.saving_gap_table(z, m, i, b, d)
                cases += len(lhs)
                bad += int(np.count_nonzero(lhs > (1 - 2 / 1024) * rhs + 1e-9))
    secs = time.perf_counter() - t0
    ok = bad == 0 and secs < 600
    record(4, ok, f"{cases} (profile, z, d, h) cases, {bad} violations, {secs:.1f} s")
    assert ok


def test_05_normality_trend(record):
    t0 = time.perf_counter()
    rep = census.normality_report(C75, 3, sorted(NORMALITY_FIXTURE), threads=1)
    secs = time.perf_counter() - t0
    devs = [dev for _, dev in rep.rows]
    hist_ok = all([r.counts[str(w)] for w in [Word.from_code(c, 3) for c in range(8)]] == NORMALITY_FIXTURE[N]
                  for (N, _), r in zip(rep.rows, rep.reports))
    ok = hist_ok and all(b < a for a, b in zip(devs, devs[1:])) and devs[-1] <= NORMALITY_THRESHOLD and secs < 600
    record(5, ok, "max_dev " + ", ".join(f"{d:.3g}" for d in devs) + f", slope {rep.slope:.3f}, {secs:.1f} s")
    assert ok


def test_06_prefix_counts(record):
    t = thue_morse_prefix(16)
    zeros, ones = int(np.count_nonzero(t == 0)), int(np.count_nonzero(t == 1))
    ok = zeros == 8 and ones == 8 and t.tolist() == [0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0]
    record(6, ok, f"{zeros} zeros, {ones} ones in t_0..t_15")
    assert ok


def test_07_carry_grid(record):
    res = checks.check_carry("full")
    ok = res["holds"]
    record(7, ok, f"{res['cases']} (pair, lambda, r, L, N) cases, {res['failures']} violations")
    assert ok


def test_08_vdc(record):
    res = checks.check_vdc("full", seed=8)
    ok = res["holds"] and res["cases"] == 500
    record(8, ok, f"500 instances, {res['failures']} failures ({res['rhs_nonneg_failures']} rhs not real-nonnegative)")
    assert ok


def test_09_correlation(record):
    res = checks.check_correlation("full", seed=9)
    ok = res["holds"] and res["cases"] == 200
    record(9, ok, f"200 instances, max residual {res['max_residual']:.2e}")
    assert ok


def test_10_farey(record):
    res = checks.check_farey("full", seed=10)
    ok = res["holds"]
    record(10, ok, f"{res['cases']} neighbour pairs (n <= 64) and Dirichlet inputs, {res['failures']} failures")
    assert ok


def test_11_floor_power_cross_path(record):
    rng = random.Random(11)
    real = ExponentSpec.parse("1.4")
    ns = [rng.randrange(0, 10**12) for _ in range(10**5)]
    bad = sum(floor_power(n, real) != floor_power(n, C75) for n in ns)
    # the vectorised path on windows around 100 of the points
    for n in ns[:100]:
        got = floor_power_range(n, n + 1000, C75)
        bad += sum(int(g) != floor_power(k, C75) for k, g in zip(range(n, n + 1000), got))
    boundary = floor_power(4, ExponentSpec.rational(3, 2)) == 8 and floor_power(4, ExponentSpec.parse("1.5")) == 8
    ok = bad == 0 and boundary
    record(11, ok, f"10^5 scalar + 10^5 vector comparisons, {bad} disagreements; floor(4^(3/2)) = 8: {boundary}")
    assert ok


def test_12_discrepancy_oracle(record):
    rng = random.Random(12)
    exact_bad = 0
    float_err = 0.0
    for _ in range(100):
        x = rng.randrange(1, 10**7) / rng.randrange(1, 10**4)
        a = Fraction(x)  # the float is an exact binary rational
        N = rng.randint(1, 128)
        ref = disc_brute(a, N)
        exact_bad += beatty.discrepancy(a, N) != ref
        float_err = max(float_err, abs(beatty.discrepancy(x, N) - float(ref)))
    ok = exact_bad == 0 and float_err <= 1e-12
    record(12, ok, f"100 alpha, exact mismatches {exact_bad}, float path max error {float_err:.2e}")
    assert ok


def test_13_bv_trend(record):
    t0 = time.perf_counter()
    omega = Word((0, 1))
    norm = [census.ap_average_deviation(x, x**0.55, omega).normalized for x in (10**3, 10**4, 10**5)]
    secs = time.perf_counter() - t0
    ok = all(b < a for a, b in zip(norm, norm[1:])) and secs < 900
    record(13, ok, "aggregate/x " + ", ".join(f"{v:.4f}" for v in norm) + f", {secs:.1f} s")
    assert ok
