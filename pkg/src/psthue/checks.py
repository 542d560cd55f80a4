"""Batch runs of the lemma checkers, each returning a summary with ``holds``."""
from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from . import beatty, fourier, powerfloor, sumlab
from .beatty import BeattyParams

BUDGETS = ("small", "full")


def _summary(name: str, cases: int, failures: int, **extra) -> dict:
    return {"check": name, "cases": cases, "failures": failures, "holds": failures == 0, **extra}


def rational_pairs(k: int = 5) -> list[tuple[Fraction, Fraction]]:
    """``k*k`` pairs ``(alpha, beta)`` from a fixed grid of small rationals."""
    alphas = [Fraction(1, 3), Fraction(1), Fraction(7, 5), Fraction(22, 7), Fraction(101, 16)][:k]
    betas = [Fraction(0), Fraction(1, 2), Fraction(3, 7), Fraction(5, 2), Fraction(17, 3)][:k]
    return [(a, b) for a in alphas for b in betas]


def check_fractional_part_facts(budget: str = "small") -> dict:
    q = 12 if budget == "small" else 30
    grid = [Fraction(p, q) for p in range(-2 * q, 2 * q + 1)]
    eps_grid = [Fraction(1, 5), Fraction(1, 10), Fraction(1, 40)]
    cases = fails = 0
    for a in grid:
        for b in grid[:: 3]:
            for eps in eps_grid:
                for n in (1, 2, 3, 7):
                    res = beatty.fractional_part_facts(a, b, n, eps)
                    for v in res.values():
                        if v is not None:
                            cases += 1
                            fails += not v
    return _summary("fractional_part_facts", cases, fails)


def check_vdc(budget: str = "small", seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    count = 100 if budget == "small" else 500
    fails = nonneg_fails = 0
    for _ in range(count):
        N = int(rng.integers(1, 129))
        seq = rng.normal(size=N) + 1j * rng.normal(size=N)
        rep = sumlab.vdc_verify(seq, int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        fails += not rep.holds
        nonneg_fails += not rep.rhs_nonneg
    return _summary("vdc", count, fails + nonneg_fails, rhs_nonneg_failures=nonneg_fails)


def check_carry(budget: str = "small") -> dict:
    N_max = 128 if budget == "small" else 512
    lams = range(0, 11, 2) if budget == "small" else range(0, 11)
    cases = fails = 0
    for alpha, beta in rational_pairs():
        bp = BeattyParams(alpha, beta)
        for lam in lams:
            for total in range(0, 9):
                for L in range(0, total + 1):
                    r = total - L
                    pref = sumlab.carry_exceptions_prefix(r, L, N_max, lam, bp)
                    N = np.arange(N_max + 1)
                    bound = (r + L) * (N * float(alpha) / 2**lam + 2)
                    cases += N_max + 1
                    fails += int(np.count_nonzero(pref > bound))
    return _summary("carry", cases, fails)


def check_correlation(budget: str = "small", seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    count = 50 if budget == "small" else 200
    worst = 0.0
    for _ in range(count):
        M = int(rng.integers(1, 257))
        f = rng.normal(size=M) + 1j * rng.normal(size=M)
        worst = max(worst, sumlab.correlation_residual(M, f, int(rng.integers(-3 * M, 3 * M + 1))))
    return _summary("correlation_fourier", count, int(worst >= 1e-10), max_residual=worst)


def check_farey(budget: str = "small", seed: int = 0) -> dict:
    n_max = 32 if budget == "small" else 64
    cases = fails = 0
    for n in range(1, n_max + 1):
        for (a, b), (c, d) in beatty.farey_neighbors(n):
            cases += 1
            fails += not (b * c - a * d == 1 and b + d > n)
    rng = random.Random(seed)
    count = 1000 if budget == "small" else 10_000
    for _ in range(count):
        alpha = Fraction(rng.randrange(0, 10**9), rng.randrange(1, 10**6))
        mu, sigma = rng.randint(0, 8), rng.randint(1, 8)
        fa = beatty.farey_approx_scaled(alpha, mu, sigma)
        cases += 1
        fails += not (1 <= fa.q <= 1 << (mu + sigma) and math.gcd(fa.p, fa.q) == 1
                      and fa.error(alpha) < Fraction(1, 1 << sigma))
    return _summary("farey", cases, fails)


def check_interval_classes(budget: str = "small", seed: int = 0) -> dict:
    rng = random.Random(seed)
    count = 30 if budget == "small" else 200
    fails = 0
    worst = 0.0
    for _ in range(count):
        alpha = Fraction(rng.randrange(1, 4000), rng.randrange(1, 300))
        beta = Fraction(rng.randrange(0, 1000), rng.randrange(1, 50))
        T, K = rng.randint(1, 5), rng.randint(1, 5)
        t, k = rng.randrange(T), rng.randrange(K)
        start = rng.randrange(0, 100)
        N = rng.randint(1, 300)
        bp = BeattyParams(alpha, beta)
        cnt = beatty.interval_class_count((start, start + N), bp, t, T, k, K)
        bound = N * float(beatty.discrepancy(alpha / K, N))
        dev = abs(cnt - N / (K * T))
        worst = max(worst, dev / bound if bound else 0.0)
        fails += dev > bound + 1e-9
    return _summary("f_discrepancy", count, fails, worst_ratio=worst)


def check_mean_discrepancy(budget: str = "small") -> dict:
    grid = [(4, 64), (6, 64), (8, 256)] if budget == "small" else [(4, 64), (6, 64), (8, 256), (10, 1024), (6, 4096)]
    rows = []
    for mu, N in grid:
        rep = beatty.mean_discrepancy_profile(mu, N, m=3)
        rows.append({"mu": mu, "N": N, "normalized": rep.normalized,
                     "geometric_ratio": rep.geometric_sum / rep.geometric_shape})
    return _summary("mean_discrepancy", len(rows), 0, profile=rows,
                    max_normalized=max(r["normalized"] for r in rows))


def check_linearization(budget: str = "small", seed: int = 0) -> dict:
    c = powerfloor.ExponentSpec.rational(7, 5)
    segs = [(100, 10), (1000, 20), (10**5, 100)] if budget == "small" else [(100, 10), (1000, 20), (10**4, 50), (10**5, 100), (10**6, 100)]
    rng = random.Random(seed)
    cases = fails = 0
    for a, K in segs:
        seg = powerfloor.linearize_segment(a, K, c)
        cnt = powerfloor.linearization_mismatch_count(seg, c)
        cases += 1
        fails += cnt > powerfloor.mismatch_bound(seg)
        BK2 = Fraction(seg.B) * K * K
        for _ in range(50 if budget == "small" else 1000):
            x = Fraction(rng.randrange(0, 10**6), 10**6) * K + a
            lin = x * seg.alpha + seg.beta
            fx = Fraction(float(x) ** 1.4)
            cases += 1
            # float x**c is accurate to ~1e-16 relative; allow that slack on top of B K^2
            fails += abs(lin - fx) > BK2 + Fraction(abs(float(fx)) * 1e-14)
    return _summary("approx_lemma", cases, fails)


def check_fourier_identities(budget: str = "small", seed: int = 0) -> dict:
    rng = random.Random(seed)
    count = 20 if budget == "small" else 100
    cases = fails = 0
    for _ in range(count):
        L = rng.randint(1, 3)
        r = rng.randint(L, 40)
        lam = rng.randint(1, 8)
        i = fourier.ShiftProfile.random(L, r, rng)
        b = fourier.CoeffBlock((1,) + tuple(rng.randint(0, 1) for _ in range(L - 1)), r)
        d = rng.randrange(1 << lam)
        direct = fourier.fourier_direct(lam, i, b, d)
        rec = fourier.fourier_recursive(lam, i, b, d)
        m = rng.randint(0, lam)
        phi = fourier.phi_iterated(lam, i, i, b, d, m)
        excess, _ = fourier.trivial_estimate_check(lam, i, b, d, rng.randint(0, lam))
        cases += 4
        fails += float(np.max(np.abs(direct.entries - rec.entries))) > 1e-9
        fails += abs(direct.parseval() - 1) > 1e-9
        fails += float(np.max(np.abs(phi - np.abs(direct.entries) ** 2))) > 1e-9
        fails += excess > 1e-9
        for mm in range(0, 4):
            for dd in range(1 << mm):
                base = fourier.transform_profile(i, mm, dd, 0).values()
                for e in range(1 << mm):
                    v = fourier.transform_profile(i, mm, dd, e).values()
                    cases += 1
                    fails += not all(x <= y <= x + 1 for x, y in zip(base, v))
    return _summary("fourier_identities", cases, fails)


def check_good_positions(budget: str = "small", seed: int = 0) -> dict:
    rng = random.Random(seed)
    cases = fails = 0
    # census at (lam, x, m) = (20, 10, 5) for a zero and a random profile
    for i in (fourier.ShiftProfile.zero(1, 1024), fourier.ShiftProfile.random(1, 3 * 1024, rng)):
        dist = fourier.good_set_distribution(20, i.r, 5, i)
        for M, n in dist.items():
            cases += 1
            fails += n != fourier.census_formula(20, 10, 5, len(M))
        cases += 1
        fails += sum(dist.values()) != 1 << 20
    for y in range(0, 3 if budget == "small" else 5):
        cases += 1
        fails += not fourier.prepare_check(10, y, 5, fourier.ShiftProfile.random(1, 1024, rng))
    zs = (0, 3) if budget == "small" else (0, 3, 5)
    for z in zs:
        for _ in range(5 if budget == "small" else 20):
            i = fourier.random_prepared_profile(1, 1024, 5, rng)
            b = fourier.CoeffBlock((1,), 1024)
            for d in range(1 << z):
                lhs, rhs = fourier.saving_gap_table(z, 5, i, b, d)
                cases += len(lhs)
                fails += int(np.count_nonzero(lhs > (1 - 2 / 4**5) * rhs + 1e-9))
    for lam, r, m in [(20, 1024, 5), (40, 1024, 5), (48, 2048, 5)]:
        rep = fourier.decay_budget(lam, r, m)
        cases += 1
        fails += not (rep.binomial_identity and rep.lower_bound_holds)
    return _summary("good_positions", cases, fails)


SUITE = {
    "fractional_part_facts": check_fractional_part_facts,
    "vdc": check_vdc,
    "carry": check_carry,
    "correlation_fourier": check_correlation,
    "farey": check_farey,
    "f_discrepancy": check_interval_classes,
    "mean_discrepancy": check_mean_discrepancy,
    "approx_lemma": check_linearization,
    "fourier_identities": check_fourier_identities,
    "good_positions": check_good_positions,
}


def run_suite(names: list[str] | None = None, budget: str = "small") -> list[dict]:
    if budget not in BUDGETS:
        raise ValueError(f"budget must be one of {BUDGETS}")
    names = list(SUITE) if not names or names == ["all"] else names
    unknown = [n for n in names if n not in SUITE]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    return [SUITE[n](budget) for n in names]
