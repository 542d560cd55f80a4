"""Digit Fourier coefficients: recurrence vs FFT, good positions, saving and decay budget."""
import argparse
import random
import time

import numpy as np

from psthue import fourier
from psthue.fourier import CoeffBlock, ShiftProfile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--lam", type=int, default=15, help="level for the single-estimate sweep")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(args.count):
        L = rng.randint(1, 3)
        r = rng.randint(L, 64)
        lam = rng.randint(0, 10)
        i = ShiftProfile.random(L, r, rng)
        b = CoeffBlock((1,) + tuple(rng.randint(0, 1) for _ in range(L - 1)), r)
        d = rng.randrange(1 << lam)
        a = fourier.fourier_recursive(lam, i, b, d).entries
        worst = max(worst, float(np.max(np.abs(a - fourier.fourier_direct(lam, i, b, d).entries))))
    print(f"recurrence vs FFT: {args.count} instances, max diff {worst:.2e} ({time.perf_counter() - t0:.1f} s)")

    dist = fourier.good_set_distribution(20, 1024, 5, ShiftProfile.zero(1, 1024))
    for M, n in sorted(dist.items(), key=lambda kv: sorted(kv[0])):
        print(f"good set {sorted(M)}: {n} (formula {fourier.census_formula(20, 10, 5, len(M))})")

    i = fourier.random_prepared_profile(1, 1024, 5, rng)
    b = CoeffBlock((1,), 1024)
    ratios = []
    for d in range(1 << 3):
        lhs, rhs = fourier.saving_gap_table(3, 5, i, b, d)
        ratios.append(float(np.max(lhs / np.where(rhs > 0, rhs, 1))))
    print(f"saving: max |G|^2 / max_e |G'|^2 = {max(ratios):.6f} (limit {1 - 2 / 1024:.6f})")

    ks = {}
    for d in range(1 << args.lam):
        rep = fourier.single_estimate_check(args.lam, i, b, d)
        ks[rep.k] = ks.get(rep.k, 0) + 1
        assert rep.holds
    print(f"single estimate at lambda = {args.lam}: good-position counts {dict(sorted(ks.items()))}, all hold")

    for lam in (20, 40, 80):
        rep = fourier.decay_budget(lam, 1024, 5)
        print(f"decay budget lambda = {lam}: lambda0 = {rep.lambda0}, 2^-lambda * bound = {rep.bound / 2**lam:.8f}")


if __name__ == "__main__":
    main()
