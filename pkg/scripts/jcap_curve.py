"""Stabilisation of the sampled maximum over shifts j in the first exponential sum.

For each cap the full range j < cap is scanned; the value is a lower bound
that becomes exact once cap reaches the carry-free range reported last.
"""
import argparse

from psthue.cli import parse_int_list
from psthue.sumlab import SumParams, s1_direct


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=parse_int_list, default=[16, 32])
    ap.add_argument("--rho", type=float, default=1.0, help="D = N**rho")
    ap.add_argument("--a", default="1")
    args = ap.parse_args()
    a = tuple(int(ch) for ch in args.a)

    for N in args.N:
        D = round(N**args.rho)
        exact = s1_direct(SumParams(N=N, D=D, a=a, exact=True))
        print(f"N = {N}, D = {D}: exact value {exact.value:.1f} (j < {exact.j_cap})")
        cap = 1
        while cap < exact.j_cap:
            rep = s1_direct(SumParams(N=N, D=D, a=a, j_cap=cap))
            print(f"  j < {cap:>8}: {rep.value:10.1f}  ratio {rep.value / exact.value:.4f}")
            cap *= 4


if __name__ == "__main__":
    main()
