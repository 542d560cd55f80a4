"""How the normality deviation at fixed N depends on the block length L and the exponent c."""
import argparse

from psthue.census import block_count_ps
from psthue.cli import parse_int
from psthue.powerfloor import ExponentSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=parse_int, default=10**6)
    ap.add_argument("--L-max", type=int, default=8)
    ap.add_argument("--c", nargs="+", default=["11/10", "6/5", "7/5", "3/2", "sqrt(2)"])
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    print(f"N = {args.N}; entries are max_dev * 2^L (relative deviation)")
    print(f"{'c':>10}" + "".join(f"{'L=' + str(L):>10}" for L in range(1, args.L_max + 1)))
    for text in args.c:
        c = ExponentSpec.parse(text)
        cells = []
        for L in range(1, args.L_max + 1):
            rep = block_count_ps(args.N, c, L, args.threads)
            cells.append(rep.max_dev * 2**L)
        print(f"{text:>10}" + "".join(f"{v:>10.4f}" for v in cells))


if __name__ == "__main__":
    main()
