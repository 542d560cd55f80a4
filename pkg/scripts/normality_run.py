"""Block-frequency deviations of t(floor(n**c)) at growing N, with a log-log slope."""
import argparse

from psthue.census import normality_report
from psthue.cli import parse_exponent, parse_int_list


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=parse_exponent, default=parse_exponent("7/5"))
    ap.add_argument("--L", type=int, default=3)
    ap.add_argument("--checkpoints", type=parse_int_list, default=[10**4, 10**5, 10**6, 10**7])
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    rep = normality_report(args.c, args.L, args.checkpoints, args.threads)
    print(f"c = {rep.c}, L = {rep.L}")
    print(f"{'N':>12}  {'max_dev':>12}  {'sqrt(N)*max_dev':>16}")
    for N, dev in rep.rows:
        print(f"{N:>12}  {dev:>12.3e}  {dev * N**0.5:>16.3f}")
    if rep.slope is not None:
        print(f"log-log slope {rep.slope:.3f}")


if __name__ == "__main__":
    main()
