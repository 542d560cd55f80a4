"""Average block deviation over moduli d in (D, 2D], D = x**delta, progressions and Beatty."""
import argparse

from psthue.census import SamplingPolicy, ap_average_deviation, beatty_average_deviation
from psthue.cli import parse_float_list, parse_int_list, parse_word


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", type=parse_int_list, default=[10**3, 10**4, 10**5])
    ap.add_argument("--delta", type=float, default=0.55)
    ap.add_argument("--omega", type=parse_word, default=parse_word("01"))
    ap.add_argument("--beatty-grid", type=int, default=0, help="also run the Beatty version with this many cells")
    ap.add_argument("--window-fracs", type=parse_float_list, default=[1.0],
                    help="window lengths z - y as fractions of x")
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    policy = SamplingPolicy(window_fracs=tuple(args.window_fracs))
    print(f"omega = {args.omega}, D = x^{args.delta}")
    for x in args.x:
        D = x**args.delta
        rep = ap_average_deviation(x, D, args.omega, policy, args.threads)
        line = f"x = {x:>8}  D = {D:>9.2f}  AP: {rep.normalized:.4f}"
        if args.beatty_grid:
            b = beatty_average_deviation(x, D, args.omega, args.beatty_grid, policy, args.threads)
            line += f"  Beatty: {b.normalized:.4f}"
        print(line)


if __name__ == "__main__":
    main()
