"""Exact min |D(A)| for every size n, split into prime-field cosets and the rest."""

import argparse

from fqdirections import harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--max-size", type=int, default=5)
    ap.add_argument("--cap", type=int, default=2 * 10**5)
    args = ap.parse_args()

    print(f"{'n':>3} {'coset min':>10} {'non-coset min':>14} {'(n^2+1)/2':>10}")
    for n in range(2, args.max_size + 1):
        res = harness.find_min_directions(args.p, 2, n, cap=args.cap)
        c, nc = res["coset"]["min"], res["non_coset"]["min"]
        print(f"{n:>3} {str(c):>10} {str(nc):>14} {(n * n + 1) / 2:>10}")


if __name__ == "__main__":
    main()
