"""Exhaustive check that |yA - A| > p forces t(y) = s(y) = 1, over |A| <= n in F_{p^2}."""

import argparse
import json
import time

from fqdirections import harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    tally = harness.claim31_sweep(args.p, 2, range(2, args.max_size + 1), jobs=args.jobs)
    print(json.dumps({**tally.to_json(), "seconds": round(time.perf_counter() - t0, 1)}, indent=2))
    raise SystemExit(1 if tally.failures else 0)


if __name__ == "__main__":
    main()
