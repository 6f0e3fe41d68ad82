"""Survey |D(A)| against (|A|^2+1)/2 over sampled A in F_{p^2}.

    python scripts/survey_products.py --p 7 --samples 100000 --out survey_p7.jsonl

Prints, per size, how many non-coset sets meet the bound and the smallest
|D(A)| seen in each stratum.
"""

import argparse
import json
from collections import defaultdict
from fractions import Fraction

from fqdirections import harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--size-max", type=int)
    ap.add_argument("--seed", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()

    cfg = harness.ScanConfig(
        p=args.p, k=2, size_min=2, size_max=args.size_max or args.p - 1,
        mode="sample", sample_count=args.samples, seed=args.seed, jobs=args.jobs,
    )
    table = defaultdict(lambda: {"coset": 0, "non_coset": 0, "met": 0, "min_coset": None, "min_non_coset": None})
    out = open(args.out, "w") if args.out else None
    for rec in harness.scan_products(cfg):
        if out:
            out.write(harness.dumps(rec) + "\n")
        row = table[rec["size"]]
        key = "coset" if rec["coset"] else "non_coset"
        row[key] += 1
        row["met"] += (not rec["coset"]) and rec["bound_met"]
        m = row[f"min_{key}"]
        row[f"min_{key}"] = rec["num_directions"] if m is None else min(m, rec["num_directions"])
    if out:
        out.close()
    for size in sorted(table):
        print(json.dumps({"size": size, "bound": str(Fraction(size * size + 1, 2)), **table[size]}))


if __name__ == "__main__":
    main()
