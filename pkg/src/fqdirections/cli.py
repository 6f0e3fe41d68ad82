"""Command-line front end.

Exit codes: 0 when every asserted verdict passes, 1 when a checker reports a
failure (the witness is printed), 2 on usage or configuration errors.
Records go to ``--out`` or stdout; summaries always go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import harness, redei
from .field import FieldError, field_new
from .geometry import GeometryError, grid, is_affine_prime_coset, product_directions
from .harness import ConfigError, LemmaBudget, ScanConfig
from .poly import PolyError
from .verdict import Status

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
USAGE_ERRORS = (FieldError, ConfigError, GeometryError, redei.RedeiError, PolyError, ValueError)


class UsageError(Exception):
    pass


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("FQDIR_JOBS", "1")))
    except ValueError:
        return 1


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, required=True, help="odd prime characteristic")
    sp.add_argument("--ext", type=int, default=2, choices=(1, 2), help="extension degree k, field order p^k (default 2)")
    sp.add_argument("--seed", type=int, default=0, help="64-bit seed for sampled modes (default 0)")
    sp.add_argument("--format", choices=("json", "csv"), default="json", help="json = JSON Lines (default) or csv")
    sp.add_argument("--jobs", type=int, default=_default_jobs(), help="worker processes (default $FQDIR_JOBS or 1)")
    sp.add_argument("--out", type=Path, help="write records here instead of stdout")


def _set_arg(sp: argparse.ArgumentParser, required: bool = True) -> None:
    sp.add_argument(
        "--set",
        dest="elems",
        required=required,
        help='comma-separated elements "c0" or "c0+c1w", e.g. "0,1,1+1w"; "@path" reads them from a file',
    )


def _scan_args(sp: argparse.ArgumentParser, size_max: int) -> None:
    sp.add_argument("--size-min", type=int, default=2)
    sp.add_argument("--size-max", type=int, default=size_max)
    sp.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    sp.add_argument("--samples", type=int, default=1000, help="candidates drawn in sample mode")
    sp.add_argument("--k-constant", type=float, default=1.0, help="stand-in for the constant in k*p^(2/3) < |A| < p")
    sp.add_argument("--cap", type=int, default=10**7, help="refuse exhaustive runs with more candidates")
    sp.add_argument("--oracle-rate", type=float, default=0.01, help="fraction of records re-checked by the four-loop D(A)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fqdir", description="Direction sets of point sets over F_p and F_{p^2}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("directions", help="D(A) for one set A")
    _common(sp)
    _set_arg(sp)

    sp = sub.add_parser("redei", help="Redei profile of A x A")
    _common(sp)
    _set_arg(sp)
    sp.add_argument("--slope", help="only this direction (element text form); default all of D(A)")

    sp = sub.add_parser("scan-products", help="scan subsets A, U = A x A")
    _common(sp)
    _scan_args(sp, 3)

    sp = sub.add_parser("scan-pointsets", help="scan point sets U in F_q^2")
    _common(sp)
    _scan_args(sp, 9)

    sp = sub.add_parser("verify-lemmas", help="batch-check the additive lemmas, the claim and the bounds")
    _common(sp)
    sp.add_argument("--max-size", type=int, default=4)
    sp.add_argument("--samples", type=int, default=1000)

    sp = sub.add_parser("min-directions", help="exact min |D(A)| over |A| = n, split by coset flag")
    _common(sp)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--cap", type=int, default=10**7)
    return parser


def parse_set(ctx, text: str) -> list[int]:
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    tokens = [t for t in text.replace("\n", ",").replace(" ", ",").split(",") if t.strip()]
    if not tokens:
        raise UsageError("empty --set")
    return sorted({ctx.parse(t) for t in tokens})


@contextmanager
def _output(path: Path | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(rows: list[dict], args) -> None:
    with _output(args.out) as fh:
        if args.format == "json":
            for row in rows:
                fh.write(json.dumps(row, separators=(",", ":")) + "\n")
            return
        keys = list(dict.fromkeys(k for row in rows for k in row))
        writer = csv.DictWriter(fh, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: " ".join(map(str, v)) if isinstance(v, list) else v for k, v in row.items()})


def _stderr_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False), file=sys.stderr)


def cmd_directions(args, ctx) -> int:
    A = parse_set(ctx, args.elems)
    D = sorted(product_directions(ctx, A))
    coset, _ = is_affine_prime_coset(ctx, A)
    _emit([{
        "A": [ctx.format(a) for a in A],
        "directions": [ctx.format(y) for y in D],
        "num_directions": len(D),
        "coset": coset,
    }], args)
    print(f"|D(A)| = {len(D)}", file=sys.stderr)
    return EXIT_OK


def cmd_redei(args, ctx) -> int:
    A = parse_set(ctx, args.elems)
    U = list(grid(A))
    summary = redei.profile(ctx, U)
    profs = summary.per_direction
    if args.slope is not None:
        y = ctx.parse(args.slope)
        profs = [pr for pr in profs if pr.y == y]
        if not profs:
            raise UsageError(f"slope {args.slope} is not a direction of A x A")
    rows = []
    for pr in profs:
        row = pr.to_json()
        row.update(R_pretty=str(pr.R), H_pretty=str(pr.H), deg_Q=pr.Q.degree)
        rows.append(row)
    _emit(rows, args)
    fst = redei.check_fst_bounds(ctx, U, summary)
    _stderr_json({
        "s": summary.s,
        "t": redei.t_json(summary.t),
        "num_directions": summary.num_directions,
        "fst": fst.to_json(),
        "violations": summary.violations,
    })
    return EXIT_FAIL if summary.violations or fst.status is Status.FAIL else EXIT_OK


def _scan_config(args) -> ScanConfig:
    return ScanConfig(
        p=args.p,
        k=args.ext,
        size_min=args.size_min,
        size_max=args.size_max,
        mode=args.mode,
        sample_count=args.samples,
        seed=args.seed,
        k_constant=args.k_constant,
        jobs=args.jobs,
        cap=args.cap,
        oracle_rate=args.oracle_rate,
    )


def _run_scan(args, scan) -> int:
    records = scan(_scan_config(args))
    with _output(args.out) as fh:
        if args.format == "json":
            summary = harness.summarize(records, lambda r: fh.write(harness.dumps(r) + "\n"))
        else:
            writer = csv.DictWriter(
                fh,
                fieldnames=harness.CSV_FIELDS + [f"{c}_status" for c in harness.CHECKERS],
                lineterminator="\n",
            )
            writer.writeheader()
            summary = harness.summarize(records, lambda r: writer.writerow(harness.flatten(r)))
    _stderr_json(summary.to_json())
    return EXIT_FAIL if summary.failed else EXIT_OK


def cmd_scan_products(args, ctx) -> int:
    return _run_scan(args, harness.scan_products)


def cmd_scan_pointsets(args, ctx) -> int:
    return _run_scan(args, harness.scan_pointsets)


def cmd_verify_lemmas(args, ctx) -> int:
    budget = LemmaBudget(max_size=args.max_size, samples=args.samples)
    report = harness.verify_lemmas(args.p, args.ext, args.seed, budget, jobs=args.jobs)
    _emit([report], args)
    _stderr_json({k: v["status"] if isinstance(v, dict) else v for k, v in report.items()})
    return EXIT_FAIL if report["failed"] else EXIT_OK


def cmd_min_directions(args, ctx) -> int:
    _emit([harness.find_min_directions(args.p, args.ext, args.size, cap=args.cap)], args)
    return EXIT_OK


COMMANDS = {
    "directions": cmd_directions,
    "redei": cmd_redei,
    "scan-products": cmd_scan_products,
    "scan-pointsets": cmd_scan_pointsets,
    "verify-lemmas": cmd_verify_lemmas,
    "min-directions": cmd_min_directions,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = field_new(args.p, args.ext)
        return COMMANDS[args.command](args, ctx)
    except (UsageError, *USAGE_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
