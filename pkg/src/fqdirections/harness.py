"""Scan campaigns over subsets A of F_q and point sets U in F_q^2.

Every campaign is a pure function of its :class:`ScanConfig`.  Candidates are
numbered; sampled candidates are drawn from a Philox generator keyed by
``(seed, index)``, so a record never depends on which worker produced it and
the ordered merge gives identical output for any ``jobs``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache, partial
from itertools import combinations, islice
from math import comb, isqrt
from typing import Any, Callable, Iterable, Iterator

import numpy as np

from . import additive, redei
from .field import FieldCtx, field_new
from .geometry import (
    affine_canonical_form,
    format_point,
    grid,
    is_affine_prime_coset,
    pointset_directions,
    product_directions,
    product_directions_naive,
)
from .verdict import Status, Verdict, frac

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
BATCH = 512


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScanConfig:
    p: int
    k: int = 2
    size_min: int = 2
    size_max: int = 3
    mode: str = "exhaustive"
    sample_count: int = 1000
    seed: int = 0
    k_constant: float = 1.0
    jobs: int = 1
    cap: int = 10**7
    oracle_rate: float = 0.01

    def __post_init__(self):
        if self.size_min < 2 or self.size_max < self.size_min:
            raise ConfigError(f"invalid size range {self.size_min}..{self.size_max}")
        if self.mode not in ("exhaustive", "sample"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "sample" and self.sample_count < 1:
            raise ConfigError("sample mode needs sample_count >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not 0 <= self.oracle_rate <= 1:
            raise ConfigError("oracle_rate must lie in [0, 1]")
        if self.k_constant <= 0:
            raise ConfigError("k_constant must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")

    @property
    def ctx(self) -> FieldCtx:
        return _ctx(self.p, self.k)


@lru_cache(maxsize=None)
def _ctx(p: int, k: int) -> FieldCtx:
    return field_new(p, k)


def keyed_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for candidate ``index``; streams never overlap."""
    return np.random.Generator(np.random.Philox(key=seed | (index << 64), counter=[0, 0, 0, stream]))


def colex_subsets(n: int, size: int) -> Iterator[tuple[int, ...]]:
    """All ``size``-subsets of range(n) in colexicographic order."""
    if size == 0:
        yield ()
        return
    for top in range(size - 1, n):
        for rest in colex_subsets(top, size - 1):
            yield rest + (top,)


def _universe(cfg: ScanConfig, points: bool) -> int:
    q = cfg.ctx.q
    return q * q if points else q


def _candidates(cfg: ScanConfig, points: bool) -> Iterator[tuple[int, ...]]:
    n = _universe(cfg, points)
    if cfg.mode == "exhaustive":
        total = sum(comb(n, s) for s in range(cfg.size_min, cfg.size_max + 1))
        if total > cfg.cap:
            raise ConfigError(f"{total} candidates exceed the cap of {cfg.cap}")
        for s in range(cfg.size_min, cfg.size_max + 1):
            yield from colex_subsets(n, s)
        return
    if cfg.size_max > n:
        raise ConfigError(f"size_max {cfg.size_max} exceeds universe size {n}")
    for i in range(cfg.sample_count):
        rng = keyed_rng(cfg.seed, i)
        size = int(rng.integers(cfg.size_min, cfg.size_max + 1))
        yield tuple(sorted(int(x) for x in rng.choice(n, size, replace=False)))


def ordered_map(fn: Callable, items: Iterable, jobs: int = 1) -> Iterator:
    """``map(fn, items)`` with results in input order, on ``jobs`` processes."""
    if jobs <= 1:
        yield from map(fn, items)
        return
    it = iter(items)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        pending: deque = deque()
        while True:
            while len(pending) < 2 * jobs:
                batch = list(islice(it, BATCH))
                if not batch:
                    break
                pending.append(pool.submit(_run_batch, fn, batch))
            if not pending:
                return
            yield from pending.popleft().result()


def _run_batch(fn: Callable, batch: list) -> list:
    return [fn(x) for x in batch]


def _in_window(cfg: ScanConfig, size: int) -> bool:
    # k * p^(2/3) < |A| < p, compared exactly as |A|^3 > k^3 p^2
    kc = Fraction(str(cfg.k_constant))
    return size < cfg.p and Fraction(size) ** 3 > kc**3 * cfg.p**2


def _oracle_pick(cfg: ScanConfig, index: int) -> bool:
    if cfg.oracle_rate <= 0:
        return False
    return keyed_rng(cfg.seed, index, stream=1).random() < cfg.oracle_rate


def _support_verdict(summary: redei.StSummary) -> Verdict:
    if summary.violations:
        return Verdict(Status.FAIL, {"violations": summary.violations})
    return Verdict(Status.PASS, {"profiles": summary.num_directions})


def evaluate_product(cfg: ScanConfig, item: tuple[int, tuple[int, ...]]) -> dict[str, Any]:
    index, A = item
    ctx = cfg.ctx
    size = len(A)
    D = product_directions(ctx, A)
    coset, witness = is_affine_prime_coset(ctx, A)
    bound = Fraction(size * size + 1, 2)
    dilates = {y: redei.dilate_size(ctx, A, y) for y in sorted(D)}
    verdicts: dict[str, Verdict] = {}
    rec: dict[str, Any] = {
        "v": SCHEMA_VERSION,
        "index": index,
        "A": [ctx.format(a) for a in A],
        "size": size,
        "coset": coset,
        "coset_witness": [ctx.format(x) for x in witness] if witness else None,
        "num_directions": len(D),
        "bound": frac(bound),
        "bound_met": len(D) >= bound,
        "in_window": _in_window(cfg, size),
        "max_dilate": max(dilates.values()),
        "s": None,
        "t": None,
        "oracle": None,
    }
    if _oracle_pick(cfg, index):
        match = product_directions_naive(ctx, A) == D
        rec["oracle"] = "match" if match else "mismatch"
        verdicts["oracle"] = Verdict(Status.PASS if match else Status.FAIL, {} if match else {"A": rec["A"]})
    verdicts = {name: v.to_json() for name, v in verdicts.items()}
    if size * size <= ctx.q:
        facts = _redei_facts(cfg.p, cfg.k, affine_canonical_form(ctx, A))
        rec["s"], rec["t"] = facts["s"], facts["t"]
        verdicts.update(facts["verdicts"])
    rec["verdicts"] = dict(sorted(verdicts.items()))
    return rec


@lru_cache(maxsize=1 << 16)
def _redei_facts(p: int, k: int, A: tuple[int, ...]) -> dict[str, Any]:
    """Redei-side fields of a product-set record.

    Keyed by the affine canonical form: s, t, D(A), |yA - A| and hence every
    verdict below are unchanged by A -> uA + v, so each orbit is profiled once.
    """
    ctx = _ctx(p, k)
    U = list(grid(A))
    D = product_directions(ctx, A)
    summary = redei.profile(ctx, U)
    verdicts = {
        "fst": redei.check_fst_bounds(ctx, U, summary),
        "support": _support_verdict(summary),
    }
    if len(A) < ctx.p:
        dilates = {y: redei.dilate_size(ctx, A, y) for y in D}
        verdicts["claim31"] = _claim31_from_profiles(ctx, A, D, dilates, summary)
    return {
        "s": summary.s,
        "t": redei.t_json(summary.t),
        "verdicts": {name: v.to_json() for name, v in verdicts.items()},
    }


def _claim31_from_profiles(ctx, A, D, dilates, summary: redei.StSummary) -> Verdict:
    triggered, failures = 0, []
    for prof in summary.per_direction:
        if dilates[prof.y] <= ctx.p:
            continue
        v = redei.check_claim31(ctx, A, prof.y, D, prof=prof)
        triggered += 1
        if v.status is Status.FAIL:
            failures.append(v.to_json())
    if failures:
        return Verdict(Status.FAIL, {"triggered": triggered, "failures": failures})
    if not triggered:
        return Verdict(Status.NOT_TRIGGERED, {"triggered": 0})
    return Verdict(Status.PASS, {"triggered": triggered})


def evaluate_pointset(cfg: ScanConfig, item: tuple[int, tuple[int, ...]]) -> dict[str, Any]:
    index, cells = item
    ctx = cfg.ctx
    q = ctx.q
    U = [divmod(c, q) for c in cells]
    dirs = pointset_directions(ctx, U)
    verdicts: dict[str, Any] = {}
    rec: dict[str, Any] = {
        "v": SCHEMA_VERSION,
        "index": index,
        "U": [format_point(ctx, pt) for pt in U],
        "size": len(U),
        "num_directions": len(dirs),
        "affine_directions": sum(1 for d in dirs if not d.vertical),
        "vertical": any(d.vertical for d in dirs),
        "s": None,
        "t": None,
    }
    if len(U) == q + 1:
        full = len(dirs) == q + 1
        verdicts["pigeonhole"] = Verdict(
            Status.PASS if full else Status.FAIL, {"directions": len(dirs)} if full else {"directions": len(dirs), "U": rec["U"]}
        )
    if len(U) <= q:
        summary = redei.profile(ctx, U)
        rec["s"], rec["t"] = summary.s, redei.t_json(summary.t)
        verdicts["fst"] = redei.check_fst_bounds(ctx, U, summary)
        verdicts["support"] = _support_verdict(summary)
    rec["verdicts"] = {name: v.to_json() for name, v in verdicts.items()}
    return rec


def scan_products(cfg: ScanConfig) -> Iterator[dict[str, Any]]:
    items = enumerate(_candidates(cfg, points=False))
    return ordered_map(partial(evaluate_product, cfg), items, cfg.jobs)


def scan_pointsets(cfg: ScanConfig) -> Iterator[dict[str, Any]]:
    if cfg.size_max > cfg.ctx.q + 1:
        raise ConfigError("point sets larger than q + 1 are not scanned")
    items = enumerate(_candidates(cfg, points=True))
    return ordered_map(partial(evaluate_pointset, cfg), items, cfg.jobs)


# reports


def dumps(rec: dict[str, Any]) -> str:
    return json.dumps(rec, separators=(",", ":"))


def write_jsonl(records: Iterable[dict], fh) -> None:
    for rec in records:
        fh.write(dumps(rec) + "\n")


CSV_FIELDS = [
    "index", "set", "size", "coset", "num_directions", "bound", "bound_met", "in_window",
    "max_dilate", "s", "t", "oracle",
]
CHECKERS = ["fst", "support", "claim31", "oracle", "pigeonhole"]


def flatten(rec: dict[str, Any]) -> dict[str, Any]:
    row = {f: rec.get(f) for f in CSV_FIELDS}
    row["set"] = " ".join(rec.get("A") or rec.get("U") or [])
    for name in CHECKERS:
        v = rec.get("verdicts", {}).get(name)
        row[f"{name}_status"] = v["status"] if v else ""
    return row


def write_csv(records: Iterable[dict], fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS + [f"{c}_status" for c in CHECKERS], lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(flatten(rec))


@dataclass
class Summary:
    records: int = 0
    statuses: dict[str, Counter] = field(default_factory=dict)
    first_failure: dict | None = None
    non_coset: int = 0
    non_coset_bound_met: int = 0
    coset: int = 0
    oracle_checked: int = 0

    def add(self, rec: dict[str, Any]) -> None:
        self.records += 1
        for name, v in rec.get("verdicts", {}).items():
            self.statuses.setdefault(name, Counter())[v["status"]] += 1
            if v["status"] == Status.FAIL.value and self.first_failure is None:
                self.first_failure = {"checker": name, "record": rec}
        if "coset" in rec:
            if rec["coset"]:
                self.coset += 1
            else:
                self.non_coset += 1
                self.non_coset_bound_met += bool(rec["bound_met"])
        if rec.get("oracle"):
            self.oracle_checked += 1

    @property
    def failed(self) -> bool:
        return self.first_failure is not None

    def to_json(self) -> dict[str, Any]:
        out = {
            "records": self.records,
            "statuses": {k: dict(sorted(c.items())) for k, c in sorted(self.statuses.items())},
            "failed": self.failed,
            "oracle_checked": self.oracle_checked,
        }
        if self.coset or self.non_coset:
            out.update(coset=self.coset, non_coset=self.non_coset, non_coset_bound_met=self.non_coset_bound_met)
        if self.first_failure:
            out["first_failure"] = self.first_failure
        return out


def summarize(records: Iterable[dict], sink: Callable[[dict], None] | None = None) -> Summary:
    s = Summary()
    for rec in records:
        s.add(rec)
        if sink:
            sink(rec)
    return s


# exploration


def find_min_directions(p: int, k: int, n: int, cap: int = 10**7, keep: int = 50) -> dict[str, Any]:
    """Exact min |D(A)| over all |A| = n, split by whether A is a prime-field coset."""
    ctx = _ctx(p, k)
    if n < 2 or n > ctx.q:
        raise ConfigError(f"size {n} out of range")
    if comb(ctx.q, n) > cap:
        raise ConfigError(f"{comb(ctx.q, n)} sets exceed the cap of {cap}")
    best: dict[str, dict[str, Any]] = {
        "coset": {"min": None, "count": 0, "argmin": []},
        "non_coset": {"min": None, "count": 0, "argmin": []},
    }
    for A in colex_subsets(ctx.q, n):
        stratum = best["coset" if is_affine_prime_coset(ctx, A)[0] else "non_coset"]
        m = len(product_directions(ctx, A))
        if stratum["min"] is None or m < stratum["min"]:
            stratum.update(min=m, count=0, argmin=[])
        if m == stratum["min"]:
            stratum["count"] += 1
            if len(stratum["argmin"]) < keep:
                stratum["argmin"].append([ctx.format(a) for a in A])
    return {"p": p, "k": k, "n": n, **best}


# lemma batch driver


@dataclass(frozen=True)
class LemmaBudget:
    max_size: int = 4
    samples: int = 1000
    exhaustive_cap: int = 20000
    dilate_cap: int = 1000
    dilate_sets: int = 200
    fst_max_size: int = 3
    plunnecke_k: int = 3

    def __post_init__(self):
        if self.samples < 1 or self.max_size < 2:
            raise ConfigError("lemma budget is empty")


def _sets_for(ctx: FieldCtx, sizes: range, cap: int, samples: int, seed: int, stream: int):
    total = sum(comb(ctx.q, s) for s in sizes)
    if total <= cap:
        for s in sizes:
            yield from colex_subsets(ctx.q, s)
        return
    for i in range(samples):
        rng = keyed_rng(seed, i, stream)
        s = int(rng.integers(sizes.start, sizes.stop))
        yield tuple(sorted(int(x) for x in rng.choice(ctx.q, s, replace=False)))


@dataclass
class Tally:
    checked: int = 0
    hypothesis: int = 0
    statuses: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)

    def add(self, v: Verdict) -> None:
        self.checked += 1
        self.statuses[v.status.value] += 1
        if v.status is Status.PASS:
            self.hypothesis += 1
        if v.status is Status.FAIL and len(self.failures) < 10:
            self.failures.append(v.to_json())

    def to_json(self) -> dict[str, Any]:
        return {
            "status": "fail" if self.failures else "pass",
            "checked": self.checked,
            "hypothesis_count": self.hypothesis,
            "statuses": dict(sorted(self.statuses.items())),
            "failures": self.failures,
        }


def _dilate_task(p: int, k: int, seed: int, item) -> list[Verdict]:
    index, X, sampled = item
    ctx = _ctx(p, k)
    D = product_directions(ctx, X)
    rs = [r for r in range(1, ctx.q) if r not in D]
    if sampled and rs:
        rs = [rs[int(keyed_rng(seed, index, 3).integers(len(rs)))]]
    return [additive.check_dilate_cardinality(ctx, X, r, seed=seed) for r in rs]


def _claim31_task(p: int, k: int, A) -> list[Verdict]:
    ctx = _ctx(p, k)
    D = product_directions(ctx, A)
    return [redei.check_claim31(ctx, A, y, D) for y in sorted(D)]


def _fst_task(p: int, k: int, A) -> list[Verdict]:
    ctx = _ctx(p, k)
    U = list(grid(A))
    summary = redei.profile(ctx, U)
    return [redei.check_fst_bounds(ctx, U, summary), _support_verdict(summary)]


def claim31_sweep(p: int, k: int, sizes: range, jobs: int = 1, cap: int = 10**7, samples: int = 1000, seed: int = 0) -> Tally:
    ctx = _ctx(p, k)
    sizes = range(sizes.start, min(sizes.stop, ctx.p))
    tally = Tally()
    sets = _sets_for(ctx, sizes, cap, samples, seed, 4)
    for vs in ordered_map(partial(_claim31_task, p, k), sets, jobs):
        for v in vs:
            if v.status is not Status.NOT_TRIGGERED:
                tally.add(v)
    return tally


def verify_lemmas(p: int, k: int = 2, seed: int = 0, budget: LemmaBudget | None = None, jobs: int = 1) -> dict[str, Any]:
    """Batch run of the dilate, Plunnecke, subfield, claim and bound checkers."""
    budget = budget or LemmaBudget()
    ctx = _ctx(p, k)
    sizes = range(2, budget.max_size + 1)
    report: dict[str, Any] = {"p": p, "k": k, "q": ctx.q, "seed": seed}

    total = sum(comb(ctx.q, s) for s in sizes)
    sampled = total > budget.dilate_cap
    dil = Tally()
    items = ((i, X, sampled) for i, X in enumerate(_sets_for(ctx, sizes, budget.dilate_cap, budget.dilate_sets, seed, 2)))
    for vs in ordered_map(partial(_dilate_task, p, k, seed), items, jobs):
        for v in vs:
            dil.add(v)
    report["dilate_cardinality"] = {**dil.to_json(), "mode": "sampled" if sampled else "exhaustive"}

    plu = Tally()
    for i in range(budget.samples):
        rng = keyed_rng(seed, i, 5)
        kk = int(rng.integers(1, budget.plunnecke_k + 1))
        sets = []
        for _ in range(kk + 1):
            s = int(rng.integers(1, min(ctx.q, 8) + 1))
            sets.append([int(x) for x in rng.choice(ctx.q, s, replace=False)])
        plu.add(additive.check_plunnecke(ctx, sets[0], sets[1:]))
    report["plunnecke"] = plu.to_json()

    sub = Tally()
    for A in _sets_for(ctx, sizes, budget.exhaustive_cap, budget.samples, seed, 6):
        sub.add(additive.check_subfield_criterion(ctx, A))
    report["subfield_criterion"] = sub.to_json()

    c31 = claim31_sweep(p, k, sizes, jobs, budget.exhaustive_cap, budget.samples, seed)
    report["claim31"] = c31.to_json()

    fst = Tally()
    fst_sizes = range(2, min(budget.fst_max_size, isqrt(ctx.q)) + 1)
    fst_sets = _sets_for(ctx, fst_sizes, budget.exhaustive_cap, budget.samples, seed, 7)
    for vs in ordered_map(partial(_fst_task, p, k), fst_sets, jobs):
        for v in vs:
            fst.add(v)
    report["fst_bounds"] = fst.to_json()

    report["failed"] = any(v.get("status") == "fail" for v in report.values() if isinstance(v, dict))
    return report
