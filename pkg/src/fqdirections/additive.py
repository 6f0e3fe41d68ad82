"""Sumsets, dilates and the additive-combinatorics checkers.

All sets live in the additive group of one field context.  Checkers return
:class:`Verdict` values; a failure always carries the offending sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .field import FieldCtx, Fq, generated_subfield
from .geometry import product_directions
from .verdict import Status, Verdict

# subset pairs are enumerated exhaustively up to this |X|
EXHAUSTIVE_DILATE_SIZE = 6


class AdditiveError(ValueError):
    pass


def _nonempty(*sets) -> None:
    if any(not s for s in sets):
        raise AdditiveError("sets must be nonempty")


def sumset(ctx: FieldCtx, X: Iterable[Fq], Y: Iterable[Fq]) -> frozenset[Fq]:
    X, Y = set(X), set(Y)
    _nonempty(X, Y)
    q, at = ctx.q, ctx.add_table
    return frozenset(at[x * q + y] for x in X for y in Y)


def iterated_sumset(ctx: FieldCtx, sets: Sequence[Iterable[Fq]]) -> frozenset[Fq]:
    acc = frozenset([0])
    for B in sets:
        acc = sumset(ctx, acc, B)
    return acc


def dilate_sum(ctx: FieldCtx, X1: Iterable[Fq], r: Fq, X2: Iterable[Fq], sign: int = 1) -> frozenset[Fq]:
    """X1 + r*X2 (sign=+1) or X1 - r*X2 (sign=-1)."""
    X1, X2 = set(X1), set(X2)
    _nonempty(X1, X2)
    if sign not in (1, -1):
        raise AdditiveError("sign must be +1 or -1")
    rr = r if sign == 1 else ctx.neg(r)
    return sumset(ctx, X1, {ctx.mul(rr, x) for x in X2})


def _subsets(X: Sequence[Fq]):
    return chain.from_iterable(combinations(X, k) for k in range(1, len(X) + 1))


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def check_dilate_cardinality(
    ctx: FieldCtx, X: Iterable[Fq], r: Fq, samples: int = 2000, seed: int = 0
) -> Verdict:
    """|X1 +- r X2| = |X1||X2| for all nonempty X1, X2 in X whenever r is not in D(X).

    Exhaustive over subset pairs for |X| <= 6, otherwise ``samples`` random pairs.
    """
    X = sorted(set(X))
    _nonempty(X)
    if r == 0:
        return Verdict(Status.NOT_APPLICABLE, {"reason": "r = 0"})
    D = product_directions(ctx, X) if len(X) >= 2 else frozenset()
    if r in D:
        return Verdict(Status.NOT_APPLICABLE, {"reason": "r in D(X)", "r": ctx.format(r)})
    if len(X) <= EXHAUSTIVE_DILATE_SIZE:
        subs = list(_subsets(X))
        pairs = ((a, b) for a in subs for b in subs)
        mode = "exhaustive"
    else:
        rng = _rng(seed)
        def pick():
            mask = rng.random(len(X)) < 0.5
            if not mask.any():
                mask[rng.integers(len(X))] = True
            return [x for x, m in zip(X, mask) if m]
        pairs = ((pick(), pick()) for _ in range(samples))
        mode = "sampled"
    checked = 0
    for X1, X2 in pairs:
        for sign in (1, -1):
            got = len(dilate_sum(ctx, X1, r, X2, sign))
            checked += 1
            if got != len(X1) * len(X2):
                return Verdict(Status.FAIL, {
                    "r": ctx.format(r),
                    "sign": sign,
                    "X1": [ctx.format(x) for x in X1],
                    "X2": [ctx.format(x) for x in X2],
                    "size": got,
                })
    return Verdict(Status.PASS, {"r": ctx.format(r), "mode": mode, "checked": checked})


def plunnecke_sides(ctx: FieldCtx, X: Iterable[Fq], Bs: Sequence[Iterable[Fq]]) -> tuple[int, int]:
    """(|B1+...+Bk| * |X|^(k-1), prod |X+Bi|) as exact integers."""
    X = set(X)
    Bs = [set(B) for B in Bs]
    _nonempty(X, *Bs)
    if not Bs:
        raise AdditiveError("need k >= 1 summands")
    lhs = len(iterated_sumset(ctx, Bs)) * len(X) ** (len(Bs) - 1)
    rhs = prod(len(sumset(ctx, X, B)) for B in Bs)
    return lhs, rhs


def check_plunnecke(ctx: FieldCtx, X: Iterable[Fq], Bs: Sequence[Iterable[Fq]]) -> Verdict:
    X = sorted(set(X))
    Bs = [sorted(set(B)) for B in Bs]
    lhs, rhs = plunnecke_sides(ctx, X, Bs)
    details = {"k": len(Bs), "lhs": lhs, "rhs": rhs, "tight": lhs == rhs}
    if lhs <= rhs:
        return Verdict(Status.PASS, details)
    details["X"] = [ctx.format(x) for x in X]
    details["B"] = [[ctx.format(b) for b in B] for B in Bs]
    return Verdict(Status.FAIL, details)


@dataclass(frozen=True)
class ClosureFlags:
    mult_closed: bool
    shift_closed: bool
    mult_witnesses: list[tuple[Fq, Fq]] = field(default_factory=list)
    shift_witnesses: list[Fq] = field(default_factory=list)


def closure_flags(ctx: FieldCtx, A: Iterable[Fq], D: frozenset[Fq] | None = None) -> ClosureFlags:
    """Scan A*D(A) and 1+D(A) against D(A)."""
    A = sorted(set(A))
    if D is None:
        D = product_directions(ctx, A)
    q, mt, at = ctx.q, ctx.mul_table, ctx.add_table
    ds = sorted(D)
    mult_bad = [(a, d) for a in A for d in ds if mt[a * q + d] not in D]
    shift_bad = [d for d in ds if at[q + d] not in D]
    return ClosureFlags(not mult_bad, not shift_bad, mult_bad, shift_bad)


def check_subfield_criterion(ctx: FieldCtx, A: Iterable[Fq]) -> Verdict:
    """Under both closures, D(A) equals the subfield generated by A."""
    A = sorted(set(A))
    D = product_directions(ctx, A)
    flags = closure_flags(ctx, A, D)
    if not (flags.mult_closed and flags.shift_closed):
        return Verdict(Status.NOT_APPLICABLE, {
            "mult_closed": flags.mult_closed,
            "shift_closed": flags.shift_closed,
        })
    F = generated_subfield(ctx, A)
    details = {"subfield_order": F.order, "directions": len(D)}
    if D == F.elements(ctx):
        return Verdict(Status.PASS, details)
    details["A"] = [ctx.format(a) for a in A]
    return Verdict(Status.FAIL, details)
