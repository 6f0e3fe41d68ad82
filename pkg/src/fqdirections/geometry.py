"""Point sets in F_q^2, their direction sets and line-intersection counts."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .field import FieldCtx, Fq


class GeometryError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Direction:
    """An affine slope, or the vertical direction when ``slope`` is None."""

    slope: Fq | None

    @property
    def vertical(self) -> bool:
        return self.slope is None

    def format(self, ctx: FieldCtx) -> str:
        return "inf" if self.slope is None else ctx.format(self.slope)


VERTICAL = Direction(None)


def affine(y: Fq) -> Direction:
    return Direction(y)


Point = tuple[Fq, Fq]


def grid(A: Iterable[Fq]) -> frozenset[Point]:
    """The Cartesian product A x A as a point set."""
    A = list(A)
    return frozenset((a, b) for a in A for b in A)


def difference_set(ctx: FieldCtx, A: Iterable[Fq]) -> set[Fq]:
    q, at, neg = ctx.q, ctx.add_table, ctx.neg_table
    A = list(A)
    return {at[a * q + neg[b]] for a in A for b in A}


def product_directions(ctx: FieldCtx, A: Iterable[Fq]) -> frozenset[Fq]:
    """D(A) = {(a1 - a2)/(a3 - a4) : a3 != a4}, as a set of slopes."""
    A = set(A)
    if len(A) < 2:
        raise GeometryError("direction set needs |A| >= 2")
    q, mt, inv = ctx.q, ctx.mul_table, ctx.inv_table
    diffs = difference_set(ctx, A)
    rows = [d * q for d in diffs]
    out = set()
    for d in diffs:
        if d:
            di = inv[d]
            out.update(mt[r + di] for r in rows)
    return frozenset(out)


def _slope(ctx: FieldCtx, u: Point, v: Point) -> Direction:
    dx = ctx.sub(u[0], v[0])
    if dx == 0:
        return VERTICAL
    return Direction(ctx.div(ctx.sub(u[1], v[1]), dx))


def pointset_directions(ctx: FieldCtx, U: Iterable[Point]) -> frozenset[Direction]:
    U = list(set(U))
    if len(U) < 2:
        raise GeometryError("direction set needs |U| >= 2")
    out = set()
    for i, u in enumerate(U):
        for v in U[i + 1 :]:
            out.add(_slope(ctx, u, v))
    return frozenset(out)


def affine_directions(ctx: FieldCtx, U: Iterable[Point]) -> list[Fq]:
    """Sorted affine slopes determined by U (vertical dropped)."""
    return sorted(d.slope for d in pointset_directions(ctx, U) if not d.vertical)


def line_counts(ctx: FieldCtx, U: Iterable[Point], y: Fq) -> dict[Fq, int]:
    """z -> number of points (a, b) of U with y*a - b = z."""
    q, at, mt, neg = ctx.q, ctx.add_table, ctx.mul_table, ctx.neg_table
    row = y * q
    return dict(Counter(at[mt[row + a] * q + neg[b]] for a, b in U))


def ppower_dividing_all(counts: Iterable[int], p: int) -> int:
    """Largest p^v dividing every positive count."""
    m = None
    for c in counts:
        if not c:
            continue
        k = 1
        while c % (k * p) == 0:
            k *= p
        m = k if m is None else min(m, k)
    return m or 1


def s_of_direction(ctx: FieldCtx, U: Iterable[Point], y: Fq) -> int:
    U = list(U)
    counts = line_counts(ctx, U, y)
    if max(counts.values(), default=0) < 2:
        raise GeometryError(f"slope {ctx.format(y)} is not determined by U")
    return ppower_dividing_all(counts.values(), ctx.p)


def normalize_set(ctx: FieldCtx, A: Iterable[Fq], a0: Fq, a1: Fq) -> frozenset[Fq]:
    """The affine image (A - a0)/(a1 - a0), which contains 0 and 1."""
    A = frozenset(A)
    if a0 == a1 or a0 not in A or a1 not in A:
        raise GeometryError("normalization needs two distinct members of A")
    scale = ctx.inv(ctx.sub(a1, a0))
    return frozenset(ctx.mul(ctx.sub(a, a0), scale) for a in A)


def affine_image(ctx: FieldCtx, A: Iterable[Fq], u: Fq, v: Fq) -> frozenset[Fq]:
    return frozenset(ctx.add(ctx.mul(u, a), v) for a in A)


def is_affine_prime_coset(ctx: FieldCtx, A: Iterable[Fq]) -> tuple[bool, tuple[Fq, Fq] | None]:
    """Whether A lies in c*F_p + d; on success returns the witness (c, d)."""
    elems = sorted(set(A))
    if len(elems) < 2:
        raise GeometryError("coset test needs |A| >= 2")
    a0, a1 = elems[0], elems[1]
    if all(ctx.in_prime_field(x) for x in normalize_set(ctx, elems, a0, a1)):
        return True, (ctx.sub(a1, a0), a0)
    return False, None


def parse_point(ctx: FieldCtx, text: str) -> Point:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")) or s.count(";") != 1:
        raise GeometryError(f"cannot parse point {text!r}")
    x, y = s[1:-1].split(";")
    return ctx.parse(x), ctx.parse(y)


def format_point(ctx: FieldCtx, pt: Point) -> str:
    return f"({ctx.format(pt[0])};{ctx.format(pt[1])})"


def product_directions_naive(ctx: FieldCtx, A: Iterable[Fq]) -> frozenset[Fq]:
    """D(A) straight from its definition: four nested loops, no shortcuts.

    Kept as an independent reference for :func:`product_directions`.
    """
    A = list(set(A))
    out = set()
    for a1 in A:
        for a2 in A:
            for a3 in A:
                for a4 in A:
                    if a3 != a4:
                        out.add(ctx.div(ctx.sub(a1, a2), ctx.sub(a3, a4)))
    return frozenset(out)


def affine_canonical_form(ctx: FieldCtx, A: Iterable[Fq]) -> tuple[Fq, ...]:
    """Representative of A's orbit under x -> u*x + v (u != 0).

    The least sorted tuple among all normalizations (A - a0)/(a1 - a0); the
    set of normalizations is the same for every member of the orbit.
    """
    A = sorted(set(A))
    if len(A) < 2:
        raise GeometryError("canonical form needs |A| >= 2")
    q, at, mt, neg, inv = ctx.q, ctx.add_table, ctx.mul_table, ctx.neg_table, ctx.inv_table
    best = None
    for a0 in A:
        shifted = [at[a * q + neg[a0]] for a in A]
        for d in shifted:
            if not d:
                continue
            row = inv[d]
            cand = tuple(sorted(mt[x * q + row] for x in shifted))
            if best is None or cand < best:
                best = cand
    return best
