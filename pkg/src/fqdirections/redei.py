"""Redei polynomials of point sets and the multiplicity parameters s, t.

For a point set U and an affine slope y, ``R_y = prod (X - (y*a - b))`` over
(a, b) in U.  Division of X^q by R_y gives ``R_y * Q_y = X^q + H_y`` with
``deg H_y < |U|``.  ``s(y)`` is read off the line counts and ``t(y)`` off the
exponent support of ``H_y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .field import FieldCtx, Fq
from .geometry import (
    GeometryError,
    Point,
    affine_directions,
    grid,
    line_counts,
    ppower_dividing_all,
    product_directions,
)
from .poly import Poly, _reduce, _trim, p_power_support, pth_root, xq_mod
from .verdict import Status, Verdict


class RedeiError(ValueError):
    pass


@dataclass(frozen=True)
class WholeField:
    """t(y) when H_y is constant: the convention t = q, kept apart from ints."""

    q: int

    def __str__(self) -> str:
        return "q"


TValue = int | WholeField


def t_as_int(t: TValue) -> int:
    return t.q if isinstance(t, WholeField) else t


def t_json(t: TValue | None):
    if t is None:
        return None
    return "q" if isinstance(t, WholeField) else t


@dataclass(frozen=True)
class RedeiProfile:
    y: Fq
    R: Poly
    H: Poly
    Q: Poly
    s_y: int
    t_y: TValue
    f_witness: Poly | None
    counts: dict[Fq, int] = field(repr=False, compare=False)

    def to_json(self) -> dict:
        ctx = self.R.ctx
        return {
            "y": ctx.format(self.y),
            "R": self.R.to_text(),
            "H": self.H.to_text(),
            "Q": self.Q.to_text(),
            "s": self.s_y,
            "t": t_json(self.t_y),
            "f": self.f_witness.to_text() if self.f_witness is not None else None,
        }


@dataclass(frozen=True)
class StSummary:
    size: int
    q: int
    per_direction: list[RedeiProfile]
    s: int | None
    t: TValue | None
    violations: list[str]

    @property
    def num_directions(self) -> int:
        return len(self.per_direction)


def _check_size(ctx: FieldCtx, U) -> list[Point]:
    U = list(set(U))
    if not U:
        raise RedeiError("empty point set")
    if len(U) > ctx.q:
        raise RedeiError(f"|U| = {len(U)} exceeds q = {ctx.q}")
    return U


def _roots(counts: dict[Fq, int]) -> list[Fq]:
    return [z for z, r in sorted(counts.items()) for _ in range(r)]


def redei_poly(ctx: FieldCtx, U: Iterable[Point], y: Fq) -> Poly:
    U = _check_size(ctx, U)
    return Poly.from_roots(ctx, _roots(line_counts(ctx, U, y)))


def _h_and_q_from_r(R: Poly) -> tuple[Poly, Poly, bool]:
    ctx, d = R.ctx, R.degree
    H = -xq_mod(R, ctx.q)
    # exact division of X^q + H by R recovers Q; a zero remainder is R*Q = X^q + H
    num = list(H.coeffs) + [0] * (ctx.q + 1 - len(H.coeffs))
    num[ctx.q] = ctx.add(num[ctx.q], 1)
    quot = [0] * (ctx.q - d + 1)
    _reduce(ctx, num, R.coeffs, quot)
    exact = not any(num[:d])
    return H, Poly(ctx, _trim(quot)), exact


def h_and_q(ctx: FieldCtx, U: Iterable[Point], y: Fq) -> tuple[Poly, Poly]:
    H, Q, exact = _h_and_q_from_r(redei_poly(ctx, U, y))
    if not exact:
        raise RedeiError("R*Q != X^q + H")
    return H, Q


def _t_from_h(H: Poly) -> tuple[TValue, Poly | None]:
    if H.is_constant():
        return WholeField(H.ctx.q), None
    t = p_power_support(H, H.ctx.p)
    return t, pth_root(H, t)


def t_of_direction(ctx: FieldCtx, U: Iterable[Point], y: Fq) -> tuple[TValue, Poly | None]:
    U = _check_size(ctx, U)
    if max(line_counts(ctx, U, y).values()) < 2:
        raise RedeiError(f"slope {ctx.format(y)} is not determined by U")
    H, _ = h_and_q(ctx, U, y)
    return _t_from_h(H)


def direction_profile(ctx: FieldCtx, U: list[Point], y: Fq) -> tuple[RedeiProfile, list[str]]:
    """Profile of one determined slope, with every invariant that fails."""
    counts = line_counts(ctx, U, y)
    R = Poly.from_roots(ctx, _roots(counts))
    H, Q, exact = _h_and_q_from_r(R)
    s_y = ppower_dividing_all(counts.values(), ctx.p)
    t_y, f = _t_from_h(H)
    prof = RedeiProfile(y, R, H, Q, s_y, t_y, f, counts)
    return prof, profile_violations(prof, len(U), exact)


def profile_violations(prof: RedeiProfile, size: int, exact: bool = True) -> list[str]:
    ctx = prof.R.ctx
    p, q = ctx.p, ctx.q
    tag = f"y={ctx.format(prof.y)}"
    bad = []
    if not exact:
        bad.append(f"{tag}: R*Q != X^q + H")
    if prof.R.lead != 1 or prof.R.degree != size:
        bad.append(f"{tag}: R not monic of degree |U|")
    if prof.H.degree >= size:
        bad.append(f"{tag}: deg H >= |U|")
    if prof.Q.degree != q - size:
        bad.append(f"{tag}: deg Q != q - |U|")
    if p_power_support(prof.R, p) != prof.s_y:
        bad.append(f"{tag}: R not in F_q[X^s] minus F_q[X^ps]")
    for name, g in (("H", prof.H), ("Q", prof.Q)):
        if not g.is_constant() and p_power_support(g, p) % prof.s_y:
            bad.append(f"{tag}: {name} not in F_q[X^s]")
    if prof.s_y > t_as_int(prof.t_y):
        bad.append(f"{tag}: s(y) > t(y)")
    f = prof.f_witness
    if f is not None:
        t = prof.t_y
        # coefficientwise t-th powers: (sum c X^e)^t = sum c^t X^(et) in char p
        back = [0] * (f.degree * t + 1)
        for e, c in enumerate(f.coeffs):
            back[e * t] = ctx.pow(c, t)
        if tuple(_trim(back)) != prof.H.coeffs or p_power_support(f, p) != 1:
            bad.append(f"{tag}: witness f fails f^t = H with f outside F_q[X^p]")
    return bad


def profile(ctx: FieldCtx, U: Iterable[Point]) -> StSummary:
    U = _check_size(ctx, U)
    if len(U) < 2:
        raise RedeiError("profile needs |U| >= 2")
    profs, bad = [], []
    for y in affine_directions(ctx, U):
        prof, v = direction_profile(ctx, U, y)
        profs.append(prof)
        bad.extend(v)
    s = min((pr.s_y for pr in profs), default=None)
    t = min((pr.t_y for pr in profs), key=t_as_int, default=None)
    return StSummary(len(U), ctx.q, profs, s, t, bad)


def check_fst_bounds(ctx: FieldCtx, U: Iterable[Point], summary: StSummary | None = None) -> Verdict:
    """Both branches of the s/t direction bound, with exact rational sides."""
    if summary is None:
        summary = profile(ctx, U)
    n, q, nd = summary.size, summary.q, summary.num_directions
    if nd == 0:
        return Verdict(Status.NOT_APPLICABLE, {"reason": "no affine direction"})
    if isinstance(summary.t, WholeField):
        return Verdict(Status.NOT_APPLICABLE, {"reason": "t = q", "directions": nd})
    s, t = summary.s, summary.t
    lower = Fraction(n - 1, t + 1) + 1
    if s == 1:
        branch, upper = "s=1", Fraction(q)
    else:
        branch, upper = "s>1", Fraction(n - 1, s - 1) - 1
    checks = {
        "s<=t<q": s <= t < q,
        "lower": lower <= nd,
        "upper": nd <= upper,
    }
    details = {
        "branch": branch,
        "s": s,
        "t": t,
        "size": n,
        "directions": nd,
        "lower": lower,
        "upper": upper,
        "lower_tight": lower == nd,
        "upper_tight": upper == nd,
    }
    if all(checks.values()):
        return Verdict(Status.PASS, details)
    details["failed"] = [k for k, ok in checks.items() if not ok]
    return Verdict(Status.FAIL, details)


def dilate_size(ctx: FieldCtx, A: Iterable[Fq], y: Fq) -> int:
    """|yA - A|."""
    q, at, mt, neg = ctx.q, ctx.add_table, ctx.mul_table, ctx.neg_table
    A = list(A)
    row = y * q
    ya = [mt[row + a] for a in A]
    nb = [neg[b] for b in A]
    return len({at[u * q + v] for u in ya for v in nb})


def check_claim31(
    ctx: FieldCtx,
    A: Iterable[Fq],
    y: Fq,
    D: frozenset[Fq] | None = None,
    prof: RedeiProfile | None = None,
) -> Verdict:
    """If |yA - A| > p then t(y) = s(y) = 1 for U = A x A.

    ``D`` and ``prof`` may be passed in when the caller already has them; a
    passed-in profile is trusted to have had its invariants checked.
    """
    A = sorted(set(A))
    if len(A) >= ctx.p:
        raise RedeiError(f"claim needs |A| < p, got |A| = {len(A)}")
    if D is None:
        try:
            D = product_directions(ctx, A)
        except GeometryError as exc:
            raise RedeiError(str(exc)) from exc
    if y not in D:
        raise RedeiError(f"slope {ctx.format(y)} is not in D(A)")
    m = dilate_size(ctx, A, y)
    details = {"y": ctx.format(y), "dilate": m}
    if m <= ctx.p:
        return Verdict(Status.NOT_TRIGGERED, details)
    bad: list[str] = []
    if prof is None:
        prof, bad = direction_profile(ctx, list(grid(A)), y)
    details.update(s=prof.s_y, t=t_json(prof.t_y))
    if prof.s_y == 1 and prof.t_y == 1 and not bad:
        return Verdict(Status.PASS, details)
    details["witness"] = {"A": [ctx.format(a) for a in A], "violations": bad}
    return Verdict(Status.FAIL, details)
