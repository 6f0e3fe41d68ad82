"""Dense univariate polynomials over a :class:`FieldCtx`.

Coefficients are stored low-to-high as packed field codes.  The inner loops
index the context's flat add/mul tables directly, which is what keeps the
scan campaigns tractable in pure Python.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .field import FieldCtx, Fq


class PolyError(ValueError):
    pass


def _trim(cs: list[int]) -> tuple[int, ...]:
    end = len(cs)
    while end and cs[end - 1] == 0:
        end -= 1
    return tuple(cs[:end])


@dataclass(frozen=True, slots=True)
class Poly:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1] == 0:
            object.__setattr__(self, "coeffs", _trim(list(self.coeffs)))

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs: Iterable[Fq]) -> "Poly":
        return cls(ctx, _trim(list(coeffs)))

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def monomial(cls, ctx: FieldCtx, e: int, c: Fq = 1) -> "Poly":
        return cls(ctx, _trim([0] * e + [c]))

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots: Iterable[Fq]) -> "Poly":
        """Monic polynomial prod (X - z) over the roots, with repetition."""
        q, at, mt, neg = ctx.q, ctx.add_table, ctx.mul_table, ctx.neg_table
        cs = [1]
        for z in roots:
            nz = neg[z] * q
            # multiply in place by (X - z)
            cs.append(0)
            for i in range(len(cs) - 1, 0, -1):
                cs[i] = at[cs[i - 1] * q + mt[nz + cs[i]]] if cs[i] else cs[i - 1]
            cs[0] = mt[nz + cs[0]]
        return cls(ctx, tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self) -> Fq:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, e: int) -> Fq:
        return self.coeffs[e] if 0 <= e < len(self.coeffs) else 0

    def __add__(self, other: "Poly") -> "Poly":
        return poly_add(self, other)

    def __sub__(self, other: "Poly") -> "Poly":
        return poly_add(self, poly_neg(other))

    def __neg__(self) -> "Poly":
        return poly_neg(self)

    def __mul__(self, other: "Poly") -> "Poly":
        return poly_mul(self, other)

    def __pow__(self, e: int) -> "Poly":
        acc = Poly(self.ctx, (1,))
        base = self
        while e:
            if e & 1:
                acc = poly_mul(acc, base)
            base = poly_mul(base, base)
            e >>= 1
        return acc

    def __divmod__(self, other: "Poly"):
        return poly_divrem(self, other)

    def __call__(self, x: Fq) -> Fq:
        q, at, mt = self.ctx.q, self.ctx.add_table, self.ctx.mul_table
        acc = 0
        for c in reversed(self.coeffs):
            acc = at[mt[acc * q + x] * q + c]
        return acc

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return " ".join(self.ctx.format(c) for c in self.coeffs)

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> "Poly":
        return cls.from_coeffs(ctx, (ctx.parse(t) for t in text.split()))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            cs = self.ctx.format(c)
            if "w" in cs:
                cs = f"({cs})"
            if e == 0:
                terms.append(cs)
                continue
            mono = "X" if e == 1 else f"X^{e}"
            terms.append(mono if c == 1 else cs + mono)
        return " + ".join(terms)


def _same_field(a: Poly, b: Poly) -> None:
    if a.ctx is not b.ctx and a.ctx != b.ctx:
        raise PolyError(f"field mismatch: {a.ctx} vs {b.ctx}")


def poly_add(a: Poly, b: Poly) -> Poly:
    _same_field(a, b)
    q, at = a.ctx.q, a.ctx.add_table
    x, y = a.coeffs, b.coeffs
    if len(x) < len(y):
        x, y = y, x
    out = list(x)
    for i, c in enumerate(y):
        out[i] = at[out[i] * q + c]
    return Poly(a.ctx, _trim(out))


def poly_neg(a: Poly) -> Poly:
    neg = a.ctx.neg_table
    return Poly(a.ctx, tuple(neg[c] for c in a.coeffs))


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_mul(a: Poly, b: Poly) -> Poly:
    _same_field(a, b)
    if not a.coeffs or not b.coeffs:
        return Poly(a.ctx, ())
    q, at, mt = a.ctx.q, a.ctx.add_table, a.ctx.mul_table
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    bs = [(j, c) for j, c in enumerate(b.coeffs) if c]
    for i, ai in enumerate(a.coeffs):
        if not ai:
            continue
        row = ai * q
        for j, bj in bs:
            out[i + j] = at[out[i + j] * q + mt[row + bj]]
    return Poly(a.ctx, _trim(out))


def _reduce(ctx: FieldCtx, r: list[int], den: Sequence[int], quot: list[int] | None = None) -> None:
    """Reduce ``r`` in place modulo ``den`` (low-to-high, nonzero lead).

    On return ``r[:deg den]`` holds the remainder; the quotient is written
    into ``quot`` when given.
    """
    q, at, mt, neg = ctx.q, ctx.add_table, ctx.mul_table, ctx.neg_table
    d = len(den) - 1
    lead_inv = ctx.inv(den[-1])
    low = [(j, neg[c]) for j, c in enumerate(den[:d]) if c]
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i]
        if not c:
            continue
        if lead_inv != 1:
            c = mt[c * q + lead_inv]
        if quot is not None:
            quot[i - d] = c
        base, row = i - d, c * q
        for j, nd in low:
            r[base + j] = at[r[base + j] * q + mt[row + nd]]
        r[i] = 0


def poly_divrem(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    _same_field(num, den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ctx = num.ctx
    d = den.degree
    if num.degree < d:
        return Poly(ctx, ()), num
    r = list(num.coeffs)
    quot = [0] * (len(r) - d)
    _reduce(ctx, r, den.coeffs, quot)
    return Poly(ctx, _trim(quot)), Poly(ctx, _trim(r[:d]))


def xq_mod(R: Poly, e: int) -> Poly:
    """X^e mod R by square-and-multiply; never builds X^e itself."""
    if R.degree < 1 or R.lead != 1:
        raise PolyError("xq_mod needs a monic modulus of degree >= 1")
    ctx, den = R.ctx, R.coeffs
    acc: list[int] = [1]
    for bit in bin(e)[2:]:
        acc = list(poly_mul(Poly(ctx, tuple(acc)), Poly(ctx, tuple(acc))).coeffs) or [0]
        if bit == "1":
            acc.insert(0, 0)
        if len(acc) > R.degree:
            _reduce(ctx, acc, den)
            acc = acc[: R.degree]
    return Poly.from_coeffs(ctx, acc)


def _pvaluation_power(n: int, p: int) -> int:
    m = 1
    while n % (m * p) == 0:
        m *= p
    return m


def p_power_support(f: Poly, p: int) -> int:
    """Largest p^v dividing every positive exponent that carries a coefficient."""
    g = 0
    for e, c in enumerate(f.coeffs):
        if c and e:
            g = gcd(g, e)
    if g == 0:
        raise PolyError("p_power_support of a constant polynomial")
    return _pvaluation_power(g, p)


def pth_root(f: Poly, m: int) -> Poly:
    """g with g^m = f, for m a power of the characteristic."""
    ctx = f.ctx
    out = [0] * (f.degree // m + 1 if f.coeffs else 0)
    for e, c in enumerate(f.coeffs):
        if not c:
            continue
        if e % m:
            raise PolyError(f"exponent {e} is not a multiple of {m}")
        out[e // m] = ctx.root(c, m)
    return Poly.from_coeffs(ctx, out)
