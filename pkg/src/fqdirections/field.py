"""Exact arithmetic in F_p and F_{p^2}.

Elements are packed integers ``c0 + c1*p`` with ``0 <= c0, c1 < p``, so the
canonical form is unique and equality, hashing and ordering are plain ``int``
operations.  For ``k = 2`` the second coordinate multiplies ``w`` with
``w^2 = n``, ``n`` the least quadratic non-residue mod ``p``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from math import lcm

Fq = int

# flat add/mul tables are materialised up to this field order
TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def least_nonresidue(p: int) -> int:
    """Smallest positive n with n^((p-1)/2) = -1 mod p."""
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise FieldError(f"no quadratic non-residue mod {p}")


class _LazyTable:
    """Stand-in for a flat ``q*q`` table when ``q`` is too large to store."""

    def __init__(self, q: int, op):
        self.q = q
        self.op = op

    def __getitem__(self, i: int) -> int:
        a, b = divmod(i, self.q)
        return self.op(a, b)


@dataclass(frozen=True)
class FieldCtx:
    p: int
    k: int
    n: int | None = None
    q: int = field(init=False)
    add_table: list = field(init=False, repr=False, compare=False)
    mul_table: list = field(init=False, repr=False, compare=False)
    neg_table: list = field(init=False, repr=False, compare=False)
    inv_table: list = field(init=False, repr=False, compare=False)
    exp_table: list = field(init=False, repr=False, compare=False)
    log_table: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.p % 2 == 0 or not is_prime(self.p):
            raise FieldError(f"p must be an odd prime, got {self.p}")
        if self.k not in (1, 2):
            raise FieldError(f"unsupported extension degree {self.k}")
        expected_n = least_nonresidue(self.p) if self.k == 2 else None
        if self.n is None and expected_n is not None:
            object.__setattr__(self, "n", expected_n)
        if self.n != expected_n:
            raise FieldError(f"reduction constant must be {expected_n}, got {self.n}")
        q = self.p**self.k
        object.__setattr__(self, "q", q)
        if q <= TABLE_LIMIT:
            add_t = [self._add(a, b) for a in range(q) for b in range(q)]
            mul_t = [self._mul(a, b) for a in range(q) for b in range(q)]
        else:
            add_t = _LazyTable(q, self._add)
            mul_t = _LazyTable(q, self._mul)
        neg_t = [self._neg(a) for a in range(q)]
        inv_t = [0] + [self._pow(a, q - 2) for a in range(1, q)]
        exp_t, log_t = self._discrete_log_tables()
        object.__setattr__(self, "exp_table", exp_t)
        object.__setattr__(self, "log_table", log_t)
        object.__setattr__(self, "add_table", add_t)
        object.__setattr__(self, "mul_table", mul_t)
        object.__setattr__(self, "neg_table", neg_t)
        object.__setattr__(self, "inv_table", inv_t)

    # coordinate-level kernels, used to build the tables
    def _add(self, a: int, b: int) -> int:
        p = self.p
        a1, a0 = divmod(a, p)
        b1, b0 = divmod(b, p)
        return (a0 + b0) % p + ((a1 + b1) % p) * p

    def _neg(self, a: int) -> int:
        p = self.p
        a1, a0 = divmod(a, p)
        return (-a0) % p + ((-a1) % p) * p

    def _mul(self, a: int, b: int) -> int:
        p = self.p
        a1, a0 = divmod(a, p)
        b1, b0 = divmod(b, p)
        c0 = (a0 * b0 + (self.n or 0) * a1 * b1) % p
        c1 = (a0 * b1 + a1 * b0) % p
        return c0 + c1 * p

    def _discrete_log_tables(self) -> tuple[list[int], list[int]]:
        q = self.q
        for g in range(2, q):
            exp_t = [1]
            x = g
            while x != 1:
                exp_t.append(x)
                x = self._mul(x, g)
            if len(exp_t) == q - 1:
                log_t = [0] * q
                for i, x in enumerate(exp_t):
                    log_t[x] = i
                return exp_t, log_t
        raise FieldError("no primitive element found")

    def _pow(self, a: int, e: int) -> int:
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self._mul(acc, base)
            base = self._mul(base, base)
            e >>= 1
        return acc

    # public element API
    def elem(self, c0: int, c1: int = 0) -> Fq:
        if self.k == 1 and c1 % self.p:
            raise FieldError("prime field elements have no w coordinate")
        return c0 % self.p + (c1 % self.p) * self.p

    def coords(self, x: Fq) -> tuple[int, int]:
        c1, c0 = divmod(x, self.p)
        return c0, c1

    @property
    def omega(self) -> Fq:
        if self.k != 2:
            raise FieldError("prime field has no w")
        return self.p

    def elements(self) -> range:
        return range(self.q)

    def add(self, x: Fq, y: Fq) -> Fq:
        return self.add_table[x * self.q + y]

    def sub(self, x: Fq, y: Fq) -> Fq:
        return self.add_table[x * self.q + self.neg_table[y]]

    def neg(self, x: Fq) -> Fq:
        return self.neg_table[x]

    def mul(self, x: Fq, y: Fq) -> Fq:
        return self.mul_table[x * self.q + y]

    def inv(self, x: Fq) -> Fq:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.inv_table[x]

    def div(self, x: Fq, y: Fq) -> Fq:
        return self.mul(x, self.inv(y))

    def pow(self, x: Fq, e: int) -> Fq:
        if e < 0:
            return self.pow(self.inv(x), -e)
        if x == 0:
            return 1 if e == 0 else 0
        return self.exp_table[self.log_table[x] * e % (self.q - 1)]

    def frobenius(self, x: Fq) -> Fq:
        # (c0 + c1 w)^p = c0 + c1 w^p and w^(p-1) = n^((p-1)/2) = -1
        if self.k == 1:
            return x
        c0, c1 = self.coords(x)
        return self.elem(c0, -c1)

    def in_prime_field(self, x: Fq) -> bool:
        return x < self.p

    def root(self, x: Fq, m: int) -> Fq:
        """The unique m-th root of x for m a power of p."""
        v = 0
        while m > 1:
            m, r = divmod(m, self.p)
            if r:
                raise FieldError("root order must be a power of p")
            v += 1
        # Frobenius has order k, so its v-th power is undone by (-v mod k) more
        for _ in range(-v % self.k):
            x = self.frobenius(x)
        return x

    def format(self, x: Fq) -> str:
        c0, c1 = self.coords(x)
        if c1 == 0:
            return str(c0)
        return f"{c0}+{c1}w"

    def parse(self, text: str) -> Fq:
        s = text.strip().replace(" ", "")
        if _PRIME_RE.fullmatch(s):
            return self.elem(int(s))
        m = _EXT_RE.fullmatch(s)
        if not m:
            raise FieldError(f"cannot parse field element {text!r}")
        if self.k == 1:
            raise FieldError(f"{text!r} has a w coordinate but the field is prime")
        c1 = m.group("c1")
        c1 = 1 if c1 == "" else -1 if c1 == "-" else int(c1)
        return self.elem(int(m.group("c0") or 0), c1)

    def __str__(self) -> str:
        return f"F_{self.q}" if self.k == 1 else f"F_{self.q} (w^2={self.n})"


_PRIME_RE = re.compile(r"-?\d+")
_EXT_RE = re.compile(r"(?:(?P<c0>-?\d+)\+)?(?P<c1>-?\d*)w")


def field_new(p: int, k: int) -> FieldCtx:
    """Canonical context for F_{p^k}; validates p and k."""
    if not isinstance(p, int) or not isinstance(k, int):
        raise FieldError("p and k must be integers")
    return FieldCtx(p, k)


@dataclass(frozen=True)
class Subfield:
    p: int
    m: int

    @property
    def order(self) -> int:
        return self.p**self.m

    def elements(self, ctx: FieldCtx) -> frozenset[Fq]:
        if self.m == ctx.k:
            return frozenset(ctx.elements())
        return frozenset(range(ctx.p))


def frobenius_degree(ctx: FieldCtx, x: Fq) -> int:
    """Least d >= 1 with x^(p^d) = x."""
    d, y = 1, ctx.frobenius(x)
    while y != x:
        d += 1
        y = ctx.frobenius(y)
    return d


def generated_subfield(ctx: FieldCtx, xs) -> Subfield:
    degrees = [frobenius_degree(ctx, x) for x in xs]
    return Subfield(ctx.p, reduce(lcm, degrees, 1))
