import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fqdirections.field import field_new
from fqdirections.geometry import (
    VERTICAL,
    Direction,
    GeometryError,
    affine_canonical_form,
    affine_image,
    format_point,
    grid,
    is_affine_prime_coset,
    line_counts,
    normalize_set,
    parse_point,
    pointset_directions,
    product_directions,
    product_directions_naive,
    s_of_direction,
)


def test_product_directions_examples(f9):
    assert product_directions(f9, {0, 1}) == {0, 1, 2}
    assert product_directions(f9, {0, 1, 2}) == {0, 1, 2}
    for c in range(1, 9):
        assert product_directions(f9, {0, c}) == {0, 1, 2}
    with pytest.raises(GeometryError):
        product_directions(f9, {4})


def test_pointset_directions_examples(f9):
    assert pointset_directions(f9, {(0, 0), (0, 1)}) == {VERTICAL}
    assert pointset_directions(f9, {(0, 0), (1, 0), (0, 1)}) == {Direction(0), VERTICAL, Direction(2)}
    D = pointset_directions(f9, grid({0, 1}))
    assert {d.slope for d in D if not d.vertical} == product_directions(f9, {0, 1})
    assert VERTICAL in D
    with pytest.raises(GeometryError):
        pointset_directions(f9, {(1, 1)})


def test_line_counts_examples(f9):
    assert line_counts(f9, grid({0, 1}), 1) == {0: 2, 1: 1, 2: 1}
    assert line_counts(f9, grid({0, 1, 2}), 1) == {0: 3, 1: 3, 2: 3}
    assert line_counts(f9, {(4, 5)}, 7) == {f9.sub(f9.mul(7, 4), 5): 1}


def test_s_of_direction_examples(f9):
    assert s_of_direction(f9, grid({0, 1}), 1) == 1
    assert s_of_direction(f9, grid({0, 1, 2}), 1) == 3
    assert s_of_direction(f9, grid({0, 1, 2}), 0) == 3
    with pytest.raises(GeometryError):
        s_of_direction(f9, grid({0, 1}), f9.omega)


def test_normalize_set_examples(f9):
    w = f9.omega
    assert normalize_set(f9, {2, 3}, 2, 3) == {0, 1}
    assert normalize_set(f9, {0, w, f9.mul(2, w)}, 0, w) == {0, 1, 2}
    with pytest.raises(GeometryError):
        normalize_set(f9, {0, 1}, 0, 0)
    with pytest.raises(GeometryError):
        normalize_set(f9, {0, 1}, 0, 5)


def test_coset_examples(f9):
    w = f9.omega
    assert is_affine_prime_coset(f9, {0, 1, 2}) == (True, (1, 0))
    ok, (c, d) = is_affine_prime_coset(f9, {w, f9.add(1, w), f9.add(2, w)})
    assert ok and (c, d) == (1, w)
    assert is_affine_prime_coset(f9, {0, 1, w}) == (False, None)
    with pytest.raises(GeometryError):
        is_affine_prime_coset(f9, {0})


def test_coset_witness_reconstructs_set(f25):
    rng = random.Random(3)
    for _ in range(100):
        c = rng.randrange(1, 25)
        d = rng.randrange(25)
        A = {f25.add(f25.mul(c, x), d) for x in rng.sample(range(5), rng.randrange(2, 6))}
        ok, (c2, d2) = is_affine_prime_coset(f25, A)
        assert ok
        assert all(f25.in_prime_field(f25.div(f25.sub(a, d2), c2)) for a in A)


def test_pigeonhole_randomized():
    rng = random.Random(7)
    for p in (3, 5):
        ctx = field_new(p, 2)
        q = ctx.q
        for _ in range(50):
            cells = rng.sample(range(q * q), q + 1)
            assert len(pointset_directions(ctx, [divmod(c, q) for c in cells])) == q + 1


def all_subsets(ctx, sizes):
    for s in sizes:
        yield from itertools.combinations(ctx.elements(), s)


def test_symmetry_and_inversion_exhaustive(f9):
    for A in all_subsets(f9, range(2, 5)):
        D = product_directions(f9, A)
        assert 0 in D and 1 in D
        assert {f9.neg(y) for y in D} == D
        assert {f9.inv(y) for y in D if y} == D - {0}


def test_fast_directions_match_four_loops(f9, f25):
    for A in all_subsets(f9, range(2, 4)):
        assert product_directions(f9, A) == product_directions_naive(f9, A)
    rng = random.Random(11)
    for _ in range(100):
        A = rng.sample(range(25), rng.randrange(2, 7))
        assert product_directions(f25, A) == product_directions_naive(f25, A)


def test_cosets_have_prime_field_directions(f25):
    for c in range(1, 25):
        for d in (0, 7, 13):
            for A in all_subsets(field_new(5, 1), range(2, 6)):
                B = {f25.add(f25.mul(c, a), d) for a in A}
                assert all(f25.in_prime_field(y) for y in product_directions(f25, B))


@settings(max_examples=100)
@given(st.sets(st.integers(0, 24), min_size=2, max_size=7), st.integers(1, 24), st.integers(0, 24))
def test_directions_affine_invariant(A, u, v):
    ctx = field_new(5, 2)
    assert product_directions(ctx, affine_image(ctx, A, u, v)) == product_directions(ctx, A)
    a0, a1 = sorted(A)[:2]
    N = normalize_set(ctx, A, a0, a1)
    assert {0, 1} <= N and len(N) == len(A)
    assert product_directions(ctx, N) == product_directions(ctx, A)
    assert affine_canonical_form(ctx, affine_image(ctx, A, u, v)) == affine_canonical_form(ctx, A)


@settings(max_examples=100)
@given(st.sets(st.integers(0, 24), min_size=2, max_size=7))
def test_coset_flag_independent_of_pair(A):
    ctx = field_new(5, 2)
    flag, _ = is_affine_prime_coset(ctx, A)
    for a0, a1 in itertools.permutations(A, 2):
        assert all(ctx.in_prime_field(x) for x in normalize_set(ctx, A, a0, a1)) == flag


@settings(max_examples=100)
@given(st.sets(st.tuples(st.integers(0, 24), st.integers(0, 24)), min_size=1, max_size=25), st.integers(0, 24))
def test_line_counts_partition_the_set(U, y):
    ctx = field_new(5, 2)
    counts = line_counts(ctx, U, y)
    assert sum(counts.values()) == len(U)
    for z, r in counts.items():
        assert r == sum(1 for a, b in U if ctx.sub(ctx.mul(y, a), b) == z)


def test_point_text(f9):
    pt = (f9.elem(2, 1), 1)
    assert format_point(f9, pt) == "(2+1w;1)"
    assert parse_point(f9, "(2+1w;1)") == pt
    with pytest.raises(GeometryError):
        parse_point(f9, "2,1")
