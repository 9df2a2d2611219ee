from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosrigid.angles import (
    IRRATIONAL,
    angles_of_order,
    canonicalize,
    factorize,
    inverse_totient,
    order_of,
    parse_angle,
    totient,
)


def _brute_totient(n: int) -> int:
    return sum(1 for j in range(1, n + 1) if gcd(j, n) == 1)


@pytest.mark.parametrize(
    "p,q,want,order",
    [
        ((2), 5, (2, 5), 5),
        (9, 4, (1, 4), 8),
        (-1, 3, (1, 3), 6),
        (0, 7, (0, 1), 1),
        (1, 1, (1, 1), 2),
        (4, 3, (2, 3), 3),
    ],
)
def test_canonicalize_examples(p, q, want, order):
    a = canonicalize(p, q)
    assert (a.numer, a.denom) == want
    assert order_of(a) == order


def test_order_examples():
    assert canonicalize(0, 1).order == 1
    assert canonicalize(1, 1).order == 2
    assert canonicalize(2, 3).order == 3


@given(st.integers(-500, 500), st.integers(1, 200))
def test_canonicalize_idempotent_and_order_divides_2q(p, q):
    a = canonicalize(p, q)
    assert canonicalize(a.numer, a.denom) == a
    assert 0 <= a.fraction <= 1
    assert (2 * q) % order_of(a) == 0


@given(st.integers(-500, 500), st.integers(1, 200))
def test_canonical_angle_has_same_cosine(p, q):
    import math

    a = canonicalize(p, q)
    assert math.isclose(math.cos(math.pi * p / q), math.cos(float(a)), abs_tol=1e-12)


@given(st.integers(0, 300), st.integers(1, 60))
def test_cos_periodic_in_order(p, q):
    import math

    a = canonicalize(p, q)
    u = a.order
    for n in range(1, 4):
        assert math.isclose(math.cos(n * float(a)), math.cos((n + u) * float(a)), abs_tol=1e-9)


def test_root_index_reconstructs_angle():
    for u in range(1, 40):
        for a in angles_of_order(u):
            assert Fraction(2 * a.root_index, u) == a.fraction
            assert gcd(a.root_index, u) == 1 or u == 1


@pytest.mark.parametrize("n,want", [(1, 1), (12, 4), (11, 10), (36, 12), (97, 96)])
def test_totient_examples(n, want):
    assert totient(n) == want == _brute_totient(n)


@given(st.integers(1, 300), st.integers(1, 300))
def test_totient_multiplicative(m, n):
    if gcd(m, n) == 1:
        assert totient(m * n) == totient(m) * totient(n)


@pytest.mark.parametrize("v,want", [(1, {1, 2}), (2, {3, 4, 6}), (14, set()), (4, {5, 8, 10, 12})])
def test_inverse_totient_examples(v, want):
    assert inverse_totient(v) == want
    assert want == {n for n in range(1, 301) if totient(n) == v}


def test_inverse_totient_contains_every_preimage():
    for n in range(1, 10**4 + 1):
        assert n in inverse_totient(totient(n))


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}


@pytest.mark.parametrize(
    "u,want", [(1, [(0, 1)]), (2, [(1, 1)]), (5, [(2, 5), (4, 5)]), (16, [(1, 8), (3, 8), (5, 8), (7, 8)])]
)
def test_angles_of_order_examples(u, want):
    assert angles_of_order(u) == tuple(canonicalize(p, q) for p, q in want)


def test_angles_of_order_count_and_sorted():
    for u in range(3, 200):
        got = angles_of_order(u)
        assert len(got) == totient(u) // 2
        assert list(got) == sorted(got)
        assert all(a.order == u for a in got)


def test_parse_angle():
    assert parse_angle("2/5") == canonicalize(2, 5)
    assert parse_angle(" 9/4 ") == canonicalize(1, 4)
    assert parse_angle("1") == canonicalize(1, 1)
    with pytest.raises(ValueError):
        parse_angle("1/0")
    with pytest.raises(ValueError):
        parse_angle("abc")


def test_times_and_irrational_marker():
    a = canonicalize(2, 7)
    assert a.times(3) == canonicalize(6, 7)
    assert a.times(7) == canonicalize(0, 1)
    assert IRRATIONAL is type(IRRATIONAL)()
