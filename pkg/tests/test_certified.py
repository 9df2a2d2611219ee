from fractions import Fraction

import gmpy2
import mpmath
import numpy as np
import pytest
from gmpy2 import mpfr
from hypothesis import given
from hypothesis import strategies as st

from cosrigid.certified import (
    COS_2_11_PLUS_COS_3_11,
    EIGHT_OVER_3SQRT3,
    NAMED_CONSTANTS,
    SQRT2,
    SQRT5_OVER_2,
    THREE_HALVES,
    ZERO,
    CertScalar,
    ClosedForm,
    Cmp,
    PrecisionExhausted,
    certified_compare,
    cmp_certified,
    cos_pi_rational,
    leq_threshold,
    matches_closed_form,
    parse_threshold,
    pi_enclosure,
    refine,
    sin_pi_rational,
)
from cosrigid.cyclic import grid_sup

mpmath.mp.dps = 400


def _iv(lo, hi):
    return CertScalar(mpfr(lo), mpfr(hi), 64)


ORACLE_SLACK = mpmath.mpf(10) ** -350  # 400-digit oracle rounding, far below any enclosure width


def _mp(x: mpfr):
    num, den = x.as_integer_ratio()
    return mpmath.mpf(num) / den


def _contains_mp(x: CertScalar, v) -> bool:
    return _mp(x.lo) - ORACLE_SLACK <= v <= _mp(x.hi) + ORACLE_SLACK


def test_cos_pi_rational_examples():
    x = cos_pi_rational(1, 3, 64)
    assert x.contains(Fraction(1, 2)) and x.width < 1e-15
    x = cos_pi_rational(1, 5, 64)
    assert _contains_mp(x, (1 + mpmath.sqrt(5)) / 4)
    x = cos_pi_rational(0, 1, 64)
    assert x.lo == x.hi == 1


def test_enclosure_soundness_bulk():
    """10^4 random (p, q, bits) against a 400-digit mpmath evaluation."""
    rng = np.random.default_rng(7)
    for _ in range(10**4):
        q = int(rng.integers(1, 5000))
        p = int(rng.integers(-(10**6), 10**6))
        bits = int(rng.choice([32, 53, 64, 128, 256, 512]))
        x = cos_pi_rational(p, q, bits)
        assert _contains_mp(x, mpmath.cospi(mpmath.mpf(p) / q)), (p, q, bits)
        assert x.width <= mpfr(2) ** (-bits + 4)


@given(st.integers(-(10**6), 10**6), st.integers(1, 10**4), st.sampled_from([64, 128, 256]))
def test_cos_periodicity_overlap(p, q, bits):
    a = cos_pi_rational(p, q, bits)
    b = cos_pi_rational(p % (2 * q), q, bits)
    c = cos_pi_rational(-p, q, bits)
    assert a.overlaps(b) and a.overlaps(c)


@given(st.integers(-1000, 1000), st.integers(1, 500))
def test_sin_pi_rational(p, q):
    assert _contains_mp(sin_pi_rational(p, q), mpmath.sinpi(mpmath.mpf(p) / q))


def test_pi_enclosure():
    for bits in (32, 128, 1024):
        x = pi_enclosure(bits)
        assert _contains_mp(x, mpmath.pi) and x.width <= mpfr(2) ** (-bits + 3)


@given(
    st.fractions(min_value=-100, max_value=100, max_denominator=1000),
    st.fractions(min_value=-100, max_value=100, max_denominator=1000),
)
def test_arithmetic_encloses_exact(a, b):
    x, y = CertScalar.exact(a, 64), CertScalar.exact(b, 64)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b != 0:
        assert (x / y).contains(a / b)
    assert abs(x).contains(abs(a))
    assert x.square().contains(a * a)


@given(st.fractions(min_value=0, max_value=100, max_denominator=1000))
def test_sqrt_and_acos(a):
    x = CertScalar.exact(a, 128)
    assert _contains_mp(x.sqrt(), mpmath.sqrt(mpmath.mpf(a.numerator) / a.denominator))
    if a <= 1:
        assert _contains_mp(x.acos(), mpmath.acos(mpmath.mpf(a.numerator) / a.denominator))


def test_cmp_examples():
    assert cmp_certified(_iv(0.1, 0.2), _iv(0.3, 0.4)) is Cmp.LESS
    assert cmp_certified(_iv(0.1, 0.35), _iv(0.3, 0.4)) is Cmp.UNKNOWN
    assert cmp_certified(SQRT2.enclose(64), THREE_HALVES.enclose(64)) is Cmp.LESS


@given(st.floats(-10, 10), st.floats(0, 1), st.floats(-10, 10), st.floats(0, 1))
def test_cmp_antisymmetric_and_consistent(a, wa, b, wb):
    x, y = _iv(a, a + wa), _iv(b, b + wb)
    c, d = cmp_certified(x, y), cmp_certified(y, x)
    flip = {Cmp.LESS: Cmp.GREATER, Cmp.GREATER: Cmp.LESS, Cmp.UNKNOWN: Cmp.UNKNOWN}
    assert d is flip[c]
    if c is Cmp.LESS:
        assert x.mid < y.mid
    if c is Cmp.GREATER:
        assert x.mid > y.mid


def test_refine_examples():
    x = refine(EIGHT_OVER_3SQRT3.enclose, 1e-30)
    assert x.width <= 1e-30
    assert abs(x.mid - 1.539600717839002) < 1e-15
    z = refine(CertScalar.exact(0), 1e-40)
    assert z.lo == z.hi == 0
    with pytest.raises(PrecisionExhausted):
        certified_compare(SQRT2.enclose(), SQRT2.enclose(), cap=1024)


@given(st.integers(1, 200), st.integers(1, 200), st.sampled_from([1e-20, 1e-40, 1e-80]))
def test_refine_never_widens(p, q, target):
    start = cos_pi_rational(p, q, 64)
    out = refine(start, target)
    assert out.width <= min(start.width, target)
    assert start.lo <= out.lo and out.hi <= start.hi


def test_certified_compare_refines():
    q = 7 * 10**12 + 1
    near = cos_pi_rational(10**12, q, 32)
    seventh = cos_pi_rational(1, 7, 32)
    assert cmp_certified(near, seventh) is Cmp.UNKNOWN
    assert certified_compare(near, seventh) is Cmp.GREATER
    assert certified_compare(seventh, near) is Cmp.LESS


def test_matches_closed_form_examples():
    assert matches_closed_form(grid_sup(12, 1, 3).value, THREE_HALVES)
    s = cos_pi_rational(1, 5) + cos_pi_rational(2, 5)
    assert matches_closed_form(s, SQRT5_OVER_2)
    assert not matches_closed_form(_iv(1.4961 - 1e-5, 1.4961 + 1e-5), SQRT2)


@pytest.mark.parametrize(
    "form,oracle",
    [
        (ZERO, mpmath.mpf(0)),
        (THREE_HALVES, mpmath.mpf(1.5)),
        (SQRT2, mpmath.sqrt(2)),
        (SQRT5_OVER_2, mpmath.sqrt(5) / 2),
        (EIGHT_OVER_3SQRT3, 8 / (3 * mpmath.sqrt(3))),
        (COS_2_11_PLUS_COS_3_11, mpmath.cos(2 * mpmath.pi / 11) + mpmath.cos(3 * mpmath.pi / 11)),
    ],
)
def test_closed_form_enclosures(form, oracle):
    for bits in (64, 256, 1024):
        assert _contains_mp(form.enclose(bits), oracle)
    assert ClosedForm.parse(form.name) == form


def test_named_constants_distinct():
    for i, a in enumerate(NAMED_CONSTANTS):
        for b in NAMED_CONSTANTS[i + 1 :]:
            assert not a.enclose().overlaps(b.enclose())


@given(st.integers(-(10**6), 10**6), st.integers(1, 10**4))
def test_json_round_trip(p, q):
    x = cos_pi_rational(p, q, 128)
    y = CertScalar.from_json(x.to_json())
    assert y.lo == x.lo and y.hi == x.hi and y.precision_bits == x.precision_bits
    tagged = SQRT2.enclose().tagged(SQRT2)
    assert CertScalar.from_json(tagged.to_json()).closed_form == SQRT2


def test_thresholds():
    assert parse_threshold("three-halves") == THREE_HALVES
    assert parse_threshold("1.2") == Fraction(6, 5)
    assert parse_threshold(1.5) == Fraction(3, 2)
    with pytest.raises(ValueError):
        parse_threshold("lots")
    assert leq_threshold(SQRT2.enclose(), THREE_HALVES) == (True, True)
    assert leq_threshold(THREE_HALVES.enclose().tagged(THREE_HALVES), Fraction(3, 2)) == (True, True)
    assert leq_threshold(SQRT5_OVER_2.enclose(), Fraction(11, 10)) == (False, True)
    assert leq_threshold(SQRT2.enclose(), SQRT2) == (True, True)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        CertScalar(mpfr(1), mpfr(0))


def test_directed_rounding_context_is_restored():
    before = gmpy2.get_context().round
    cos_pi_rational(3, 17, 256)
    assert gmpy2.get_context().round == before
