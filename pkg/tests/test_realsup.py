from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from cosrigid.certified import EIGHT_OVER_3SQRT3, THREE_HALVES, TWO, ZERO, cmp_certified, Cmp
from cosrigid.cyclic import grid_sup
from cosrigid.realsup import (
    CSV_HEADER,
    ThresholdAboveSup,
    exceedance_interval,
    order_threshold,
    taylor_row,
    trig_diff_sup,
)


def _float_sup(p: int, q: int, points: int = 10**6) -> float:
    """Dense grid on [0, pi] followed by Newton polishing of the best sample."""
    x = np.linspace(0.0, np.pi, points)
    f = np.abs(np.cos(p * x) - np.cos(q * x))
    t = float(x[int(np.argmax(f))])
    for _ in range(30):
        d1 = -p * np.sin(p * t) + q * np.sin(q * t)
        d2 = -p * p * np.cos(p * t) + q * q * np.cos(q * t)
        if d2 == 0:
            break
        step = d1 / d2
        t = min(max(t - step, 0.0), np.pi)
        if abs(step) < 1e-16:
            break
    return max(float(f.max()), abs(np.cos(p * t) - np.cos(q * t)))


def test_examples():
    r = trig_diff_sup(1, 3)
    assert r.closed_form == EIGHT_OVER_3SQRT3 and abs(r.value.mid - 1.5396007178) < 1e-9
    r = trig_diff_sup(1, 2)
    assert r.closed_form == TWO and r.value.lo == 2
    r = trig_diff_sup(1, 1)
    assert r.value.lo == r.value.hi == 0 and r.closed_form == ZERO
    assert trig_diff_sup(3, 5).value.lo > Fraction(185, 100)


@pytest.mark.parametrize("p,q", [(1, 3), (1, 5), (3, 5), (2, 7), (3, 11), (5, 13), (7, 9), (3, 20)])
def test_enclosure_against_dense_sampling(p, q):
    r = trig_diff_sup(p, q, 1e-12)
    v = _float_sup(p, q)
    assert v <= float(r.value.hi) + 1e-15
    assert v >= float(r.value.lo) - 1e-12
    assert r.value.width <= 1e-12


@pytest.mark.parametrize("p,q", [(1, 3), (1, 2), (3, 5), (2, 5), (1, 7)])
def test_scale_invariance(p, q):
    base = trig_diff_sup(p, q).value
    for k in (2, 3):
        assert base.overlaps(trig_diff_sup(k * p, k * q).value)


def test_closed_form_classes():
    ceiling = EIGHT_OVER_3SQRT3.enclose()
    for p in range(1, 22):
        for q in range(p + 1, 22):
            if gcd(p, q) != 1:
                continue
            r = trig_diff_sup(p, q, 1e-6)
            if (p * q) % 2 == 0:
                assert r.value.lo == 2, (p, q)
            elif q == 3 * p:
                assert r.closed_form == EIGHT_OVER_3SQRT3
            else:
                assert cmp_certified(r.value, ceiling) is Cmp.GREATER, (p, q)


def test_exceedance_examples():
    assert exceedance_interval(1, 2, Fraction(3, 2)).lo >= 2 * 0.4472
    assert exceedance_interval(1, 3, Fraction(3, 2)).lo > 0
    with pytest.raises(ThresholdAboveSup):
        exceedance_interval(1, 1, Fraction(1, 2))
    with pytest.raises(ThresholdAboveSup):
        order_threshold(1, 3, Fraction(8, 5))


def test_exceedance_interval_is_sound():
    """Sampling the claimed interval around the witness never drops to m."""
    for p, q in ((1, 2), (1, 3), (3, 5), (3, 11)):
        r = trig_diff_sup(p, q)
        length = float(exceedance_interval(p, q, THREE_HALVES).lo)
        t = float(r.witness_t) * np.pi
        x = np.linspace(t - length / 2, t + length / 2, 20001)
        assert np.abs(np.cos(p * x) - np.cos(q * x)).min() > 1.5


@pytest.mark.parametrize("p,q,bound", [(1, 2, 8), (1, 5, 21), (3, 11, 40)])
def test_order_threshold_examples(p, q, bound):
    assert order_threshold(p, q, Fraction(3, 2)) <= bound


@pytest.mark.parametrize("p,q", [(1, 2), (1, 5), (3, 11), (3, 7)])
def test_order_threshold_conclusion(p, q):
    u = order_threshold(p, q, Fraction(3, 2))
    rng = np.random.default_rng(p * 100 + q)
    for v in [u] + rng.integers(u, 4 * u + 50, size=19).tolist():
        assert grid_sup(int(v), p, q).value.lo > Fraction(3, 2), v


def test_table_rows():
    f4 = taylor_row("f", 4)
    assert f4.theta_s.lo == 2 and f4.u_s <= 13
    g13 = taylor_row("g", 13)
    assert g13.theta_s.lo > Fraction(197, 100) and g13.u_s <= 44
    g2 = taylor_row("g", 2)
    assert g2.theta_s.lo == 2 and g2.u_s <= 12
    assert g2.delta_s.lo == g2.delta_s.hi == 3**2 + 2**2
    assert type(g2.u_s) is int
    assert len(g2.csv_fields()) == len(CSV_HEADER)
