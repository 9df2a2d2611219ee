from fractions import Fraction

import numpy as np
import pytest

from cosrigid.angles import IRRATIONAL, angles_of_order, canonicalize
from cosrigid.certified import (
    EIGHT_OVER_3SQRT3,
    SQRT2,
    SQRT5_OVER_2,
    THREE_HALVES,
    Cmp,
    certified_compare,
    leq_threshold,
    matches_closed_form,
)
from cosrigid.cyclic import gamma
from cosrigid.kconst import (
    KValue,
    ThresholdTooHigh,
    check_large_index,
    check_middle_index,
    check_omega_classes,
    check_sigma_values,
    check_small_index,
    check_theta_values,
    delta1_set,
    delta_set,
    k_of_angle,
    k_of_order,
    omega,
    oracle_k,
    sigma,
    theta,
)


def _brute_k(u: int, max_order: int) -> float:
    """min over b != a with order <= max_order of max_n |cos(na) - cos(nb)|, a of order u."""
    a = angles_of_order(u)[0]
    best = np.inf
    for v in range(1, max_order + 1):
        bs = [float(b) for b in angles_of_order(v) if b != a]
        if not bs:
            continue
        n = np.arange(1, int(np.lcm(u, v)) + 1)
        d = np.abs(np.cos(np.outer(bs, n)) - np.cos(float(a) * n)).max(axis=1)
        best = min(best, float(d.min()))
    return best


@pytest.mark.parametrize("u,full,reduced", [(12, (1, 5), (5,)), (6, (1,), ()), (1, (1,), ()), (7, (1, 2, 3), (2, 3))])
def test_delta_sets(u, full, reduced):
    assert delta_set(u) == full
    assert delta1_set(u) == reduced


def test_theta_without_competitors_is_two():
    for u in (2, 3, 4, 6):
        assert theta(u).lo == theta(u).hi == 2


def test_sigma_of_one_is_three_halves():
    assert matches_closed_form(sigma(1), THREE_HALVES)


@pytest.mark.parametrize("u,form", [(5, SQRT5_OVER_2), (16, SQRT2), (12, THREE_HALVES), (8, SQRT2), (10, SQRT5_OVER_2)])
def test_k_of_order_examples(u, form):
    assert matches_closed_form(k_of_order(u).value, form)


def test_k_of_order_seven():
    k = k_of_order(7).value
    assert k.lo > Fraction(3, 2)
    assert certified_compare(k, EIGHT_OVER_3SQRT3.enclose()) is Cmp.LESS


def test_k_of_angle_examples():
    assert k_of_angle(IRRATIONAL).is_irrational_max
    assert k_of_angle(IRRATIONAL).closed_form == EIGHT_OVER_3SQRT3
    for p, q in ((0, 1), (1, 2)):
        k = k_of_angle(canonicalize(p, q)).value
        assert k.lo == k.hi == Fraction(3, 2)


def test_k_matches_brute_force_search():
    for u in range(1, 16):
        assert abs(k_of_order(u).value.mid - _brute_k(u, 3 * u + 30)) < 1e-12, u


def test_k_matches_package_oracle():
    for u in range(1, 61):
        assert abs(k_of_order(u).value.mid - oracle_k(angles_of_order(u)[0])) < 1e-12, u


def test_floor_and_strict_ceiling():
    floor = SQRT5_OVER_2.enclose()
    ceiling = EIGHT_OVER_3SQRT3.enclose()
    for u in range(1, 201):
        k = k_of_order(u).value
        assert k.lo >= floor.hi or matches_closed_form(k, SQRT5_OVER_2), u
        assert k.hi < ceiling.lo, u


def test_order_class_constancy():
    for u in range(1, 60):
        ks = {id(k_of_angle(a)) for a in angles_of_order(u)}
        assert len(ks) == 1


def test_omega_monotone():
    grid = [Fraction(100 + 5 * i, 100) for i in range(11)] + [Fraction(153, 100)]
    prev: set = set()
    for m in grid:
        cur = set(omega(m).angles)
        assert prev <= cur, m
        prev = cur


def test_omega_members_have_a_competitor():
    o = omega(THREE_HALVES)
    for a, k in o.members:
        assert leq_threshold(k.value, THREE_HALVES)[0]
        assert len(gamma(a, THREE_HALVES).members) >= 2, a


def test_omega_rejects_high_threshold():
    with pytest.raises(ThresholdTooHigh):
        omega(Fraction(16, 10))


def test_omega_json():
    data = omega(THREE_HALVES).to_json()
    assert data["count"] == 45 and data["m"] == "three-halves"
    kinds = {(d["angle"], d["kind"]) for d in data["discrepancies"]}
    assert kinds == {("1", "present-but-unlisted"), ("11/12", "present-but-unlisted"), ("5/4", "unlistable")}


def test_kvalue_round_trip():
    for u in (1, 5, 7, 11, 16, 40):
        k = k_of_order(u)
        back = KValue.from_json(k.to_json())
        assert back.value.lo == k.value.lo and back.value.hi == k.value.hi
        assert (back.kind, back.order, back.source, back.closed_form) == (k.kind, k.order, k.source, k.closed_form)


@pytest.mark.parametrize(
    "check",
    [check_small_index, check_middle_index, check_large_index, check_theta_values, check_sigma_values],
)
def test_index_checks_pass(check):
    rep = check(30)
    assert rep.passed, [r for r in rep.rows if r.startswith("FAIL")]


def test_omega_class_check_passes():
    assert check_omega_classes().passed
