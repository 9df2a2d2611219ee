"""Suprema of ``|cos(n a) - cos(n b)|`` over n >= 1 for rational angles.

Both sequences are periodic with period ``U = lcm(ord a, ord b)``, so the
supremum is a maximum over ``n = 1..U``.  The scan runs in two passes:

1. every candidate is bounded with outward-rounded double-precision interval
   arithmetic on a table of certified ``cos(2 pi j / U)`` enclosures;
2. only candidates whose upper bound reaches the best lower bound
   ("contenders") are re-evaluated with MPFR at the working precision.

Contenders whose enclosures still overlap after step 2 are treated as tied and
the smallest index is reported as witness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import floor, lcm

import numpy as np
from gmpy2 import mpfr

from .angles import IrrationalMultipleOfPi, RationalAngle, angles_of_order, canonicalize, parse_angle
from .certified import (
    DEFAULT_BITS,
    DEFAULT_CAP,
    NAMED_CONSTANTS,
    ZERO,
    CertScalar,
    ClosedForm,
    Threshold,
    cos_pi_rational,
    leq_threshold,
    parse_threshold,
    pi_enclosure,
    recognize,
    threshold_enclosure,
    threshold_str,
)

MAX_PERIOD = 10**6


class PeriodOverflow(ValueError):
    """The enumeration period exceeds :data:`MAX_PERIOD`."""


class IrrationalNotSupported(TypeError):
    """Enumeration is only defined for rational multiples of pi."""


@dataclass(frozen=True)
class SupResult:
    """Certified ``max_{1<=n<=period} |cos(n a) - cos(n b)|`` with its smallest witness."""

    value: CertScalar
    witness_n: int
    period: int
    certified: bool = True

    @property
    def closed_form(self) -> ClosedForm | None:
        return self.value.closed_form

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "closed_form": None if self.closed_form is None else self.closed_form.name,
            "witness_n": self.witness_n,
            "period": self.period,
            "certified": self.certified,
        }

    @classmethod
    def from_json(cls, data: dict) -> SupResult:
        return cls(
            CertScalar.from_json(data["value"]),
            int(data["witness_n"]),
            int(data["period"]),
            bool(data.get("certified", True)),
        )


# float screening -------------------------------------------------------------


@lru_cache(maxsize=1024)
def cos_table(period: int) -> tuple[np.ndarray, np.ndarray]:
    """Outward-rounded double bounds on ``cos(2 pi j / period)``, j = 0..period-1."""
    lo = np.empty(period)
    hi = np.empty(period)
    for j in range(period // 2 + 1):
        lo[j], hi[j] = cos_pi_rational(2 * j, period, 64).float_bounds()
        lo[-j], hi[-j] = lo[j], hi[j]
    lo.flags.writeable = False
    hi.flags.writeable = False
    return lo, hi


def _abs_bounds(dlo: np.ndarray, dhi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dlo = np.nextafter(dlo, -np.inf)
    dhi = np.nextafter(dhi, np.inf)
    lo = np.where(dlo >= 0, dlo, np.where(dhi <= 0, -dhi, 0.0))
    hi = np.maximum(np.abs(dlo), np.abs(dhi))
    return lo, hi


def screen(period: int, alpha: int, betas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Double-precision bounds on ``|cos(2 pi alpha n/U) - cos(2 pi beta n/U)|``.

    Returns arrays of shape ``(len(betas), period)``; column ``n - 1`` holds index n.
    """
    tlo, thi = cos_table(period)
    n = np.arange(1, period + 1, dtype=np.int64)
    ia = (alpha * n) % period
    ib = (np.asarray(betas, dtype=np.int64)[:, None] * n[None, :]) % period
    return _abs_bounds(tlo[ia][None, :] - thi[ib], thi[ia][None, :] - tlo[ib])


# high-precision refinement ----------------------------------------------------


def _term(period: int, alpha: int, beta: int, n: int, bits: int) -> CertScalar:
    ca = cos_pi_rational(2 * ((alpha * n) % period), period, bits)
    cb = cos_pi_rational(2 * ((beta * n) % period), period, bits)
    return abs(ca - cb)


def _max_over(period: int, alpha: int, beta: int, ns: list[int], bits: int) -> CertScalar:
    vals = [_term(period, alpha, beta, n, bits) for n in ns]
    best = CertScalar(max(v.lo for v in vals), max(v.hi for v in vals), bits)
    return best


def _row_sup(period: int, alpha: int, beta: int, lo: np.ndarray, hi: np.ndarray, bits: int) -> SupResult:
    floor_lo = lo.max()
    contenders = (np.flatnonzero(hi >= floor_lo) + 1).tolist()
    # one evaluation per distinct (n a, n b) residue pair
    seen: dict[tuple[int, int], int] = {}
    for n in contenders:
        key = tuple(
            sorted((min((alpha * n) % period, (-alpha * n) % period), min((beta * n) % period, (-beta * n) % period)))
        )
        seen.setdefault(key, n)
    reps = sorted(seen.values())
    vals = {n: _term(period, alpha, beta, n, bits) for n in reps}
    best_lo = max(v.lo for v in vals.values())
    best_hi = max(v.hi for v in vals.values())
    tied = {key for key, n in seen.items() if vals[n].hi >= best_lo}
    witness = next(
        n
        for n in contenders
        if tuple(
            sorted((min((alpha * n) % period, (-alpha * n) % period), min((beta * n) % period, (-beta * n) % period)))
        )
        in tied
    )
    finals = sorted(seen[k] for k in tied)
    value = CertScalar(best_lo, best_hi, bits).with_recompute(lambda b: _max_over(period, alpha, beta, finals, b))
    return SupResult(value, witness, period)


def grid_sup(period: int, alpha: int, beta: int, bits: int = DEFAULT_BITS) -> SupResult:
    """Certified ``max_{1<=n<=period} |cos(2 pi alpha n/period) - cos(2 pi beta n/period)|``."""
    if period > MAX_PERIOD:
        raise PeriodOverflow(f"period {period} exceeds {MAX_PERIOD}")
    if (alpha - beta) % period == 0 or (alpha + beta) % period == 0:
        zero = CertScalar.exact(0, bits).tagged(ZERO)
        return SupResult(zero, 1, period)
    lo, hi = screen(period, alpha, np.array([beta]))
    return _row_sup(period, alpha, beta, lo[0], hi[0], bits)


def min_grid_sup(period: int, alpha: int, betas: list[int], bits: int = DEFAULT_BITS) -> tuple[SupResult, int]:
    """Minimum over ``beta`` of :func:`grid_sup`; returns the row result and its beta.

    Numerically tied rows resolve to the first beta in ``betas``.
    """
    if not betas:
        raise ValueError("no competitors")
    if period > MAX_PERIOD:
        raise PeriodOverflow(f"period {period} exceeds {MAX_PERIOD}")
    lo, hi = screen(period, alpha, np.array(betas))
    row_lo = lo.max(axis=1)
    row_hi = hi.max(axis=1)
    ceiling = row_hi.min()
    candidates = [i for i in range(len(betas)) if row_lo[i] <= ceiling]
    results = {i: _row_sup(period, alpha, betas[i], lo[i], hi[i], bits) for i in candidates}
    best_hi = min(r.value.hi for r in results.values())
    chosen = next(i for i in candidates if results[i].value.lo <= best_hi)
    return results[chosen], betas[chosen]


# pairs of angles ---------------------------------------------------------------


def _root_indices(a: RationalAngle, b: RationalAngle) -> tuple[int, int, int]:
    period = lcm(a.order, b.order)
    return period, a.root_index * (period // a.order), b.root_index * (period // b.order)


def closed_form_of(result: SupResult, alpha: int, beta: int) -> ClosedForm:
    """A named constant matching the value, else the cos-sum read off the witness."""
    period = result.period
    named = recognize(result.value, NAMED_CONSTANTS)
    if named is not None:
        return named
    n = result.witness_n
    ta = canonicalize(2 * alpha * n, period)
    tb = canonicalize(2 * beta * n, period)
    diff = cos_pi_rational(ta.numer, ta.denom) - cos_pi_rational(tb.numer, tb.denom)
    if diff.hi < 0:
        ta, tb = tb, ta
    # -cos(t) = cos(pi - t)
    return ClosedForm.cos_sum((1, ta), (1, canonicalize(tb.denom - tb.numer, tb.denom)))


def _require_rational(*angles) -> None:
    for a in angles:
        if isinstance(a, IrrationalMultipleOfPi):
            raise IrrationalNotSupported("sup computations need rational multiples of pi")


def sup_distance(a: RationalAngle, b: RationalAngle, bits: int = DEFAULT_BITS) -> SupResult:
    """``sup_{n>=1} |cos(n a) - cos(n b)|`` as a certified, closed-form-tagged result."""
    _require_rational(a, b)
    period, alpha, beta = _root_indices(a, b)
    res = grid_sup(period, alpha, beta, bits)
    if res.value.closed_form is not None:
        return res
    return SupResult(res.value.tagged(closed_form_of(res, alpha, beta)), res.witness_n, res.period)


def sup_distance_to_triple(a: RationalAngle, bits: int = DEFAULT_BITS) -> SupResult:
    return sup_distance(a, a.times(3), bits)


class PairCase(enum.Enum):
    SAME_ORDER = "same-order"
    TRIPLE_ORDER = "triple-order"
    THIRD_ORDER = "third-order"
    FAR = "far"


@dataclass(frozen=True)
class PairReduction:
    """Order relation of a pair and the index ``w`` of its canonical representative.

    SAME_ORDER:   sup |cos(2 n pi/u) - cos(2 n w pi/u)|,      2 <= w <= u/2
    TRIPLE_ORDER: sup |cos(2 n pi/(3u)) - cos(2 n w pi/u)|,   1 <= w <= u/2
    THIRD_ORDER:  sup |cos(2 n pi/u) - cos(6 n w pi/u)|,      1 <= w <= u/6
    with ``u`` the order of the first angle.
    """

    case: PairCase
    u: int
    w: int | None = None

    def canonical_pair(self) -> tuple[RationalAngle, RationalAngle]:
        u, w = self.u, self.w
        if self.case is PairCase.SAME_ORDER:
            return canonicalize(2, u), canonicalize(2 * w, u)
        if self.case is PairCase.TRIPLE_ORDER:
            return canonicalize(2, 3 * u), canonicalize(2 * w, u)
        if self.case is PairCase.THIRD_ORDER:
            return canonicalize(2, u), canonicalize(6 * w, u)
        raise ValueError("far pairs have no canonical representative")


def _fold(x: int, modulus: int) -> int:
    x %= modulus
    return min(x, modulus - x)


def reduce_pair(a: RationalAngle, b: RationalAngle) -> PairReduction:
    if a == b:
        raise ValueError("reduce_pair needs two distinct canonical angles")
    u, v = a.order, b.order
    alpha, beta = a.root_index, b.root_index
    if u == v:
        gamma = pow(alpha, -1, u)
        return PairReduction(PairCase.SAME_ORDER, u, _fold(gamma * beta, u))
    if v == 3 * u:
        if u == 1:
            return PairReduction(PairCase.TRIPLE_ORDER, 1, 1)
        gamma = pow(beta, -1, v)
        return PairReduction(PairCase.TRIPLE_ORDER, u, _fold(alpha * gamma, u))
    if u == 3 * v:
        if v == 1:
            return PairReduction(PairCase.THIRD_ORDER, u, 1)
        gamma = pow(alpha, -1, u)
        return PairReduction(PairCase.THIRD_ORDER, u, _fold(beta * gamma, v))
    return PairReduction(PairCase.FAR, u)


# Gamma(a, m) ----------------------------------------------------------------


@dataclass(frozen=True)
class AngleSet:
    """``{b in [0, pi] : sup_n |cos(n a) - cos(n b)| <= m}``."""

    threshold_m: Threshold
    base: RationalAngle
    members: tuple[RationalAngle, ...]
    certified: bool

    def to_json(self) -> dict:
        return {
            "m": threshold_str(self.threshold_m),
            "base": str(self.base),
            "members": [str(b) for b in self.members],
            "certified": self.certified,
        }

    @classmethod
    def from_json(cls, data: dict) -> AngleSet:
        return cls(
            parse_threshold(data["m"]),
            parse_angle(data["base"]),
            tuple(parse_angle(b) for b in data["members"]),
            bool(data["certified"]),
        )


def _order_bound(m: Threshold, bits: int) -> int:
    """Largest order q with 1 + cos(pi/q) <= m possible, from pi / arccos(m - 1)."""
    mm = threshold_enclosure(m, bits)
    if mm.hi < 1:
        return 1
    if mm.lo >= 2:
        raise ValueError("threshold must be < 2")
    shifted = mm - 1
    if shifted.lo < -1:
        shifted = CertScalar(mpfr(-1), shifted.hi, bits)
    ratio = pi_enclosure(bits) / shifted.acos()
    return max(1, floor(ratio.hi))


def _check_threshold(m: Threshold, bits: int) -> None:
    mm = threshold_enclosure(m, bits)
    if mm.lo < 0:
        raise ValueError("threshold must be nonnegative")
    if mm.hi >= 2:
        raise ValueError("threshold must be < 2")


def _filter(base: RationalAngle, candidates, m: Threshold, bits: int, cap: int):
    members, certified = [], True
    for b in sorted(set(candidates)):
        ok, cert = leq_threshold(sup_distance(base, b, bits).value, m, cap)
        certified &= cert
        if ok:
            members.append(b)
    return tuple(members), certified


def gamma_zero(m: Threshold, bits: int = DEFAULT_BITS, cap: int = DEFAULT_CAP) -> AngleSet:
    """Gamma(0, m), enumerating every order up to pi / arccos(m - 1)."""
    _check_threshold(m, bits)
    bound = _order_bound(m, bits)
    candidates = [b for q in range(1, bound + 1) for b in angles_of_order(q)]
    zero = canonicalize(0, 1)
    members, certified = _filter(zero, candidates, m, bits, cap)
    return AngleSet(m, zero, members, certified)


def gamma(a: RationalAngle, m: Threshold, bits: int = DEFAULT_BITS, cap: int = DEFAULT_CAP) -> AngleSet:
    """Gamma(a, m) by lifting Gamma(0, m) through ``b = (+-c + 2 k pi) / ord(a)``."""
    _require_rational(a)
    _check_threshold(m, bits)
    u = a.order
    base = gamma_zero(m, bits, cap)
    candidates = []
    for c in base.members:
        for k in range(u):
            for sign in (1, -1):
                candidates.append(canonicalize(sign * c.numer + 2 * k * c.denom, c.denom * u))
    members, certified = _filter(a, candidates, m, bits, cap)
    return AngleSet(m, a, members, certified and base.certified)


def gamma_card_bound(m: Threshold, bits: int = DEFAULT_BITS, cap: float = 1e300) -> CertScalar | float:
    """``2 (pi / arccos(m - 1))^7``; returns ``math.inf`` once the bound exceeds ``cap``."""
    mm = threshold_enclosure(m, bits)
    if mm.lo < 1:
        raise ValueError("bound is stated for 1 <= m < 2")
    if mm.hi >= 2:
        return float("inf")
    ratio = pi_enclosure(bits) / (mm - 1).acos()
    value = ratio
    for _ in range(6):
        value = value * ratio
    value = value * 2
    if value.hi > cap:
        return float("inf")
    return value


__all__ = [
    "AngleSet",
    "IrrationalNotSupported",
    "PairCase",
    "PairReduction",
    "PeriodOverflow",
    "SupResult",
    "closed_form_of",
    "gamma",
    "gamma_card_bound",
    "gamma_zero",
    "grid_sup",
    "min_grid_sup",
    "reduce_pair",
    "sup_distance",
    "sup_distance_to_triple",
]
