"""Certified global suprema of ``|cos(p x) - cos(q x)|`` over the real line.

The function is even and 2pi-periodic, so the search runs over ``x = pi t`` with
``t in [0, 1]``.  Boxes are dyadic intervals in ``t``; on a box with centre
``c`` and half-width ``h``

    |F(x)| <= |F(c)| + |F'(c)| h + (p^2 + q^2) h^2 / 2,

which is the second-order Taylor-Lagrange bound with the global bound
``|F''| <= p^2 + q^2``.  Boxes are processed best-first (largest upper bound,
ties by left endpoint) until the global upper bound is within ``target_width``
of the best centre value.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd

from gmpy2 import mpfr

from .certified import (
    DEFAULT_BITS,
    EIGHT_OVER_3SQRT3,
    TWO,
    ZERO,
    CertScalar,
    PrecisionExhausted,
    Threshold,
    cos_pi_rational,
    pi_enclosure,
    sin_pi_rational,
    threshold_enclosure,
)

DEFAULT_WIDTH = 1e-12
MAX_DEPTH = 40
# strict inner margin applied to exceedance half-lengths
_SHRINK = Fraction(2**20 - 1, 2**20)


class ThresholdAboveSup(ValueError):
    """The threshold is not certifiably below the supremum."""


@dataclass(frozen=True)
class TrigSupProblem:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive")

    @property
    def second_derivative_bound(self) -> int:
        return self.p * self.p + self.q * self.q

    @property
    def gcd(self) -> int:
        return gcd(self.p, self.q)


@dataclass(frozen=True)
class RealSupResult:
    """Enclosure of ``sup_x |cos(p x) - cos(q x)|``.

    ``witness_t`` is the box centre with the best certified lower bound; the
    witness point is ``x = pi * witness_t``.  ``witness_slope`` bounds
    ``|F'|`` there.
    """

    p: int
    q: int
    value: CertScalar
    witness_t: Fraction
    witness_value: CertScalar
    witness_slope: CertScalar
    boxes: int

    @property
    def closed_form(self):
        return self.value.closed_form

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "value": self.value.to_json(),
            "closed_form": None if self.closed_form is None else self.closed_form.name,
            "witness_x_over_pi": str(self.witness_t),
            "boxes": self.boxes,
        }


def _eval(p: int, q: int, num: int, den: int, bits: int) -> tuple[CertScalar, CertScalar]:
    """``|F(pi num/den)|`` and ``|F'(pi num/den)|``."""
    f = cos_pi_rational(p * num, den, bits) - cos_pi_rational(q * num, den, bits)
    d = sin_pi_rational(q * num, den, bits) * q - sin_pi_rational(p * num, den, bits) * p
    return abs(f), abs(d)


def _structural_form(p: int, q: int):
    """Closed form of the supremum when it is classical."""
    g = gcd(p, q)
    p, q = sorted((p // g, q // g))
    if p == q:
        return ZERO
    if (p * q) % 2 == 0:
        return TWO
    if q == 3 * p:
        return EIGHT_OVER_3SQRT3
    return None


def trig_diff_sup(
    p: int,
    q: int,
    target_width: float = DEFAULT_WIDTH,
    bits: int = DEFAULT_BITS,
    max_depth: int = MAX_DEPTH,
) -> RealSupResult:
    """Branch-and-bound enclosure of ``sup_x |cos(p x) - cos(q x)|`` of width <= ``target_width``."""
    prob = TrigSupProblem(p, q)
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    M = prob.second_derivative_bound
    pi = pi_enclosure(bits)
    if p == q:
        zero = CertScalar.exact(0, bits)
        return RealSupResult(p, q, zero.tagged(ZERO), Fraction(0), zero, zero, 0)

    best_lo = CertScalar.exact(0, bits)
    best = (Fraction(0), *_eval(p, q, 0, 1, bits))
    for num in (0, 1):
        fv, dv = _eval(p, q, num, 1, bits)
        if fv.lo > best_lo.lo:
            best_lo, best = fv, (Fraction(num), fv, dv)

    def upper(fv: CertScalar, dv: CertScalar, depth: int) -> CertScalar:
        h = pi / (2 ** (depth + 1))
        return fv + dv * h + h.square() * M / 2

    # heap entries: (-upper, left endpoint, num, depth) for box [num/2^depth, (num+1)/2^depth]
    heap: list = []
    boxes = 0

    def push(num: int, depth: int):
        nonlocal best_lo, best, boxes
        boxes += 1
        c_num, c_den = 2 * num + 1, 2 ** (depth + 1)
        fv, dv = _eval(p, q, c_num, c_den, bits)
        if fv.lo > best_lo.lo:
            best_lo, best = fv, (Fraction(c_num, c_den), fv, dv)
        ub = upper(fv, dv, depth).hi
        heapq.heappush(heap, (-ub, Fraction(num, 2**depth), num, depth))

    push(0, 0)
    frozen_hi = None
    while heap:
        neg_ub, _, num, depth = heap[0]
        top = -neg_ub
        if frozen_hi is not None:
            top = max(top, frozen_hi)
        if float(top - best_lo.lo) <= target_width:
            break
        heapq.heappop(heap)
        if -neg_ub < best_lo.lo:
            continue
        if depth >= max_depth:
            frozen_hi = -neg_ub if frozen_hi is None else max(frozen_hi, -neg_ub)
            if not heap:
                break
            continue
        push(2 * num, depth + 1)
        push(2 * num + 1, depth + 1)

    hi = max(-heap[0][0] if heap else best_lo.hi, frozen_hi or best_lo.hi, best_lo.hi)
    hi = min(hi, mpfr(2))
    value = CertScalar(best_lo.lo, hi, bits)
    if float(value.width) > target_width:
        raise PrecisionExhausted(f"branch and bound for ({p}, {q}) stalled at width {float(value.width):.3g}")
    form = _structural_form(p, q)
    if form is not None:
        exact = form.enclose(bits)
        if value.overlaps(exact):
            value = value.tagged(form)
    t, fv, dv = best
    return RealSupResult(p, q, value, t, fv, dv, boxes)


# exceedance and order thresholds ------------------------------------------------


def _half_length(res: RealSupResult, m: Threshold, bits: int) -> CertScalar:
    mm = threshold_enclosure(m, bits)
    theta_c = res.witness_value
    if mm.hi >= theta_c.lo:
        raise ThresholdAboveSup(f"m is not certifiably below sup |cos({res.p}x) - cos({res.q}x)|")
    M = res.p**2 + res.q**2
    D = res.witness_slope
    # largest l with theta_c - D l - M l^2 / 2 > m
    disc = D.square() + (CertScalar(theta_c.lo, theta_c.lo, bits) - mm) * (2 * M)
    l = (disc.sqrt() - D) / M
    lo = CertScalar(l.lo, l.lo, bits) * _SHRINK
    return CertScalar(lo.lo, lo.lo, bits)


def exceedance_interval(
    p: int, q: int, m: Threshold, bits: int = DEFAULT_BITS, target_width: float = DEFAULT_WIDTH
) -> CertScalar:
    """Length of an interval around the sup witness on which ``|cos(px) - cos(qx)| > m``."""
    res = trig_diff_sup(p, q, target_width, bits)
    return _half_length(res, m, bits) * 2


def threshold_from_half_length(l: CertScalar, bits: int = DEFAULT_BITS) -> int:
    """Smallest integer ``u > pi / l`` (certified)."""
    ratio = pi_enclosure(bits) / CertScalar(l.lo, l.lo, bits)
    return int(floor(ratio.hi)) + 1


def order_threshold(p: int, q: int, m: Threshold, bits: int = DEFAULT_BITS, target_width: float = DEFAULT_WIDTH) -> int:
    """A ``u`` such that every angle ``a`` of order at least ``u`` has
    ``sup_n |cos(n p a) - cos(n q a)| > m``.

    The multiples of ``2 pi / u`` meet every interval longer than ``2 pi / u``.
    """
    res = trig_diff_sup(p, q, target_width, bits)
    return threshold_from_half_length(_half_length(res, m, bits), bits)


# reference tables ------------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceRow:
    """A reference row: theta as printed, delta bound, l and u."""

    s: int
    theta: str
    delta: int
    l: float
    u: int


F_REFERENCE = (
    ReferenceRow(2, "2", 5, 0.4472, 8),
    ReferenceRow(4, "2", 17, 0.2425, 13),
    ReferenceRow(5, ">1.8", 26, 0.1519, 21),
    ReferenceRow(6, "2", 37, 0.1644, 20),
)

G_REFERENCE = (
    ReferenceRow(2, "2", 13, 0.2774, 12),
    ReferenceRow(4, "2", 23, 0.2085, 16),
    ReferenceRow(5, ">1.85", 34, 0.1435, 22),
    ReferenceRow(7, ">1.91", 58, 0.1189, 27),
    ReferenceRow(8, "2", 73, 0.1170, 27),
    ReferenceRow(10, "2", 109, 0.0958, 33),
    ReferenceRow(11, ">1.91", 130, 0.0794, 40),
    ReferenceRow(13, ">1.97", 178, 0.0727, 44),
    ReferenceRow(14, "2", 205, 0.0698, 45),
    ReferenceRow(16, "2", 275, 0.0603, 53),
    ReferenceRow(17, ">1.97", 298, 0.0562, 56),
    ReferenceRow(19, ">1.96", 390, 0.0486, 65),
    ReferenceRow(20, "2", 409, 0.0494, 64),
)


@dataclass(frozen=True)
class TaylorRow:
    family: str
    s: int
    p: int
    q: int
    theta_s: CertScalar
    delta_s: CertScalar
    l_s: CertScalar
    u_s: int
    reference: ReferenceRow | None = field(default=None, compare=False)

    @property
    def within_reference(self) -> bool:
        return self.reference is None or self.u_s <= self.reference.u

    def csv_fields(self) -> list[str]:
        return [
            self.family,
            str(self.s),
            f"{self.theta_s.mid:.6f}",
            str(int(self.delta_s.lo)),
            f"{self.l_s.mid:.6f}",
            str(self.u_s),
            "" if self.reference is None else str(self.reference.u),
        ]

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "s": self.s,
            "theta_s": self.theta_s.to_json(),
            "delta_s": int(self.delta_s.lo),
            "l_s": self.l_s.to_json(),
            "u_s": self.u_s,
            "reference_u_s": None if self.reference is None else self.reference.u,
        }


CSV_HEADER = ["family", "s", "theta_s", "delta_s", "l_s", "u_s", "reference_u_s"]


def taylor_row(family: str, s: int, m: Threshold = Fraction(3, 2), bits: int = DEFAULT_BITS) -> TaylorRow:
    """Row for ``f_s = cos x - cos s x`` (family ``f``) or ``g_s = cos 3x - cos s x`` (``g``)."""
    if family not in ("f", "g"):
        raise ValueError("family must be 'f' or 'g'")
    p = 1 if family == "f" else 3
    res = trig_diff_sup(p, s, DEFAULT_WIDTH, bits)
    l = _half_length(res, m, bits)
    refs = {r.s: r for r in (F_REFERENCE if family == "f" else G_REFERENCE)}
    return TaylorRow(
        family,
        s,
        p,
        s,
        res.value,
        CertScalar.exact(p * p + s * s, bits),
        l,
        threshold_from_half_length(l, bits),
        refs.get(s),
    )


def taylor_tables(bits: int = DEFAULT_BITS) -> tuple[list[TaylorRow], list[TaylorRow]]:
    f_rows = [taylor_row("f", r.s, bits=bits) for r in F_REFERENCE]
    g_rows = [taylor_row("g", r.s, bits=bits) for r in G_REFERENCE]
    return f_rows, g_rows


__all__ = [
    "CSV_HEADER",
    "F_REFERENCE",
    "G_REFERENCE",
    "RealSupResult",
    "ReferenceRow",
    "TaylorRow",
    "ThresholdAboveSup",
    "TrigSupProblem",
    "exceedance_interval",
    "order_threshold",
    "taylor_row",
    "taylor_tables",
    "threshold_from_half_length",
    "trig_diff_sup",
]
