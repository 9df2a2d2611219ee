"""Outward-rounded interval arithmetic on MPFR numbers.

Every :class:`CertScalar` is a closed interval ``[lo, hi]`` whose endpoints are
MPFR floats; each operation rounds the lower endpoint toward -inf and the upper
endpoint toward +inf, so the true value is never lost.  Equalities with closed
forms (``= 3/2``, ``= sqrt(2)``) are certified numerically, as overlap of two
enclosures of width at most ``tol_width``; no symbolic proof is attempted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable

import gmpy2
from gmpy2 import mpfr, mpq

from .angles import RationalAngle, canonicalize

DEFAULT_BITS = 128
DEFAULT_CAP = 4096
DEFAULT_TOL_WIDTH = 1e-30
MIN_BITS = 32

__all__ = [
    "CertScalar",
    "ClosedForm",
    "Cmp",
    "PrecisionExhausted",
    "certified_compare",
    "cmp_certified",
    "cos_pi_rational",
    "matches_closed_form",
    "parse_threshold",
    "recognize",
    "refine",
    "sin_pi_rational",
    "threshold_enclosure",
]


class PrecisionExhausted(ArithmeticError):
    """A comparison or equality could not be decided below the precision cap."""


@lru_cache(maxsize=None)
def _down(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


def _neg(x: mpfr) -> mpfr:
    # unary minus would round to the ambient 53-bit context
    return _down(max(x.precision, 2)).minus(x)


def _mpfr_str(x: mpfr) -> str:
    mantissa, exp, _ = x.digits(10)
    sign = ""
    if mantissa.startswith("-"):
        sign, mantissa = "-", mantissa[1:]
    return f"{sign}0.{mantissa}e{exp}"


@dataclass(frozen=True)
class CertScalar:
    """Interval enclosure ``[lo, hi]`` of a real number.

    ``recompute`` optionally re-evaluates the same quantity at another
    precision; :func:`refine` uses it to tighten the enclosure.
    """

    lo: mpfr
    hi: mpfr
    precision_bits: int = DEFAULT_BITS
    closed_form: ClosedForm | None = None
    recompute: Callable[[int], CertScalar] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # construction ---------------------------------------------------------

    @classmethod
    def exact(cls, value: int | Fraction, bits: int = DEFAULT_BITS) -> CertScalar:
        """Tightest enclosure of a rational number."""
        q = mpq(value.numerator, value.denominator) if isinstance(value, Fraction) else mpq(value)
        with gmpy2.context(_down(bits)):
            lo = mpfr(q)
        with gmpy2.context(_up(bits)):
            hi = mpfr(q)
        return cls(lo, hi, bits, recompute=lambda b: cls.exact(value, b))

    @classmethod
    def hull(cls, items: list[CertScalar]) -> CertScalar:
        lo = min(x.lo for x in items)
        hi = max(x.hi for x in items)
        return cls(lo, hi, max(x.precision_bits for x in items))

    # queries --------------------------------------------------------------

    @property
    def width(self) -> mpfr:
        return _up(self.precision_bits).sub(self.hi, self.lo)

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __float__(self) -> float:
        return self.mid

    def contains(self, x) -> bool:
        if isinstance(x, CertScalar):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, Fraction):
            x = mpq(x.numerator, x.denominator)
        return self.lo <= x <= self.hi

    def overlaps(self, other: CertScalar) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def float_bounds(self) -> tuple[float, float]:
        """Outward-rounded double-precision bounds."""
        return float(_down(53).plus(self.lo)), float(_up(53).plus(self.hi))

    def tagged(self, closed_form: ClosedForm | None) -> CertScalar:
        return CertScalar(self.lo, self.hi, self.precision_bits, closed_form, self.recompute)

    def with_recompute(self, recompute: Callable[[int], CertScalar]) -> CertScalar:
        return CertScalar(self.lo, self.hi, self.precision_bits, self.closed_form, recompute)

    def intersect(self, other: CertScalar) -> CertScalar:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint enclosures of the same quantity")
        bits = max(self.precision_bits, other.precision_bits)
        return CertScalar(lo, hi, bits, self.closed_form or other.closed_form, other.recompute or self.recompute)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> CertScalar:
        if isinstance(other, CertScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return CertScalar.exact(other, self.precision_bits)
        return NotImplemented

    def __neg__(self) -> CertScalar:
        return CertScalar(_neg(self.hi), _neg(self.lo), self.precision_bits)

    def __add__(self, other) -> CertScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bits = max(self.precision_bits, other.precision_bits)
        return CertScalar(_down(bits).add(self.lo, other.lo), _up(bits).add(self.hi, other.hi), bits)

    __radd__ = __add__

    def __sub__(self, other) -> CertScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bits = max(self.precision_bits, other.precision_bits)
        return CertScalar(_down(bits).sub(self.lo, other.hi), _up(bits).sub(self.hi, other.lo), bits)

    def __rsub__(self, other) -> CertScalar:
        return self._coerce(other) - self

    def __mul__(self, other) -> CertScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        bits = max(self.precision_bits, other.precision_bits)
        d, u = _down(bits), _up(bits)
        pairs = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        return CertScalar(min(d.mul(x, y) for x, y in pairs), max(u.mul(x, y) for x, y in pairs), bits)

    __rmul__ = __mul__

    def __truediv__(self, other) -> CertScalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        bits = max(self.precision_bits, other.precision_bits)
        d, u = _down(bits), _up(bits)
        pairs = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        return CertScalar(min(d.div(x, y) for x, y in pairs), max(u.div(x, y) for x, y in pairs), bits)

    def __rtruediv__(self, other) -> CertScalar:
        return self._coerce(other) / self

    def __abs__(self) -> CertScalar:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertScalar(mpfr(0), max(_neg(self.lo), self.hi), self.precision_bits)

    def sqrt(self) -> CertScalar:
        if self.hi < 0:
            raise ValueError("sqrt of a negative enclosure")
        lo = max(self.lo, mpfr(0))
        bits = self.precision_bits
        return CertScalar(_down(bits).sqrt(lo), _up(bits).sqrt(self.hi), bits)

    def square(self) -> CertScalar:
        a = abs(self)
        bits = self.precision_bits
        return CertScalar(_down(bits).mul(a.lo, a.lo), _up(bits).mul(a.hi, a.hi), bits)

    def acos(self) -> CertScalar:
        """arccos, decreasing on [-1, 1]."""
        if self.lo < -1 or self.hi > 1:
            raise ValueError("arccos argument outside [-1, 1]")
        bits = self.precision_bits
        return CertScalar(_down(bits).acos(self.hi), _up(bits).acos(self.lo), bits)

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "lo": _mpfr_str(self.lo),
            "hi": _mpfr_str(self.hi),
            "closed_form": None if self.closed_form is None else self.closed_form.name,
            "precision_bits": self.precision_bits,
        }

    @classmethod
    def from_json(cls, data: dict) -> CertScalar:
        bits = int(data.get("precision_bits", DEFAULT_BITS))
        cf = data.get("closed_form")
        return cls(
            mpfr(data["lo"], bits),
            mpfr(data["hi"], bits),
            bits,
            None if cf is None else ClosedForm.parse(cf),
        )


def pi_enclosure(bits: int = DEFAULT_BITS) -> CertScalar:
    return CertScalar(_down(bits).const_pi(), _up(bits).const_pi(), bits)


# cos and sin at rational multiples of pi ------------------------------------


def _sqrt_int(n: int, bits: int) -> tuple[mpfr, mpfr]:
    return _down(bits).sqrt(n), _up(bits).sqrt(n)


def _cos_first_quadrant(r: int, q: int, bits: int) -> tuple[mpfr, mpfr]:
    """Bounds on cos(pi r/q) for reduced r/q in [0, 1/2]."""
    d, u = _down(bits), _up(bits)
    if r == 0:
        return mpfr(1), mpfr(1)
    if (r, q) == (1, 2):
        return mpfr(0), mpfr(0)
    if (r, q) == (1, 3):
        return mpfr("0.5"), mpfr("0.5")
    if (r, q) in ((1, 4), (1, 6)):
        lo, hi = _sqrt_int(2 if q == 4 else 3, bits)
        return d.div(lo, 2), u.div(hi, 2)
    if q == 5:
        lo, hi = _sqrt_int(5, bits)
        if r == 1:
            return d.div(d.add(lo, 1), 4), u.div(u.add(hi, 1), 4)
        return d.div(d.sub(lo, 1), 4), u.div(u.sub(hi, 1), 4)
    x_lo = d.div(d.mul(d.const_pi(), r), q)
    x_hi = u.div(u.mul(u.const_pi(), r), q)
    # cos is decreasing on [0, pi/2] and the argument never leaves [0, pi)
    lo = max(d.cos(x_hi), mpfr(0))
    hi = min(u.cos(x_lo), mpfr(1))
    return lo, hi


@lru_cache(maxsize=1 << 18)
def cos_pi_rational(p: int, q: int, bits: int = DEFAULT_BITS) -> CertScalar:
    """Enclosure of cos(pi p/q) of width at most 2^(4 - bits)."""
    if q <= 0:
        raise ValueError("q must be positive")
    if bits < MIN_BITS:
        raise ValueError(f"precision_bits must be at least {MIN_BITS}")
    r = p % (2 * q)
    if r > q:
        r = 2 * q - r
    g = gcd(r, q)
    r, d = r // g, q // g
    negate = 2 * r > d
    if negate:
        r = d - r
    lo, hi = _cos_first_quadrant(r, d, bits)
    if negate:
        lo, hi = _neg(hi), _neg(lo)
    return CertScalar(lo, hi, bits, recompute=lambda b: cos_pi_rational(p, q, b))


def sin_pi_rational(p: int, q: int, bits: int = DEFAULT_BITS) -> CertScalar:
    """sin(pi p/q) = cos(pi/2 - pi p/q)."""
    return cos_pi_rational(q - 2 * p, 2 * q, bits)


def cos_angle(a: RationalAngle, bits: int = DEFAULT_BITS) -> CertScalar:
    return cos_pi_rational(a.numer, a.denom, bits)


# comparisons and refinement -------------------------------------------------


class Cmp(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    UNKNOWN = "unknown"


def cmp_certified(x: CertScalar, y: CertScalar) -> Cmp:
    if x.hi < y.lo:
        return Cmp.LESS
    if x.lo > y.hi:
        return Cmp.GREATER
    return Cmp.UNKNOWN


def refine(
    recompute: Callable[[int], CertScalar] | CertScalar,
    target_width: float,
    start_bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
) -> CertScalar:
    """Re-evaluate at doubling precision until the width is at most ``target_width``.

    Successive enclosures are intersected, so the result never widens.
    """
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    if isinstance(recompute, CertScalar):
        current = recompute
        if current.width <= target_width:
            return current
        if current.recompute is None:
            raise PrecisionExhausted("enclosure has no recompute handle and is too wide")
        fn = current.recompute
        bits = max(start_bits, current.precision_bits)
    else:
        fn = recompute
        bits = start_bits
        current = fn(bits)
        if current.width <= target_width:
            return current
    while current.width > target_width:
        if bits >= cap:
            raise PrecisionExhausted(f"width {float(current.width):.3g} > {target_width:.3g} at the {cap}-bit cap")
        bits = min(2 * bits, cap)
        current = current.intersect(fn(bits))
    return current.with_recompute(fn)


def certified_compare(x: CertScalar, y: CertScalar, cap: int = DEFAULT_CAP) -> Cmp:
    """Like :func:`cmp_certified` but refines both sides; never returns UNKNOWN."""
    bits = max(x.precision_bits, y.precision_bits)
    while True:
        c = cmp_certified(x, y)
        if c is not Cmp.UNKNOWN:
            return c
        if bits >= cap or x.recompute is None or y.recompute is None:
            raise PrecisionExhausted(f"cannot separate [{x.lo}, {x.hi}] from [{y.lo}, {y.hi}] below {cap} bits")
        bits = min(2 * bits, cap)
        x = x.intersect(x.recompute(bits))
        y = y.intersect(y.recompute(bits))


# closed forms --------------------------------------------------------------

_NAMED = {
    "zero": 0,
    "two": 2,
    "three-halves": Fraction(3, 2),
}


@dataclass(frozen=True)
class ClosedForm:
    """A tagged exact constant.

    ``kind`` is one of ``zero``, ``two``, ``three-halves``, ``sqrt2``,
    ``sqrt5-over-2``, ``8-over-3sqrt3`` or ``cos-sum``; a ``cos-sum`` denotes
    ``sum(sign * cos(angle))`` over ``terms``.
    """

    kind: str
    terms: tuple[tuple[int, RationalAngle], ...] = ()

    @classmethod
    def cos_sum(cls, *terms: tuple[int, RationalAngle]) -> ClosedForm:
        norm = tuple(sorted(((1 if s > 0 else -1), a) for s, a in terms))
        return cls("cos-sum", norm)

    @property
    def name(self) -> str:
        if self.kind != "cos-sum":
            return self.kind
        parts = []
        for sign, a in self.terms:
            parts.append(("+" if sign > 0 else "-") + f"cos({a})")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> ClosedForm:
        text = text.strip()
        if text in _NAMED or text in ("sqrt2", "sqrt5-over-2", "8-over-3sqrt3"):
            return cls(text)
        if "cos(" not in text:
            raise ValueError(f"unknown closed form {text!r}")
        terms = []
        i = 0
        while i < len(text):
            sign = 1
            if text[i] in "+-":
                sign = -1 if text[i] == "-" else 1
                i += 1
            if not text.startswith("cos(", i):
                raise ValueError(f"malformed closed form {text!r}")
            j = text.index(")", i)
            num, _, den = text[i + 4 : j].partition("/")
            terms.append((sign, canonicalize(int(num), int(den or 1))))
            i = j + 1
        return cls.cos_sum(*terms)

    def enclose(self, bits: int = DEFAULT_BITS) -> CertScalar:
        if self.kind in _NAMED:
            value = CertScalar.exact(_NAMED[self.kind], bits)
        elif self.kind == "sqrt2":
            value = CertScalar.exact(2, bits).sqrt()
        elif self.kind == "sqrt5-over-2":
            value = CertScalar.exact(5, bits).sqrt() / 2
        elif self.kind == "8-over-3sqrt3":
            three = CertScalar.exact(3, bits)
            value = CertScalar.exact(8, bits) / (three * three.sqrt())
        elif self.kind == "cos-sum":
            value = CertScalar.exact(0, bits)
            for sign, a in self.terms:
                c = cos_angle(a, bits)
                value = value + c if sign > 0 else value - c
        else:
            raise ValueError(f"unknown closed form kind {self.kind!r}")
        return value.tagged(self).with_recompute(self.enclose)


ZERO = ClosedForm("zero")
TWO = ClosedForm("two")
THREE_HALVES = ClosedForm("three-halves")
SQRT2 = ClosedForm("sqrt2")
SQRT5_OVER_2 = ClosedForm("sqrt5-over-2")
EIGHT_OVER_3SQRT3 = ClosedForm("8-over-3sqrt3")
COS_2_11_PLUS_COS_3_11 = ClosedForm.cos_sum((1, canonicalize(2, 11)), (1, canonicalize(3, 11)))

NAMED_CONSTANTS = (
    ZERO,
    SQRT5_OVER_2,
    SQRT2,
    COS_2_11_PLUS_COS_3_11,
    THREE_HALVES,
    EIGHT_OVER_3SQRT3,
    TWO,
)

_TOKENS = {
    "zero": ZERO,
    "two": TWO,
    "three-halves": THREE_HALVES,
    "sqrt2": SQRT2,
    "sqrt5-over-2": SQRT5_OVER_2,
    "8-over-3sqrt3": EIGHT_OVER_3SQRT3,
}


def matches_closed_form(
    x: CertScalar,
    c: ClosedForm,
    tol_width: float = DEFAULT_TOL_WIDTH,
    cap: int = DEFAULT_CAP,
) -> bool:
    """Numerically certify ``x == c``: both enclosures refined below ``tol_width`` and overlapping.

    Returns False as soon as the enclosures are disjoint.
    """
    if tol_width <= 0:
        raise ValueError("tol_width must be positive")
    bits = max(x.precision_bits, DEFAULT_BITS)
    ref = c.enclose(bits)
    if not x.overlaps(ref):
        return False
    x = refine(x, tol_width, start_bits=bits, cap=cap)
    ref = refine(ref, tol_width, start_bits=bits, cap=cap)
    return x.overlaps(ref)


def recognize(
    x: CertScalar,
    candidates: tuple[ClosedForm, ...] = NAMED_CONSTANTS,
    tol_width: float = DEFAULT_TOL_WIDTH,
) -> ClosedForm | None:
    for c in candidates:
        if matches_closed_form(x, c, tol_width):
            return c
    return None


# thresholds ----------------------------------------------------------------

Threshold = Fraction | ClosedForm


def parse_threshold(text: str | float | Fraction | ClosedForm) -> Threshold:
    """Decimal string (exact) or one of the tokens ``three-halves``, ``sqrt2``, ..."""
    if isinstance(text, (ClosedForm, Fraction)):
        return text
    if isinstance(text, (int, float)):
        return Fraction(str(text))
    token = text.strip().lower()
    if token in _TOKENS:
        return _TOKENS[token]
    try:
        return Fraction(token)
    except ValueError:
        raise ValueError(f"threshold {text!r} is neither a decimal nor a known token") from None


def threshold_enclosure(m: Threshold, bits: int = DEFAULT_BITS) -> CertScalar:
    if isinstance(m, ClosedForm):
        return m.enclose(bits)
    return CertScalar.exact(Fraction(m), bits)


def threshold_str(m: Threshold) -> str:
    if isinstance(m, ClosedForm):
        return m.name
    return str(float(m)) if Fraction(float(m)) == m else str(m)


def leq_threshold(x: CertScalar, m: Threshold, cap: int = DEFAULT_CAP) -> tuple[bool, bool]:
    """Decide ``x <= m``; returns ``(answer, certified)``.

    Overlapping enclosures are first refined.  At the boundary a closed-form
    threshold is decided by closed-form matching; a decimal threshold that
    still overlaps at ``DEFAULT_TOL_WIDTH`` is reported as ``(True, False)``.
    """
    bits = max(x.precision_bits, DEFAULT_BITS)
    mm = threshold_enclosure(m, bits)
    c = cmp_certified(x, mm)
    if x.hi <= mm.lo:
        return True, True
    if c is Cmp.GREATER:
        return False, True
    if isinstance(m, ClosedForm) and matches_closed_form(x, m, cap=cap):
        return True, True
    if not isinstance(m, ClosedForm) and x.closed_form is not None and x.closed_form.kind in _NAMED:
        return _NAMED[x.closed_form.kind] <= m, True
    try:
        x = refine(x, DEFAULT_TOL_WIDTH, start_bits=bits, cap=cap)
        mm = refine(mm, DEFAULT_TOL_WIDTH, start_bits=bits, cap=cap)
    except PrecisionExhausted:
        return True, False
    if x.hi <= mm.lo:
        return True, True
    if x.lo > mm.hi:
        return False, True
    return True, False
