"""Rational multiples of pi, their orders, and Euler totient arithmetic.

An angle ``a = pi * p / q`` is stored in canonical form: reduced to the range
``[0, pi]`` (cosine is even and 2pi-periodic, so ``cos(n a)`` is unchanged) and
with ``gcd(p, q) = 1``.  Angles serialize as the string ``"p/q"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd

__all__ = [
    "IRRATIONAL",
    "IrrationalMultipleOfPi",
    "RationalAngle",
    "SymbolicAngle",
    "angles_of_order",
    "canonicalize",
    "factorize",
    "inverse_totient",
    "order_of",
    "parse_angle",
    "totient",
]


@total_ordering
@dataclass(frozen=True)
class RationalAngle:
    """The angle ``pi * numer / denom`` with ``0 <= numer/denom <= 1``.

    Use :func:`canonicalize` to build one from arbitrary integers; the
    constructor only accepts values that are already canonical.
    """

    numer: int
    denom: int
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.denom <= 0 or self.numer < 0 or self.numer > self.denom:
            raise ValueError(f"{self.numer}/{self.denom} is not in canonical range [0, 1]")
        if gcd(self.numer, self.denom) != 1:
            raise ValueError(f"{self.numer}/{self.denom} is not reduced")
        if self.numer == 0:
            u = 1
        elif self.numer % 2 == 0:
            u = self.denom
        else:
            u = 2 * self.denom
        object.__setattr__(self, "order", u)

    @property
    def fraction(self) -> Fraction:
        """The angle divided by pi."""
        return Fraction(self.numer, self.denom)

    @property
    def root_index(self) -> int:
        """The integer ``alpha`` with ``a = 2 pi alpha / order``."""
        return self.numer * self.order // (2 * self.denom)

    def __lt__(self, other: RationalAngle) -> bool:
        if not isinstance(other, RationalAngle):
            return NotImplemented
        return self.numer * other.denom < other.numer * self.denom

    def __float__(self) -> float:
        from math import pi

        return pi * self.numer / self.denom

    def __str__(self) -> str:
        if self.denom == 1:
            return str(self.numer)
        return f"{self.numer}/{self.denom}"

    def times(self, n: int) -> RationalAngle:
        """Canonical form of ``n * a``."""
        return canonicalize(n * self.numer, self.denom)


class IrrationalMultipleOfPi:
    """Marker for an angle ``a`` with ``a / pi`` irrational.

    Carries no numeric payload; only classification results are available.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "IRRATIONAL"


IRRATIONAL = IrrationalMultipleOfPi()

SymbolicAngle = RationalAngle | IrrationalMultipleOfPi


def canonicalize(p: int, q: int) -> RationalAngle:
    """Return the angle in ``[0, pi]`` with the same cosine sequence as ``pi p/q``."""
    if q == 0:
        raise ValueError("denominator must be nonzero")
    if q < 0:
        p, q = -p, -q
    p %= 2 * q
    if p > q:
        p = 2 * q - p
    g = gcd(p, q)
    return RationalAngle(p // g, q // g)


def order_of(a: RationalAngle) -> int:
    return a.order


def parse_angle(text: str) -> RationalAngle:
    """Parse ``"p/q"`` (meaning ``pi p/q``) or a bare integer ``"p"``."""
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return canonicalize(int(p), int(q))
    return canonicalize(int(text), 1)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` by trial division."""
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=65536)
def totient(n: int) -> int:
    """Euler's totient from the prime factorization, prod p^(k-1) (p - 1)."""
    result = 1
    for p, k in factorize(n).items():
        result *= p ** (k - 1) * (p - 1)
    return result


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, k in factorize(n).items():
        out = [d * p**e for d in out for e in range(k + 1)]
    return sorted(out)


def _is_prime(n: int) -> bool:
    return n > 1 and factorize(n) == {n: 1}


def _totient_preimages(v: int, primes: list[int], start: int):
    """``n`` built from ``primes[start:]`` (each at most once as a base) with ``totient(n) == v``."""
    if v == 1:
        yield 1
    for j in range(start, len(primes)):
        p = primes[j]
        if v % (p - 1):
            continue
        w, pk = v // (p - 1), p
        while True:
            for m in _totient_preimages(w, primes, j + 1):
                yield m * pk
            if w % p:
                break
            w //= p
            pk *= p


def inverse_totient(v: int) -> set[int]:
    """All ``n`` with ``totient(n) == v``.

    Every prime ``p`` dividing such an ``n`` has ``p - 1`` dividing ``v``, so the
    search runs over prime powers of those primes only.
    """
    if v < 1:
        raise ValueError("v must be positive")
    primes = [d + 1 for d in _divisors(v) if _is_prime(d + 1)]
    return set(_totient_preimages(v, primes, 0))


@lru_cache(maxsize=4096)
def angles_of_order(u: int) -> tuple[RationalAngle, ...]:
    """All angles in ``[0, pi]`` of order exactly ``u``, ascending."""
    if u < 1:
        raise ValueError("order must be positive")
    if u == 1:
        return (RationalAngle(0, 1),)
    out = [canonicalize(2 * alpha, u) for alpha in range(1, u // 2 + 1) if gcd(alpha, u) == 1]
    return tuple(sorted(out))
