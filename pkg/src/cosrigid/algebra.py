"""Finite-dimensional cosine sequences ``C(n) = sum_j cos(n b_j) p_j``.

``p_j`` are pairwise orthogonal idempotent matrices summing to the identity and
``b_j`` distinct rational angles.  Such a sequence satisfies the d'Alembert
identity ``C(m+n) + C(m-n) = 2 C(m) C(n)`` and ``C(n) = T_n(C(1))`` with
``T_n`` the Chebyshev polynomial, which is what :func:`decompose` inverts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import acos, lcm, pi
from typing import Callable, Sequence

import numpy as np

from .angles import IrrationalMultipleOfPi, RationalAngle, angles_of_order, canonicalize
from .certified import THREE_HALVES, CertScalar, matches_closed_form
from .cyclic import MAX_PERIOD, IrrationalNotSupported, PeriodOverflow, SupResult, sup_distance
from .kconst import k_of_order, theta_detail

DEFAULT_TOL = 1e-12
DEFAULT_SEPARATION = 1e-6


class InvalidIdempotents(ValueError):
    """The idempotent family is not orthogonal, complete or idempotent within tolerance."""


class NotCosineGenerator(ValueError):
    """``C(1)`` has spectrum outside ``[-1, 1]``, clustered eigenvalues or a bad eigenbasis."""


class NonRationalSpectrum(NotCosineGenerator):
    """An eigenvalue is not the cosine of a rational multiple of pi."""


def _cos_multiple(b: RationalAngle, n: int) -> float:
    """``cos(n b)`` with the argument reduced exactly before rounding."""
    r = (abs(n) * b.numer) % (2 * b.denom)
    return float(np.cos(pi * r / b.denom))


@dataclass(frozen=True, eq=False)
class SpectralCosine:
    dim: int
    parts: tuple[tuple[RationalAngle, np.ndarray], ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def angles(self) -> tuple[RationalAngle, ...]:
        return tuple(b for b, _ in self.parts)

    @property
    def idempotents(self) -> tuple[np.ndarray, ...]:
        return tuple(p for _, p in self.parts)

    @property
    def is_scalar(self) -> bool:
        return len(self.parts) == 1

    def __call__(self, n: int) -> np.ndarray:
        key = abs(n)
        out = self._cache.get(key)
        if out is None:
            out = sum(_cos_multiple(b, n) * p for b, p in self.parts)
            out = np.asarray(out, dtype=complex)
            if len(self._cache) < 4096:
                self._cache[key] = out
        return out

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return all(np.allclose(p, p.conj().T, atol=tol) for p in self.idempotents)

    def period(self) -> int:
        return lcm(*(b.order for b in self.angles))


def validate_idempotents(idems: Sequence[np.ndarray], tol: float = DEFAULT_TOL) -> None:
    if not idems:
        raise InvalidIdempotents("empty family")
    dim = idems[0].shape[0]
    eye = np.eye(dim)
    scale = max(1.0, max(np.linalg.norm(p, 2) for p in idems))
    t = tol * scale * scale
    if np.linalg.norm(sum(idems) - eye, 2) > t:
        raise InvalidIdempotents("idempotents do not sum to the identity")
    for i, p in enumerate(idems):
        if p.shape != (dim, dim):
            raise InvalidIdempotents("shape mismatch")
        if np.linalg.norm(p @ p - p, 2) > t:
            raise InvalidIdempotents(f"part {i} is not idempotent")
        for j in range(i + 1, len(idems)):
            q = idems[j]
            if np.linalg.norm(p @ q, 2) > t or np.linalg.norm(q @ p, 2) > t:
                raise InvalidIdempotents(f"parts {i} and {j} are not orthogonal")


def build(parts: Sequence[tuple[RationalAngle, np.ndarray]], tol: float = DEFAULT_TOL) -> SpectralCosine:
    """Evaluator ``C(n) = sum_j cos(n b_j) p_j`` after validating the idempotents."""
    angles = [b for b, _ in parts]
    if len(set(angles)) != len(angles):
        raise InvalidIdempotents("angles must be pairwise distinct")
    idems = [np.atleast_2d(np.asarray(p, dtype=complex)) for _, p in parts]
    validate_idempotents(idems, tol)
    return SpectralCosine(idems[0].shape[0], tuple(zip(angles, idems)))


# random instances ---------------------------------------------------------------


def random_similarity(dim: int, rng: np.random.Generator, kappa_max: float = 100.0) -> tuple[np.ndarray, np.ndarray]:
    """``(S, S^-1)`` with condition number at most ``kappa_max``."""
    if kappa_max < 1:
        raise ValueError("kappa_max must be >= 1")
    q1, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    q2, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    s = np.exp(rng.uniform(0.0, np.log(kappa_max), size=dim))
    s[0] = 1.0
    S = q1 @ np.diag(s) @ q2
    S_inv = q2.T @ np.diag(1.0 / s) @ q1.T
    return S, S_inv


def coordinate_projections(ranks: Sequence[int]) -> list[np.ndarray]:
    """Diagonal 0/1 projections onto consecutive coordinate blocks of the given sizes."""
    dim = sum(ranks)
    out, start = [], 0
    for r in ranks:
        p = np.zeros((dim, dim))
        p[start : start + r, start : start + r] = np.eye(r)
        out.append(p)
        start += r
    return out


def conjugated_projections(
    ranks: Sequence[int], rng: np.random.Generator | None = None, kappa_max: float = 100.0
) -> list[np.ndarray]:
    """Coordinate projections conjugated by a random similarity (identity when ``rng`` is None)."""
    projs = coordinate_projections(ranks)
    if rng is None:
        return projs
    S, S_inv = random_similarity(sum(ranks), rng, kappa_max)
    return [S @ p @ S_inv for p in projs]


def random_angles(k: int, rng: np.random.Generator, max_order: int = 30) -> list[RationalAngle]:
    pool = [b for u in range(1, max_order + 1) for b in angles_of_order(u)]
    idx = rng.choice(len(pool), size=k, replace=False)
    return [pool[i] for i in sorted(idx)]


def random_spectral_cosine(
    rng: np.random.Generator,
    max_dim: int = 6,
    min_parts: int = 1,
    conjugate: bool = True,
    max_order: int = 30,
    kappa_max: float = 100.0,
) -> SpectralCosine:
    dim = int(rng.integers(max(1, min_parts), max_dim + 1))
    k = int(rng.integers(min_parts, dim + 1))
    cuts = sorted(rng.choice(np.arange(1, dim), size=k - 1, replace=False).tolist()) if k > 1 else []
    ranks = [b - a for a, b in zip([0] + cuts, cuts + [dim])]
    idems = conjugated_projections(ranks, rng if conjugate else None, kappa_max)
    return build(list(zip(random_angles(k, rng, max_order), idems)), tol=1e-9)


# d'Alembert -------------------------------------------------------------------------


def dalembert_residual(C: Callable[[int], np.ndarray], horizon: int) -> float:
    """``max_{|m|,|n| <= horizon} ||C(m+n) + C(m-n) - 2 C(m) C(n)||``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    table = np.stack([np.asarray(C(k), dtype=complex) for k in range(-2 * horizon, 2 * horizon + 1)])
    idx = np.arange(-horizon, horizon + 1)
    off = 2 * horizon
    if not table.imag.any():
        table = table.real
    M, N = idx[:, None], idx[None, :]
    r = table[M + N + off] + table[M - N + off] - 2 * table[M + off] @ table[N + off]
    # spectral norm^2 = largest eigenvalue of r^H r
    gram = np.swapaxes(r.conj(), -1, -2) @ r
    return float(np.sqrt(max(0.0, np.max(np.linalg.eigvalsh(gram)))))


def check_dalembert(C: Callable[[int], np.ndarray], horizon: int, tol: float = 1e-10) -> bool:
    return dalembert_residual(C, horizon) <= tol


@dataclass(frozen=True)
class Perturbed:
    """``C`` with ``noise`` added to ``C(n)`` for ``|n| == at``."""

    base: Callable[[int], np.ndarray]
    at: int
    noise: np.ndarray

    def __call__(self, n: int) -> np.ndarray:
        out = self.base(n)
        return out + self.noise if abs(n) == self.at else out


# decomposition -----------------------------------------------------------------------


def chebyshev_matrix(x: np.ndarray, n: int) -> np.ndarray:
    """``T_n(x)`` by the three-term recurrence."""
    n = abs(n)
    eye = np.eye(x.shape[0], dtype=complex)
    if n == 0:
        return eye
    prev, cur = eye, np.asarray(x, dtype=complex)
    for _ in range(n - 1):
        prev, cur = cur, 2 * x @ cur - prev
    return cur


def rational_angle_of(lam: float, max_denominator: int = 1000, tol: float = 1e-8) -> RationalAngle:
    """The rational angle ``b`` with ``cos(b) = lam``, recognised from ``arccos(lam) / pi``."""
    t = Fraction(acos(min(1.0, max(-1.0, lam))) / pi).limit_denominator(max_denominator)
    b = canonicalize(t.numerator, t.denominator)
    if abs(np.cos(float(b)) - lam) > tol:
        raise NonRationalSpectrum(f"eigenvalue {lam!r} is not cos of a rational multiple of pi")
    return b


def decompose(
    C1: np.ndarray,
    separation: float = DEFAULT_SEPARATION,
    tol: float = 1e-9,
    max_cond: float = 1e8,
    max_denominator: int = 1000,
) -> SpectralCosine:
    """Spectral projections of ``C(1)`` and the angles ``arccos`` of its eigenvalues."""
    C1 = np.atleast_2d(np.asarray(C1, dtype=complex))
    dim = C1.shape[0]
    lam, V = np.linalg.eig(C1)
    if np.max(np.abs(lam.imag)) > tol:
        raise NotCosineGenerator("spectrum is not real")
    lam = lam.real
    if np.max(np.abs(lam)) > 1 + tol:
        raise NotCosineGenerator("spectrum leaves [-1, 1]")
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > max_cond:
        raise NotCosineGenerator(f"eigenbasis condition number {cond:.3g} exceeds {max_cond:.3g}")
    order = np.argsort(lam)
    clusters: list[list[int]] = []
    for i in order:
        if clusters and lam[i] - lam[clusters[-1][-1]] <= tol:
            clusters[-1].append(int(i))
        elif clusters and lam[i] - lam[clusters[-1][-1]] < separation:
            raise NotCosineGenerator("eigenvalues closer than the separation threshold")
        else:
            clusters.append([int(i)])
    V_inv = np.linalg.inv(V)
    parts = []
    for idx in clusters:
        p = V[:, idx] @ V_inv[idx, :]
        b = rational_angle_of(float(np.mean(lam[idx])), max_denominator)
        parts.append((b, p))
    parts.sort(key=lambda bp: bp[0])
    return build(parts, tol=max(1e-9, 10 * dim * cond * np.finfo(float).eps))


# sup distance to a scalar family ------------------------------------------------------


def sup_distance_to_scalar(C: SpectralCosine, a: RationalAngle, tol: float = DEFAULT_TOL) -> SupResult:
    """``max_{1<=n<=U} ||C(n) - cos(n a) I||`` (spectral norm), ``U`` the joint period.

    For orthogonal projections the norm is ``max_j |cos(n b_j) - cos(n a)|`` and the
    certified cyclic sups are used (each over its own period, so no joint
    enumeration); otherwise singular values are computed in double precision
    over the joint period and the result is flagged as not certified.
    """
    if isinstance(a, IrrationalMultipleOfPi):
        raise IrrationalNotSupported("sup computations need rational multiples of pi")
    period = lcm(a.order, C.period())
    if C.is_hermitian(tol):
        results = [sup_distance(b, a) for b in C.angles]
        best = max(results, key=lambda r: r.value.hi)
        lo = max(r.value.lo for r in results)
        value = CertScalar(lo, best.value.hi, best.value.precision_bits, best.value.closed_form, best.value.recompute)
        witness = min(r.witness_n for r in results if r.value.hi >= lo)
        return SupResult(value, witness, period)
    if period > MAX_PERIOD:
        raise PeriodOverflow(f"period {period} exceeds {MAX_PERIOD}")
    eye = np.eye(C.dim)
    best_v, best_n = -1.0, 1
    for n in range(1, period + 1):
        v = float(np.linalg.norm(C(n) - _cos_multiple(a, n) * eye, 2))
        if v > best_v + 1e-12:
            best_v, best_n = v, n
    err = 1e-9 * max(1.0, max(np.linalg.norm(p, 2) for p in C.idempotents))
    value = CertScalar.exact(Fraction(best_v), 128)
    value = CertScalar((value - Fraction(err)).lo, (value + Fraction(err)).hi, 128)
    return SupResult(value, best_n, period, certified=False)


# the (Z/3Z)^N family -------------------------------------------------------------------


@dataclass(frozen=True)
class TernaryTorusFamily:
    """``C(g) = diag(cos(2 pi g_m / 3))`` for ``g in (Z/3Z)^N``."""

    N: int

    def __post_init__(self):
        if not 1 <= self.N <= 20:
            raise ValueError("N must be in [1, 20]")

    def __call__(self, g: Sequence[int]) -> np.ndarray:
        return np.diag([-0.5 if gm % 3 else 1.0 for gm in g])

    def elements(self):
        return product(range(3), repeat=self.N)

    def sup_distance_to_identity(self, exhaustive_limit: int = 10) -> CertScalar:
        """``sup_g ||I - C(g)||`` as an exact enclosure tagged three-halves when it is 3/2.

        Each entry of ``I - C(g)`` is ``1 - cos(2 pi g_m / 3)`` in ``{0, 3/2}`` exactly.
        For ``N <= exhaustive_limit`` all ``3^N`` elements are scanned; beyond that the
        coordinate-wise maximum is used (the norm of a diagonal is its largest entry).
        """

        def entry(gm: int) -> Fraction:
            return Fraction(0) if gm % 3 == 0 else Fraction(3, 2)

        if self.N <= exhaustive_limit:
            best = max(max(entry(gm) for gm in g) for g in self.elements())
        else:
            best = max(entry(gm) for gm in range(3))
        value = CertScalar.exact(best)
        return value.tagged(THREE_HALVES) if best == Fraction(3, 2) else value

    def idempotent_for(self, coords: Sequence[int]) -> np.ndarray:
        """``(2/3) (C(0) - C(g_S))`` for ``g_S`` the indicator of ``coords``."""
        g = [1 if m in set(coords) else 0 for m in range(self.N)]
        return (2.0 / 3.0) * (self(tuple([0] * self.N)) - self(g))

    def coordinate_idempotents(self) -> list[np.ndarray]:
        return [self.idempotent_for([m]) for m in range(self.N)]

    def separates_coordinates(self) -> bool:
        """The recovered idempotents are exactly the N coordinate units summing to I."""
        idems = self.coordinate_idempotents()
        eye = np.eye(self.N)
        units = all(np.array_equal(p, np.diag(eye[m])) for m, p in enumerate(idems))
        return units and np.array_equal(sum(idems), eye)


def prop25_truncation(N: int) -> TernaryTorusFamily:
    return TernaryTorusFamily(N)


# zero-law harness -------------------------------------------------------------------------


@dataclass
class HarnessReport:
    trials: int
    seed: int
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and all(w["equal"] for w in self.witnesses)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": self.witnesses,
            "passed": self.passed,
        }


def optimality_witnesses() -> list[tuple[RationalAngle, RationalAngle]]:
    """``(a, b)`` with ``sup_n |cos(n a) - cos(n b)| = k(a)`` for orders 5, 8 and 11."""
    out = []
    for u in (5, 8, 11):
        w = theta_detail(u).w
        out.append((canonicalize(2, u), canonicalize(2 * w, u)))
    return out


def zero_law_harness(trials: int, seed: int, max_order: int = 30, max_dim: int = 6) -> HarnessReport:
    """Non-scalar diagonal sequences stay at distance at least ``k(a)`` from ``cos(n a)``."""
    rng = np.random.default_rng(seed)
    rep = HarnessReport(trials, seed)
    pool = [b for u in range(1, max_order + 1) for b in angles_of_order(u)]
    for t in range(trials):
        C = random_spectral_cosine(rng, max_dim=max(2, max_dim), min_parts=2, conjugate=False, max_order=max_order)
        a = pool[int(rng.integers(len(pool)))]
        res = sup_distance_to_scalar(C, a)
        k = k_of_order(a.order).value
        rep.checked += 1
        if res.value.hi < k.lo - 1e-12:
            rep.violations.append(
                f"trial {t}: angles {[str(b) for b in C.angles]} vs {a}: sup {res.value.mid:.12f} < k {k.mid:.12f}"
            )
    for a, b in optimality_witnesses():
        C = build([(a, np.diag([1.0, 0.0])), (b, np.diag([0.0, 1.0]))])
        res = sup_distance_to_scalar(C, a)
        k = k_of_order(a.order)
        equal = matches_closed_form(res.value, k.closed_form)
        rep.witnesses.append(
            {
                "angles": [str(a), str(b)],
                "target": str(a),
                "sup": res.value.mid,
                "k": k.closed_form.name,
                "equal": equal,
            }
        )
    return rep


__all__ = [
    "HarnessReport",
    "InvalidIdempotents",
    "NonRationalSpectrum",
    "NotCosineGenerator",
    "Perturbed",
    "SpectralCosine",
    "TernaryTorusFamily",
    "build",
    "chebyshev_matrix",
    "check_dalembert",
    "conjugated_projections",
    "coordinate_projections",
    "dalembert_residual",
    "decompose",
    "optimality_witnesses",
    "prop25_truncation",
    "random_angles",
    "random_similarity",
    "random_spectral_cosine",
    "rational_angle_of",
    "sup_distance_to_scalar",
    "validate_idempotents",
    "zero_law_harness",
]
