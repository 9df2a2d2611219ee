"""Reproduction checks aggregated into one pass/fail ledger."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable

import numpy as np

from .algebra import dalembert_residual, decompose, prop25_truncation, random_spectral_cosine, zero_law_harness
from .angles import IRRATIONAL, angles_of_order, canonicalize, inverse_totient, totient
from .certified import (
    COS_2_11_PLUS_COS_3_11,
    EIGHT_OVER_3SQRT3,
    SQRT2,
    SQRT5_OVER_2,
    THREE_HALVES,
    TWO,
    matches_closed_form,
)
from .cyclic import gamma, gamma_zero, grid_sup
from .kconst import (
    CheckReport,
    check_floor_and_ceiling,
    check_large_index,
    check_middle_index,
    check_omega_classes,
    check_sigma_values,
    check_small_index,
    check_theta_values,
    check_triple_angle_classes,
    float_cyclic_sup,
    k_of_angle,
    k_of_order,
    omega,
)
from .realsup import taylor_tables, trig_diff_sup

OMEGA_3_2_ORDERS = (1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 15, 16, 18, 22, 24, 30)
EXPECTED_DISCREPANCIES = {("1", "present-but-unlisted"), ("11/12", "present-but-unlisted"), ("5/4", "unlistable")}


def check_k_constants() -> CheckReport:
    rep = CheckReport("k constants of named angles")
    cases = [
        ((2, 5), SQRT5_OVER_2),
        ((1, 4), SQRT2),
        ((1, 8), SQRT2),
        ((2, 11), COS_2_11_PLUS_COS_3_11),
        ((0, 1), THREE_HALVES),
        ((1, 2), THREE_HALVES),
        ((1, 6), THREE_HALVES),
    ]
    for (p, q), form in cases:
        k = k_of_angle(canonicalize(p, q))
        row = f"k({p}/{q} pi) = {k.value.mid:.10f} ~ {form.name}"
        (rep.ok if matches_closed_form(k.value, form) else rep.fail)(row)
    k = k_of_order(11).value.mid
    (rep.ok if abs(k - 1.4961) <= 5e-5 else rep.fail)(f"k(order 11) = {k:.6f} within 1.4961 +- 5e-5")
    irr = k_of_angle(IRRATIONAL)
    (rep.ok if irr.is_irrational_max else rep.fail)("irrational angle gives the symbolic 8/(3 sqrt 3)")
    return rep


def check_global_sups(max_q: int = 21) -> CheckReport:
    rep = CheckReport("global sup of |cos(px) - cos(qx)|")
    r = trig_diff_sup(1, 3, 1e-10)
    ok = r.value.width <= 1e-10 and r.value.overlaps(EIGHT_OVER_3SQRT3.enclose()) and r.closed_form == EIGHT_OVER_3SQRT3
    (rep.ok if ok else rep.fail)(f"(1,3): [{float(r.value.lo):.12f}, {float(r.value.hi):.12f}] encloses 8/(3 sqrt 3)")
    r = trig_diff_sup(1, 2)
    (rep.ok if r.closed_form == TWO and r.value.lo == 2 else rep.fail)(f"(1,2): {r.value.mid} = 2")
    ceiling = EIGHT_OVER_3SQRT3.enclose()
    for p in range(1, max_q + 1, 2):
        for q in range(p + 2, max_q + 1, 2):
            if gcd(p, q) != 1 or q == 3 * p:
                continue
            v = trig_diff_sup(p, q, 1e-6).value
            row = f"({p},{q}): {v.mid:.6f} > 8/(3 sqrt 3)"
            (rep.ok if v.lo > ceiling.hi else rep.fail)(row)
    return rep


def check_taylor_tables(seed: int = 0, spot: int = 3) -> CheckReport:
    """Recomputed thresholds are at most the reference ones and the exceedance holds at spot orders."""
    rep = CheckReport("Taylor-Lagrange threshold tables")
    rng = np.random.default_rng(seed)
    f_rows, g_rows = taylor_tables()
    for row in f_rows + g_rows:
        ref = row.reference
        line = f"{row.family}_{row.s}: theta {row.theta_s.mid:.5f} l {row.l_s.mid:.5f} u_s {row.u_s} <= {ref.u}"
        (rep.ok if row.u_s <= ref.u else rep.fail)(line)
        alpha = 1 if row.family == "f" else 3
        for u in sorted(rng.integers(ref.u, ref.u + 100, size=spot).tolist()):
            v = grid_sup(u, alpha, row.s).value
            (rep.ok if v.lo > Fraction(3, 2) else rep.fail)(f"  {row.family}_{row.s} at u={u}: {v.mid:.6f} > 1.5")
    return rep


def check_omega() -> CheckReport:
    rep = CheckReport("Omega(m) enumeration")
    o = omega(Fraction(6, 5))
    expected = tuple(canonicalize(j, 5) for j in range(1, 5))
    (rep.ok if o.angles == expected else rep.fail)(f"Omega(1.2) = {[str(a) for a in o.angles]}")
    o = omega(Fraction(1))
    (rep.ok if not o.angles else rep.fail)(f"Omega(1.0) has {len(o.angles)} members")
    o = omega(THREE_HALVES)
    (rep.ok if o.orders == OMEGA_3_2_ORDERS else rep.fail)(
        f"Omega(3/2) orders {list(o.orders)} (cutoff {o.cutoff_order})"
    )
    (rep.ok if len(o.members) == 45 else rep.fail)(f"Omega(3/2) has {len(o.members)} members")
    found = {(d.angle, d.kind) for d in o.discrepancies}
    (rep.ok if found == EXPECTED_DISCREPANCIES else rep.fail)(f"discrepancies {sorted(found)}")
    for d in o.discrepancies:
        (rep.ok if d.oracle_agrees else rep.fail)(f"  {d.angle} ({d.kind}) oracle k = {d.oracle_k:.12f}")
    return rep


def _brute_gamma(a, m: float, max_order: int = 60):
    return tuple(b for u in range(1, max_order + 1) for b in angles_of_order(u) if float_cyclic_sup(a, b) <= m + 1e-12)


def check_gamma_sets(trials: int = 25, seed: int = 0) -> CheckReport:
    rep = CheckReport("Gamma(a, m) sets")
    g = gamma_zero(THREE_HALVES)
    (rep.ok if g.members == (canonicalize(0, 1), canonicalize(2, 3)) else rep.fail)(
        f"Gamma(0, 1.5) = {[str(b) for b in g.members]}"
    )
    g = gamma(canonicalize(2, 5), Fraction(6, 5))
    (rep.ok if g.members == (canonicalize(2, 5), canonicalize(4, 5)) else rep.fail)(
        f"Gamma(2/5, 1.2) = {[str(b) for b in g.members]}"
    )
    rng = np.random.default_rng(seed)
    pool = [b for u in range(1, 8) for b in angles_of_order(u)]
    for _ in range(trials):
        a = pool[int(rng.integers(len(pool)))]
        m = Fraction(int(rng.integers(0, 1801)), 1000)
        got = gamma(a, m).members
        want = tuple(sorted(_brute_gamma(a, float(m))))
        (rep.ok if got == want else rep.fail)(f"Gamma({a}, {m}): {len(got)} members")
    return rep


def check_totient(limit: int = 10**4) -> CheckReport:
    rep = CheckReport("Euler totient")
    (rep.ok if inverse_totient(2) == {3, 4, 6} else rep.fail)(f"inverse totient of 2 = {sorted(inverse_totient(2))}")
    js = np.arange(1, limit + 1)
    bad = [n for n in range(1, limit + 1) if totient(n) != int(np.count_nonzero(np.gcd(js[:n], n) == 1))]
    (rep.ok if not bad else rep.fail)(f"totient = brute count for n <= {limit} ({len(bad)} mismatches)")
    return rep


def check_simulator(builds: int = 100, seed: int = 0, max_n: int = 10) -> CheckReport:
    rep = CheckReport("matrix cosine simulator")
    rng = np.random.default_rng(seed)
    worst, recovered = 0.0, True
    for _ in range(builds):
        C = random_spectral_cosine(rng, max_dim=6)
        worst = max(worst, dalembert_residual(C, 50))
        D = decompose(C(1))
        recovered &= D.angles == tuple(sorted(C.angles))
    (rep.ok if worst <= 1e-10 else rep.fail)(f"d'Alembert residual {worst:.3g} <= 1e-10 over {builds} builds")
    (rep.ok if recovered else rep.fail)("decompose recovers every angle set")
    for N in range(1, max_n + 1):
        fam = prop25_truncation(N)
        s = fam.sup_distance_to_identity()
        ok = s.closed_form == THREE_HALVES and s.width == 0 and s.mid == 1.5 and fam.separates_coordinates()
        (rep.ok if ok else rep.fail)(f"(Z/3Z)^{N}: sup ||I - C(g)|| = {s.mid}, idempotents separate coordinates")
    h = zero_law_harness(100, seed)
    (rep.ok if not h.violations else rep.fail)(f"zero-law harness: {h.checked} trials, {len(h.violations)} violations")
    for w in h.witnesses:
        (rep.ok if w["equal"] else rep.fail)(f"  witness {w['angles']} vs {w['target']}: sup = k = {w['k']}")
    return rep


def check_floor(max_u: int = 200) -> CheckReport:
    return check_floor_and_ceiling(max_u)


@dataclass
class Ledger:
    reports: list[CheckReport] = field(default_factory=list)
    seconds: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def lines(self, verbose: bool = False) -> list[str]:
        out = []
        for r in self.reports:
            out.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({self.seconds.get(r.name, 0):.1f}s)")
            for row in r.rows:
                if verbose or row.startswith("FAIL"):
                    out.append("      " + row)
            for note in r.notes:
                out.append("      note: " + note)
        return out

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [r.to_json() for r in self.reports], "seconds": self.seconds}


CHECKS: tuple[Callable[[], CheckReport], ...] = (
    check_k_constants,
    check_global_sups,
    check_triple_angle_classes,
    check_small_index,
    check_middle_index,
    check_large_index,
    check_theta_values,
    check_sigma_values,
    check_omega_classes,
    check_taylor_tables,
    check_omega,
    check_gamma_sets,
    check_totient,
    check_simulator,
    check_floor,
)


def run_all(checks=CHECKS) -> Ledger:
    ledger = Ledger()
    for check in checks:
        t = time.perf_counter()
        rep = check()
        ledger.seconds[rep.name] = time.perf_counter() - t
        ledger.reports.append(rep)
    return ledger


__all__ = ["CHECKS", "Ledger", "run_all"] + [c.__name__ for c in CHECKS]
