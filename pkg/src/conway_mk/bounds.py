"""Exact evaluation of the reachability bounds.

Every floor of a base-phi_k logarithm goes through ``floor_log_phi`` on an
exact field element.  The only real logarithm computed anywhere is the
error term ``error_term_E``, which returns a certified interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .algebraic import FieldElement, floor_log_phi, one, phi
from .board import GameParams

__all__ = [
    "BoundsReport",
    "growth_ratio",
    "upper_bound_row",
    "lower_bound_row_formula",
    "max_row_1d",
    "row1_cap",
    "projected_m",
    "achieved_row",
    "bounds_report",
    "C_bound",
    "error_term_E",
    "single_square_caps",
    "scan_gap",
]


def growth_ratio(k: int) -> FieldElement:
    """(phi_k + 1) / (phi_k - 1), the per-dimension energy factor."""
    p = phi(k)
    return (p + 1) / (p - 1)


def _upper_element(params: GameParams) -> FieldElement:
    p = phi(params.k)
    return params.m * (p + 1) ** (params.d - 1) / (p - 1) ** params.d


def upper_bound_row(params: GameParams) -> tuple[int, bool]:
    """Pagoda upper bound on the reachable row, and whether it was strict.

    With X = m (phi+1)^(d-1) / (phi-1)^d, reaching row n needs
    phi^(n-1) < X.  When X is exactly a power of phi the floor does not
    absorb the strict inequality and the bound drops by one.
    """
    t, exact = floor_log_phi(_upper_element(params))
    if exact:
        return t, True
    return t + 1, False


def lower_bound_row_formula(params: GameParams) -> int:
    if params.k == 2:
        t, _ = floor_log_phi(params.m, 2)
        return t + 3 * params.d - 2
    if params.m <= 1:
        raise ValueError("the general-k lower bound needs m > 1")
    t, _ = floor_log_phi(_upper_element(params))
    return t


def max_row_1d(m: int, k: int) -> int:
    """Highest reachable row in one dimension (1 when m == 1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return 1
    return upper_bound_row(GameParams(m, k, 1))[0]


def row1_cap(m: int, k: int) -> int:
    """floor(m / (phi_k - 1)): checkers that can be amassed on row 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return (m / (phi(k) - 1)).floor()


def projected_m(params: GameParams) -> list[int]:
    """Per-cell counts after each projection step, starting from m."""
    out = [params.m]
    for _ in range(params.d - 1):
        cur = out[-1]
        out.append(cur + 2 * row1_cap(cur, params.k))
    return out


def achieved_row(params: GameParams) -> int:
    return max_row_1d(projected_m(params)[-1], params.k)


@dataclass
class BoundsReport:
    params: GameParams
    lower: int | None
    upper: int
    strict_upper: bool
    achieved: int
    projected_m: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        p = self.params
        return {
            "m": p.m,
            "k": p.k,
            "d": p.d,
            "lower": self.lower,
            "upper": self.upper,
            "strict_upper": self.strict_upper,
            "achieved": self.achieved,
            "projected_m": self.projected_m,
            "notes": self.notes,
            "upper_element": _upper_element(p).to_json(),
        }


def bounds_report(params: GameParams) -> BoundsReport:
    upper, strict = upper_bound_row(params)
    proj = projected_m(params)
    notes = []
    try:
        lower = lower_bound_row_formula(params)
    except ValueError:
        lower = None
        notes.append("closed-form lower bound not available for m = 1, k > 2")
    if params.m == 1 and params.d >= 2:
        notes.append(f"one-dimensional bound applied to projected count {proj[-1]} > 1")
    if strict:
        notes.append("upper bound is strict: initial energy equals 1 exactly at the raw bound")
    return BoundsReport(params, lower, upper, strict, max_row_1d(proj[-1], params.k), proj, notes)


# ---------------------------------------------------------------------------
# analysis utilities


def _check_eps(epsilons: Sequence) -> None:
    for e in epsilons:
        v = e if isinstance(e, FieldElement) else Fraction(e)
        if not (v > 0 and v < 2):
            raise ValueError(f"epsilon {e} outside (0, 2)")


def C_bound(d: int, k: int, epsilons: Sequence) -> FieldElement:
    """sum_{i=0}^{d} eps_i ((phi+1)/(phi-1))^i; ``epsilons`` has length d+1.

    A negative ``d`` gives the empty sum.
    """
    if len(epsilons) != max(d + 1, 0):
        raise ValueError(f"need {d + 1} epsilons, got {len(epsilons)}")
    _check_eps(epsilons)
    r = growth_ratio(k)
    total = FieldElement(k, [0])
    power = one(k)
    for e in epsilons:
        total = total + power * e
        power = power * r
    return total


def construction_epsilons(m: int, k: int, d: int) -> list[FieldElement]:
    """The floor errors of the projection: eps_i = 2 frac(m_i / (phi-1))."""
    p1 = phi(k) - 1
    out = []
    for mi in projected_m(GameParams(m, k, d))[:-1]:
        out.append(2 * (mi / p1 - row1_cap(mi, k)))
    return out


def error_term_E(m: int, d: int, k: int, epsilons: Sequence, bits: int = 128) -> mpmath.mpi:
    """Certified interval for -log_phi(1 - C(d-2)/m ((phi-1)/(phi+1))^(d-1))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    c = C_bound(d - 2, k, epsilons)
    inner = 1 - c / m * growth_ratio(k) ** (1 - d)
    if inner.sign() <= 0:
        raise ValueError("argument of the logarithm is not positive")
    lo, hi = inner.enclosure(bits)
    plo, phi_hi = _phi_interval(k, bits)
    with mpmath.workprec(bits):
        x = mpmath.mpi(_mpf(lo, "d"), _mpf(hi, "u"))
        base = mpmath.mpi(_mpf(plo, "d"), _mpf(phi_hi, "u"))
        return -mpmath.iv.log(x) / mpmath.iv.log(base)


def _phi_interval(k: int, bits: int) -> tuple[Fraction, Fraction]:
    from .algebraic import knacci_constant

    b = knacci_constant(k, Fraction(1, 2**bits))
    return b.low, b.high


def _mpf(q: Fraction, rounding: str):
    return mpmath.mpf(mpmath.libmp.from_rational(q.numerator, q.denominator, mpmath.mp.prec, rounding))


def single_square_caps(params: GameParams) -> tuple[int, int]:
    """(constructed, upper) counts of checkers on one cell."""
    last = projected_m(params)[-1]
    lower = last + 2 * row1_cap(last, params.k)
    upper = (params.m * growth_ratio(params.k) ** params.d).floor()
    return lower, upper


def scan_gap(k: int, d: int, m_values: Iterable[int], workers: int = 1) -> list[tuple[int, int, int]]:
    """(m, upper, achieved) for every m where the construction misses the bound."""
    ms = sorted(set(m_values))
    if workers > 1 and len(ms) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_gap_row, [(m, k, d) for m in ms], chunksize=64))
    else:
        rows = [_gap_row((m, k, d)) for m in ms]
    return [r for r in rows if r is not None]


def _gap_row(args):
    m, k, d = args
    params = GameParams(m, k, d)
    upper, _ = upper_bound_row(params)
    ach = achieved_row(params)
    return (m, upper, ach) if ach < upper else None
