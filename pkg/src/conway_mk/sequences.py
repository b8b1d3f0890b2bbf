"""Exact integer kernels: k-nacci numbers, the plus-one recurrence, partial sums
S_i(n) and Lucas numbers.

Everything here is arbitrary-precision ``int``; there is no floating point.
"""

from __future__ import annotations

import threading
from fractions import Fraction

__all__ = [
    "SequenceTable",
    "knacci",
    "knacci_table",
    "cumulative_a",
    "S",
    "verify_S_identity",
    "lucas",
    "asymptotic_c",
]


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"order k must be an integer >= 2, got {k!r}")


def _check_index(name: str, n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {n!r}")


class SequenceTable:
    """Memoised values of F_k for a fixed order ``k``.

    Values are appended under a lock and the backing list is only ever
    extended, so readers never see a half-built entry.
    """

    def __init__(self, k: int):
        _check_k(k)
        self.k = k
        self._values: list[int] = [0] * (k - 1) + [1]
        self._cumulative: list[int] = []
        self._lock = threading.Lock()

    def _extend(self, n: int) -> None:
        with self._lock:
            vals = self._values
            k = self.k
            while len(vals) <= n:
                vals.append(sum(vals[-k:]))

    def __getitem__(self, n: int) -> int:
        _check_index("n", n)
        if n >= len(self._values):
            self._extend(n)
        return self._values[n]

    def snapshot(self, upto: int) -> tuple[int, ...]:
        """Immutable copy of F_k(0..upto)."""
        self[upto]
        return tuple(self._values[: upto + 1])

    def cumulative(self, i: int) -> int:
        """a_i = sum_{j=0}^{i} F_k(k-1+j)."""
        _check_index("i", i)
        if i >= len(self._cumulative):
            self[self.k - 1 + i]
            with self._lock:
                cum = self._cumulative
                while len(cum) <= i:
                    prev = cum[-1] if cum else 0
                    cum.append(prev + self._values[self.k - 1 + len(cum)])
        return self._cumulative[i]


_tables: dict[int, SequenceTable] = {}
_tables_lock = threading.Lock()


def knacci_table(k: int) -> SequenceTable:
    _check_k(k)
    table = _tables.get(k)
    if table is None:
        with _tables_lock:
            table = _tables.setdefault(k, SequenceTable(k))
    return table


def knacci(k: int, n: int) -> int:
    """F_k(n), with F_k(0) = ... = F_k(k-2) = 0 and F_k(k-1) = 1."""
    _check_k(k)
    _check_index("n", n)
    return knacci_table(k)[n]


def cumulative_a(k: int, i: int) -> int:
    """Solution of a_{n+k} = a_n + ... + a_{n+k-1} + 1 from (1, 2, 4, ..., 2^(k-1))."""
    _check_k(k)
    _check_index("i", i)
    return knacci_table(k).cumulative(i)


def S(k: int, i: int, n: int) -> int:
    """S_i(n) = sum_{j=0}^{i} F_k(n+k-2-j) for 0 <= i <= k-1."""
    _check_k(k)
    if not isinstance(i, int) or not 0 <= i <= k - 1:
        raise ValueError(f"index i must lie in [0, {k - 1}], got {i!r}")
    if not isinstance(n, int) or n + k - 2 - i < 0:
        raise ValueError(f"S_{i}({n}) would need F_{k} at a negative index")
    table = knacci_table(k)
    return sum(table[n + k - 2 - j] for j in range(i + 1))


def verify_S_identity(k: int, n: int, i: int) -> bool:
    """Check sum_{j=1}^{k} S_{k-j}(n) F_k(k-j+i) == F_k(n+i+k-1) exactly."""
    table = knacci_table(k)
    lhs = sum(S(k, k - j, n) * table[k - j + i] for j in range(1, k + 1))
    return lhs == table[n + i + k - 1]


_lucas: list[int] = [2, 1]
_lucas_lock = threading.Lock()


def lucas(n: int) -> int:
    """L(n) with L(0) = 2, L(1) = 1."""
    _check_index("n", n)
    if n >= len(_lucas):
        with _lucas_lock:
            while len(_lucas) <= n:
                _lucas.append(_lucas[-1] + _lucas[-2])
    return _lucas[n]


def asymptotic_c(k: int, n_terms: int = 64) -> tuple[Fraction, Fraction]:
    """Rational interval around c = lim F_k(n) / phi_k^n.

    F_k(n) is the integer nearest to c phi_k^n (the other characteristic
    roots lie inside the unit disc), so c lies within 1/2 phi_k^-n of the
    ratio.  That window is taken at ``n_terms`` and ``n_terms + 1`` with a
    certified enclosure of phi_k, and the two are intersected.
    """
    from .algebraic import knacci_constant

    _check_k(k)
    if n_terms < 32:
        raise ValueError("n_terms must be at least 32")
    # enough bits that phi's error is negligible after raising to n_terms+1
    bits = 64 + 2 * (n_terms + 1)
    bracket = knacci_constant(k, Fraction(1, 2**bits))
    half = Fraction(1, 2)
    lo, hi = Fraction(0), Fraction(1)
    for n in (n_terms, n_terms + 1):
        f = knacci(k, n)
        lo = max(lo, (f - half) / bracket.high**n)
        hi = min(hi, (f + half) / bracket.low**n)
    if not 0 < lo < hi:
        raise ValueError(f"n_terms={n_terms} too small to separate c from 0")
    return lo, hi
