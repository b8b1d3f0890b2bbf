"""Exact arithmetic in Q(phi_k), where phi_k is the real root in (1, 2) of
x^k - x^(k-1) - ... - x - 1.

Elements are coefficient vectors over the basis 1, phi, ..., phi^(k-1).
Signs are decided exactly: a gcd with the characteristic polynomial settles
whether an element is zero, and otherwise dyadic root brackets are refined
until an interval evaluation excludes zero.  No floating-point value is ever
trusted for a decision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "FieldElement",
    "RootBracket",
    "knacci_constant",
    "char_poly",
    "phi",
    "alpha",
    "one",
    "phi_power",
    "floor_log_phi",
]

Scalar = Union[int, Fraction]


# ---------------------------------------------------------------------------
# dense polynomials over Q, lowest degree first


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        _trim(a)
    return _trim(q), a


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def _poly_inverse_mod(a: list[Fraction], p: list[Fraction]) -> list[Fraction]:
    """Inverse of a modulo p by the extended Euclidean algorithm."""
    r0, r1 = _trim(list(p)), _trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element shares a factor with the characteristic polynomial")
    inv = [c / r0[0] for c in s0]
    _, rem = _poly_divmod(inv, p)
    return rem


def _poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def char_poly(k: int) -> list[Fraction]:
    """x^k - x^(k-1) - ... - 1, lowest degree first."""
    return [Fraction(-1)] * k + [Fraction(1)]


# ---------------------------------------------------------------------------
# root brackets


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"order k must be an integer >= 2, got {k!r}")


def _char_sign_at(k: int, num: int, bits: int) -> int:
    """Sign of the characteristic polynomial at num / 2^bits."""
    # scaled by 2^(bits*k): num^k - sum_{j<k} num^j 2^(bits*(k-j))
    val = num**k
    for j in range(k):
        val -= num**j << (bits * (k - j))
    return (val > 0) - (val < 0)


class _DyadicRoot:
    """floor(phi_k * 2^bits) for increasing ``bits``, refined on demand."""

    def __init__(self, k: int):
        self.k = k
        self.bits = 0
        self.num = 1  # phi in [1, 2]
        self.lock = threading.Lock()

    def at(self, bits: int) -> int:
        if bits <= self.bits:
            return self.num >> (self.bits - bits)
        with self.lock:
            num, b = self.num, self.bits
            while b < bits:
                mid = 2 * num + 1
                b += 1
                s = _char_sign_at(self.k, mid, b)
                if s == 0:  # pragma: no cover - the root is irrational
                    raise ArithmeticError("characteristic polynomial has a dyadic root")
                # polynomial is negative left of phi, positive right of it
                num = mid if s < 0 else 2 * num
            if b > self.bits:
                self.num, self.bits = num, b
        return self.num >> (self.bits - bits)


_roots: dict[int, _DyadicRoot] = {}
_roots_lock = threading.Lock()


def _root(k: int) -> _DyadicRoot:
    r = _roots.get(k)
    if r is None:
        with _roots_lock:
            r = _roots.setdefault(k, _DyadicRoot(k))
    return r


@dataclass(frozen=True)
class RootBracket:
    """Rational interval [low, high] known to contain phi_k."""

    k: int
    low: Fraction
    high: Fraction

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    def refine(self) -> "RootBracket":
        """Halve the bracket by one bisection step."""
        mid = (self.low + self.high) / 2
        s = _poly_sign_at(char_poly(self.k), mid)
        if s == 0:  # pragma: no cover
            raise ArithmeticError("bisection hit the root exactly")
        if s < 0:
            return RootBracket(self.k, mid, self.high)
        return RootBracket(self.k, self.low, mid)

    def contains(self, x: Fraction) -> bool:
        return self.low <= x <= self.high


def _poly_sign_at(p: list[Fraction], x: Fraction) -> int:
    v = _poly_eval(p, x)
    return (v > 0) - (v < 0)


def knacci_constant(k: int, width: Scalar = Fraction(1, 2**64)) -> RootBracket:
    """Bracket of width <= ``width`` around phi_k, inside (1, 2)."""
    _check_k(k)
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    bits = max(1, math.ceil(-math.log2(width))) if width < 1 else 1
    while Fraction(1, 2**bits) > width:
        bits += 1
    num = _root(k).at(bits)
    low, high = Fraction(num, 2**bits), Fraction(num + 1, 2**bits)
    # the first bisection step can land on the endpoint 1; nudge inward
    while low <= 1 or high >= 2:
        bits += 1
        num = _root(k).at(bits)
        low, high = Fraction(num, 2**bits), Fraction(num + 1, 2**bits)
    return RootBracket(k, low, high)


# ---------------------------------------------------------------------------
# field elements


class FieldElement:
    """c_0 + c_1 phi + ... + c_{k-1} phi^(k-1) with rational c_i."""

    __slots__ = ("k", "coeffs", "_hash")

    def __init__(self, k: int, coeffs):
        _check_k(k)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > k:
            cs = _reduce(k, cs)
        cs += [Fraction(0)] * (k - len(cs))
        self.k = k
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def from_scalar(cls, k: int, value: Scalar) -> "FieldElement":
        return cls(k, [value])

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.k != self.k:
                raise ValueError(f"cannot mix Q(phi_{self.k}) and Q(phi_{other.k})")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElement(self.k, [other])
        return NotImplemented

    # ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.k, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.k, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.k, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, FieldElement):
            return FieldElement(self.k, [c * other for c in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.k, _reduce(self.k, _poly_mul(list(self.coeffs), list(o.coeffs))))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv = _poly_inverse_mod(list(self.coeffs), char_poly(self.k))
        return FieldElement(self.k, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, FieldElement):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.k, [c / other for c in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if not isinstance(n, int):
            return NotImplemented
        if self == phi(self.k):
            return phi_power(self.k, n)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = one(self.k)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparisons --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.k == other.k and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not any(self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.k, self.coeffs))
        return self._hash

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        return f"FieldElement(k={self.k}, coeffs=({', '.join(str(c) for c in self.coeffs)}))"

    # exact decisions ----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def _vanishes_at_phi(self) -> bool:
        if self.is_zero():
            return True
        if self.is_rational():
            return False
        g = _poly_gcd(list(self.coeffs), char_poly(self.k))
        if len(g) <= 1:
            return False
        # every root of g is a root of the characteristic polynomial, whose
        # only root in (1, 2) is phi_k, and that root is simple
        return _poly_sign_at(g, Fraction(1)) * _poly_sign_at(g, Fraction(2)) < 0

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval containing the value, from a 2^-bits root bracket."""
        if self.is_rational():
            c = self.coeffs[0]
            return c, c
        lo_num = _root(self.k).at(bits)
        hi_num = lo_num + 1
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in self.coeffs]
        k = self.k
        lo_sum = hi_sum = 0
        for i, n in enumerate(ints):
            if n == 0:
                continue
            scale = 1 << (bits * (k - 1 - i))
            a, b = lo_num**i * scale, hi_num**i * scale
            if n > 0:
                lo_sum += n * a
                hi_sum += n * b
            else:
                lo_sum += n * b
                hi_sum += n * a
        denom = den << (bits * (k - 1))
        return Fraction(lo_sum, denom), Fraction(hi_sum, denom)

    def sign(self) -> int:
        """Certified sign of the real number this element denotes."""
        if self.is_rational():
            c = self.coeffs[0]
            return (c > 0) - (c < 0)
        if self._vanishes_at_phi():
            return 0
        bits = 64
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def floor(self) -> int:
        bits = 64
        lo, hi = self.enclosure(bits)
        while hi - lo >= 1:
            bits *= 2
            lo, hi = self.enclosure(bits)
        q = math.floor(lo)
        while (self - (q + 1)).sign() >= 0:
            q += 1
        while (self - q).sign() < 0:
            q -= 1
        return q

    def to_decimal(self, digits: int = 12) -> tuple[str, bool]:
        """Truncated decimal expansion with ``digits`` certified places.

        Returns the string and whether it is the exact value.
        """
        if self.sign() < 0:
            text, exact = (-self).to_decimal(digits)
            return "-" + text, exact
        scaled = self * (10**digits)
        q = scaled.floor()
        exact = (scaled - q).sign() == 0
        whole, frac = divmod(q, 10**digits)
        text = f"{whole}.{frac:0{digits}d}" if digits else f"{whole}"
        return text, exact

    def __float__(self):
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def to_json(self, digits: int = 12) -> dict:
        text, exact = self.to_decimal(digits)
        return {
            "k": self.k,
            "coeffs": [str(c) for c in self.coeffs],
            "decimal": text,
            "exact": exact,
        }


def _reduce(k: int, cs: list[Fraction]) -> list[Fraction]:
    """Reduce modulo x^k = x^(k-1) + ... + x + 1."""
    cs = list(cs)
    for deg in range(len(cs) - 1, k - 1, -1):
        c = cs[deg]
        if c:
            cs[deg] = Fraction(0)
            for j in range(deg - k, deg):
                cs[j] += c
    return cs[:k] + [Fraction(0)] * (k - len(cs[:k]))


# ---------------------------------------------------------------------------
# distinguished elements, cached per k

_power_cache: dict[int, dict[int, FieldElement]] = {}
_power_lock = threading.Lock()


def one(k: int) -> FieldElement:
    return FieldElement(k, [1])


def phi(k: int) -> FieldElement:
    return FieldElement(k, [0, 1]) if k > 1 else FieldElement(k, [1])


def alpha(k: int) -> FieldElement:
    """1 / phi_k = phi^(k-1) - phi^(k-2) - ... - 1."""
    return FieldElement(k, [-1] * (k - 1) + [1])


def phi_power(k: int, n: int) -> FieldElement:
    """phi_k^n for any integer n, memoised."""
    cache = _power_cache.get(k)
    if cache is None:
        with _power_lock:
            cache = _power_cache.setdefault(k, {0: one(k)})
    hit = cache.get(n)
    if hit is not None:
        return hit
    step = phi(k) if n > 0 else alpha(k)
    direction = 1 if n > 0 else -1
    # walk from the nearest cached exponent on the same side of zero
    start = max((e for e in cache if 0 <= e * direction <= n * direction), key=abs)
    value = cache[start]
    e = start
    while e != n:
        value = value * step
        e += direction
        cache[e] = value
    return value


def floor_log_phi(x: FieldElement | Scalar, k: int | None = None) -> tuple[int, bool]:
    """The integer t with phi_k^t <= x < phi_k^(t+1), and whether x == phi_k^t.

    Decided by certified signs of x * phi^-t - 1; the floating estimate only
    picks the starting guess.
    """
    if not isinstance(x, FieldElement):
        if k is None:
            raise ValueError("k is required for scalar arguments")
        x = FieldElement.from_scalar(k, x)
    elif k is not None and k != x.k:
        raise ValueError("k does not match the element")
    k = x.k
    if x.sign() <= 0:
        raise ValueError("floor_log_phi needs a positive argument")
    bits = 64
    lo, hi = x.enclosure(bits)
    while lo <= 0:
        bits *= 2
        lo, hi = x.enclosure(bits)
    mid = (lo + hi) / 2
    log_phi = math.log(float(knacci_constant(k).low))
    est = (math.log(mid.numerator) - math.log(mid.denominator)) / log_phi
    t = math.floor(est)

    def cmp(t_: int) -> int:
        return (x * phi_power(k, -t_) - 1).sign()

    while cmp(t) < 0:
        t -= 1
    while cmp(t + 1) >= 0:
        t += 1
    return t, cmp(t) == 0
