"""Exact positive numbers of the form ``q * r**(1/m)``.

Every inequality the rule library needs is between two such numbers, and
raising both sides to the lcm of the indices turns it into a comparison of
rationals. Nothing here touches floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

__all__ = [
    "Ordering",
    "Radical",
    "Witness",
    "iroot",
    "rad_cmp",
    "rad_new",
    "rad_scale",
    "rad_to_decimal",
    "root_of",
    "compare_roots",
    "cmp_witness",
    "floor_scaled",
    "rad_max",
    "rad_min",
]

RationalLike = Union[int, Fraction]

# Trial division bound used during normalization. Radicands in practice are
# products of powers of line-bundle degrees, whose primes sit far below this.
TRIAL_DIVISION_BOUND = 10**5


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def reversed(self) -> Ordering:
        return Ordering(-int(self))

    @property
    def symbol(self) -> str:
        return {-1: "<", 0: "=", 1: ">"}[int(self)]


def iroot(n: int, k: int) -> int:
    """Floor of the real k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if k < 1:
        raise ValueError("root index must be positive")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    # Newton iteration from an upper bound; monotone decreasing to the floor.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _exact_root(n: int, k: int) -> int | None:
    r = iroot(n, k)
    return r if r**k == n else None


def _factor(n: int) -> tuple[dict[int, int], int]:
    """Trial-divide ``n``; returns (prime exponents, unfactored cofactor)."""
    exps: dict[int, int] = {}
    p = 2
    while p * p <= n and p <= TRIAL_DIVISION_BOUND:
        while n % p == 0:
            exps[p] = exps.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1 and (p * p > n):
        exps[n] = exps.get(n, 0) + 1
        n = 1
    return exps, n


def _perfect_power(n: int) -> tuple[int, int]:
    """Write ``n = t**j`` with ``j`` maximal."""
    for j in range(n.bit_length(), 1, -1):
        t = _exact_root(n, j)
        if t is not None:
            return t, j
    return n, 1


@lru_cache(maxsize=1 << 16)
def _normalize(coeff: Fraction, radicand: int, index: int) -> tuple[Fraction, int, int]:
    if index == 1 or radicand == 1:
        return coeff * radicand, 1, 1
    exps, cofactor = _factor(radicand)
    if cofactor > 1:
        base, j = _perfect_power(cofactor)
        exps[base] = exps.get(base, 0) + j
    outside = 1
    inside: dict[int, int] = {}
    for p, e in exps.items():
        outside *= p ** (e // index)
        if e % index:
            inside[p] = e % index
    coeff = coeff * outside
    if not inside:
        return coeff, 1, 1
    g = math.gcd(index, *inside.values())
    index //= g
    radicand = 1
    for p, e in inside.items():
        radicand *= p ** (e // g)
    return coeff, radicand, index


@total_ordering
@dataclass(frozen=True, init=False)
class Radical:
    """The positive real ``coeff * radicand**(1/index)``, kept in normal form.

    Normal form: ``radicand`` has no ``index``-th power divisor and the index
    cannot be lowered, so two equal values always have equal fields.
    """

    coeff: Fraction
    radicand: int
    index: int

    def __init__(self, coeff: RationalLike = 1, radicand: int = 1, index: int = 1):
        coeff = Fraction(coeff)
        if coeff <= 0:
            raise ValueError(f"radical coefficient must be positive, got {coeff}")
        if not isinstance(radicand, int) or radicand < 1:
            raise ValueError(f"radicand must be a positive integer, got {radicand!r}")
        if not isinstance(index, int) or index < 1:
            raise ValueError(f"index must be a positive integer, got {index!r}")
        c, r, m = _normalize(coeff, radicand, index)
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "radicand", r)
        object.__setattr__(self, "index", m)

    @classmethod
    def of(cls, value: RationalLike | Radical) -> Radical:
        if isinstance(value, Radical):
            return value
        return cls(Fraction(value))

    @property
    def is_rational(self) -> bool:
        return self.index == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.coeff

    def power_fraction(self, exponent: int) -> Fraction:
        """``self**exponent`` as a rational; the exponent must be a multiple of the index."""
        if exponent % self.index:
            raise ValueError("exponent must be a multiple of the index")
        return self.coeff**exponent * Fraction(self.radicand) ** (exponent // self.index)

    def __mul__(self, other: RationalLike | Radical) -> Radical:
        if isinstance(other, (int, Fraction)):
            return rad_scale(self, Fraction(other))
        if not isinstance(other, Radical):
            return NotImplemented
        m = math.lcm(self.index, other.index)
        r = self.radicand ** (m // self.index) * other.radicand ** (m // other.index)
        return Radical(self.coeff * other.coeff, r, m)

    __rmul__ = __mul__

    def __truediv__(self, other: RationalLike | Radical) -> Radical:
        if isinstance(other, (int, Fraction)):
            return rad_scale(self, 1 / Fraction(other))
        if not isinstance(other, Radical):
            return NotImplemented
        # 1 / (c * r**(1/m)) = (1 / (c r)) * r**((m-1)/m)
        inv = Radical(1 / (other.coeff * other.radicand), other.radicand ** (other.index - 1), other.index)
        return self * inv

    def __rtruediv__(self, other: RationalLike) -> Radical:
        return Radical.of(other) / self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeff == other
        if not isinstance(other, Radical):
            return NotImplemented
        return (self.coeff, self.radicand, self.index) == (other.coeff, other.radicand, other.index)

    def __hash__(self) -> int:
        return hash((self.coeff, self.radicand, self.index))

    def __lt__(self, other: RationalLike | Radical) -> bool:
        if isinstance(other, (int, Fraction)):
            if other <= 0:
                return False
            other = Radical(other)
        if not isinstance(other, Radical):
            return NotImplemented
        return rad_cmp(self, other) is Ordering.LESS

    def __str__(self) -> str:
        if self.index == 1:
            return str(self.coeff)
        root = f"{self.radicand}^(1/{self.index})"
        return root if self.coeff == 1 else f"{self.coeff}*{root}"

    def __repr__(self) -> str:
        return f"Radical({str(self.coeff)!r}, {self.radicand}, {self.index})"


def rad_new(coeff: RationalLike, radicand: int, index: int) -> Radical:
    return Radical(coeff, radicand, index)


def root_of(x: RationalLike, m: int) -> Radical:
    """The positive real ``x**(1/m)`` for a positive rational ``x``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("root of a non-positive number")
    # (p/q)**(1/m) = (1/q) * (p * q**(m-1))**(1/m)
    return Radical(Fraction(1, x.denominator), x.numerator * x.denominator ** (m - 1), m)


def rad_scale(a: Radical, q: RationalLike) -> Radical:
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"scale factor must be positive, got {q}")
    if q == 1:
        return a
    return Radical(a.coeff * q, a.radicand, a.index)


def rad_cmp(a: Radical, b: Radical) -> Ordering:
    if a == b:
        return Ordering.EQUAL
    m = math.lcm(a.index, b.index)
    lhs = a.power_fraction(m)
    rhs = b.power_fraction(m)
    if lhs < rhs:
        return Ordering.LESS
    return Ordering.GREATER if lhs > rhs else Ordering.EQUAL


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _sup(k: int) -> str:
    return "" if k == 1 else str(k).translate(_SUPERSCRIPT)


def _paren(x: Fraction) -> str:
    return str(x) if x.denominator == 1 else f"({x})"


@dataclass(frozen=True)
class Witness:
    """Integer-power evidence for one exact comparison.

    ``left`` and ``right`` are what was compared after raising both sides to
    ``power``; ``left_expr``/``right_expr`` show how they were formed.
    """

    left_expr: str
    left: Fraction
    right_expr: str
    right: Fraction
    ordering: Ordering
    power: int

    def __str__(self) -> str:
        return f"{self.left_expr} = {self.left} {self.ordering.symbol} {self.right_expr} = {self.right}"


def _root_power_expr(x: Fraction, k: int) -> str:
    return f"{_paren(x)}{_sup(k)}"


def compare_roots(x: RationalLike, m: int, y: RationalLike, k: int) -> Witness:
    """Compare ``x**(1/m)`` with ``y**(1/k)`` keeping the operands as written.

    The witness is phrased on the raw operands (``18² = 324 > 6³ = 216``)
    rather than on their normal forms; the verdict is cross-checked against
    :func:`rad_cmp`.
    """
    x, y = Fraction(x), Fraction(y)
    p = math.lcm(m, k)
    lhs, rhs = x ** (p // m), y ** (p // k)
    ordering = Ordering((lhs > rhs) - (lhs < rhs))
    assert ordering is rad_cmp(root_of(x, m), root_of(y, k))
    return Witness(_root_power_expr(x, p // m), lhs, _root_power_expr(y, p // k), rhs, ordering, p)


def _radical_power_expr(a: Radical, p: int) -> str:
    parts = []
    if a.coeff != 1:
        parts.append(f"{_paren(a.coeff)}{_sup(p)}")
    if a.radicand != 1:
        parts.append(f"{a.radicand}{_sup(p // a.index)}")
    return "·".join(parts) or "1"


def cmp_witness(a: Radical, b: Radical) -> Witness:
    """:func:`rad_cmp` together with the two rationals it compared."""
    p = math.lcm(a.index, b.index)
    lhs, rhs = a.power_fraction(p), b.power_fraction(p)
    ordering = Ordering((lhs > rhs) - (lhs < rhs))
    return Witness(_radical_power_expr(a, p), lhs, _radical_power_expr(b, p), rhs, ordering, p)


def floor_scaled(a: Radical, scale: int) -> int:
    """``floor(a * scale)`` for a positive integer ``scale``, computed exactly."""
    x = a.coeff * scale
    # floor((n/d) * r**(1/m)) = floor of the m-th root of (n**m * r / d**m)
    num = x.numerator**a.index * a.radicand
    den = x.denominator**a.index
    return iroot(num // den, a.index)


def rad_to_decimal(a: Radical, digits: int, *, mark: bool = False) -> str:
    """Decimal expansion with ``digits`` places, rounded to nearest.

    With ``mark=True`` an irrational value is prefixed with ``~``.
    """
    if digits < 1:
        raise ValueError("digits must be at least 1")
    scale = 10**digits
    # round half up: floor(x + 1/2) == (floor(2x) + 1) // 2
    n = (floor_scaled(a, 2 * scale) + 1) // 2
    whole, frac = divmod(n, scale)
    text = f"{whole}.{frac:0{digits}d}"
    return f"~{text}" if mark and not a.is_rational else text


def rad_min(*values: Radical) -> Radical:
    return min(values)


def rad_max(*values: Radical) -> Radical:
    return max(values)
