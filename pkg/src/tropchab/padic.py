"""Exact arithmetic in Q_p at finite precision.

A :class:`PadicNumber` is an exact rational ``unit * p**valuation`` together with
a count of known p-adic digits of the unit.  Arithmetic is exact on the
rational representatives; precision is bookkeeping that stops us from claiming
digits we do not know.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import (
    BranchMismatch,
    DivisionByZero,
    EvenPrime,
    InvalidParameters,
    NonResidue,
    OddValuation,
    PrimeMismatch,
)

INF = math.inf
DEFAULT_PRECISION = 40
# absolute precision used for exact zeros
EXACT_CAP = 10**6
PRIME_LIMIT = 10**6

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return ``p`` if it is a prime below ``PRIME_LIMIT``; raise otherwise."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise InvalidParameters(f"prime must be an integer, got {p!r}")
    if p >= PRIME_LIMIT:
        raise InvalidParameters(f"primes >= {PRIME_LIMIT} are not supported")
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise InvalidParameters(f"{p} is not prime")
    return p


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(q: Rational, p: int) -> Union[int, float]:
    """p-adic valuation of an exact rational; ``INF`` for zero."""
    q = Fraction(q)
    if q == 0:
        return INF
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


def split_unit(q: Rational, p: int) -> tuple[Fraction, int]:
    """Write a nonzero rational as ``unit * p**v`` with ``unit`` a p-adic unit."""
    q = Fraction(q)
    v = vp(q, p)
    return q / Fraction(p) ** v, v


def residue_mod(q: Rational, m: int) -> int:
    """Image in Z/m of a rational whose denominator is coprime to ``m``."""
    q = Fraction(q)
    return q.numerator * pow(q.denominator, -1, m) % m


@dataclass(frozen=True)
class PadicNumber:
    """Element of Q_p: exact value ``unit * prime**valuation``.

    ``precision`` is the number of known p-adic digits of ``unit``.  For zero,
    ``unit`` is 0 and ``valuation`` stores the absolute precision ``N``: the
    element is only known to be ``O(p**N)``.
    """

    prime: int
    unit: Fraction
    valuation: int
    precision: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.precision < 1:
            raise InvalidParameters("precision must be >= 1")
        if self.unit != 0 and (
            self.unit.numerator % self.prime == 0 or self.unit.denominator % self.prime == 0
        ):
            raise InvalidParameters("unit must be coprime to the prime")

    # construction -------------------------------------------------------
    @classmethod
    def from_rational(cls, q: Rational, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, EXACT_CAP)
        unit, v = split_unit(q, p)
        return cls(p, unit, v, precision)

    @classmethod
    def zero(cls, p: int, absolute_precision: int = DEFAULT_PRECISION) -> PadicNumber:
        return cls(p, Fraction(0), absolute_precision, 1)

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absolute_precision(self) -> int:
        """Largest ``N`` such that the element is known modulo ``p**N``."""
        if self.unit == 0:
            return self.valuation
        return self.valuation + self.precision

    def value(self) -> Fraction:
        """The exact rational representative."""
        if self.unit == 0:
            return Fraction(0)
        return self.unit * Fraction(self.prime) ** self.valuation

    def to_fraction(self) -> Fraction:
        return self.value()

    def reduced(self) -> Fraction:
        """Representative ``r * p**v`` with ``0 <= r < p**precision``."""
        if self.unit == 0:
            return Fraction(0)
        r = residue_mod(self.unit, self.prime**self.precision)
        return r * Fraction(self.prime) ** self.valuation

    def lift(self, n: int | None = None) -> int:
        """Integer representative modulo ``p**n`` (default: known digits).

        Requires valuation >= 0.
        """
        n = self.absolute_precision if n is None else n
        if self.unit != 0 and self.valuation < 0:
            raise InvalidParameters("element is not p-integral")
        if n <= 0:
            return 0
        return residue_mod(self.value(), self.prime**n)

    def digits(self, n: int | None = None) -> list[int]:
        """First ``n`` p-adic digits (units digit first) of a p-integral element."""
        n = self.absolute_precision if n is None else n
        x = self.lift(n)
        out = []
        for _ in range(n):
            x, d = divmod(x, self.prime)
            out.append(d)
        return out

    def with_absolute_precision(self, cap: int) -> PadicNumber:
        """Forget digits beyond ``p**cap``."""
        if self.unit == 0:
            return PadicNumber.zero(self.prime, min(self.valuation, cap))
        if cap <= self.valuation:
            return PadicNumber.zero(self.prime, cap)
        return PadicNumber(self.prime, self.unit, self.valuation, min(self.precision, cap - self.valuation))

    def agrees(self, other: PadicNumber) -> bool:
        """True when the two elements are equal to their common precision."""
        return (self - other).is_zero()

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise PrimeMismatch(f"{self.prime} != {other.prime}")
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return PadicNumber.zero(self.prime, EXACT_CAP)
            v = vp(q, self.prime)
            # exact constants must never be the limiting operand
            prec = max(self.precision, self.absolute_precision - v, 1)
            return PadicNumber.from_rational(q, self.prime, prec)
        return NotImplemented

    def __add__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> PadicNumber:
        return neg(self)

    def __sub__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, neg(other))

    def __rsub__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(other, neg(self))

    def __mul__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, inv(other))

    def __rtruediv__(self, other) -> PadicNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(other, inv(self))

    def __pow__(self, n: int) -> PadicNumber:
        if n < 0:
            return inv(self) ** (-n)
        result = PadicNumber.from_rational(1, self.prime, max(self.precision, 1))
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            base = mul(base, base)
            n >>= 1
        return result

    def __repr__(self) -> str:
        if self.unit == 0:
            return f"O({self.prime}^{self.valuation})"
        return f"PadicNumber({self.value()} + O({self.prime}^{self.absolute_precision}))"


def valuation(x: PadicNumber) -> Union[int, float]:
    """v_p(x), or ``INF`` for zero."""
    return INF if x.unit == 0 else x.valuation


def _same_prime(x: PadicNumber, y: PadicNumber) -> int:
    if x.prime != y.prime:
        raise PrimeMismatch(f"{x.prime} != {y.prime}")
    return x.prime


def add(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    p = _same_prime(x, y)
    cap = min(x.absolute_precision, y.absolute_precision)
    s = x.value() + y.value()
    if s == 0:
        return PadicNumber.zero(p, cap)
    unit, v = split_unit(s, p)
    if v >= cap:
        return PadicNumber.zero(p, cap)
    return PadicNumber(p, unit, v, cap - v)


def neg(x: PadicNumber) -> PadicNumber:
    return PadicNumber(x.prime, -x.unit, x.valuation, x.precision)


def mul(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    p = _same_prime(x, y)
    if x.unit == 0 or y.unit == 0:
        vx = x.valuation if x.unit != 0 else x.absolute_precision
        vy = y.valuation if y.unit != 0 else y.absolute_precision
        return PadicNumber.zero(p, vx + vy)
    return PadicNumber(p, x.unit * y.unit, x.valuation + y.valuation, min(x.precision, y.precision))


def inv(x: PadicNumber) -> PadicNumber:
    if x.unit == 0:
        raise DivisionByZero("inverse of a p-adic zero")
    return PadicNumber(x.prime, 1 / x.unit, -x.valuation, x.precision)


@dataclass(frozen=True)
class FiniteFieldElement:
    prime: int
    residue: int

    def __post_init__(self):
        check_prime(self.prime)
        object.__setattr__(self, "residue", self.residue % self.prime)

    @classmethod
    def of(cls, a: Rational, p: int) -> FiniteFieldElement:
        return cls(p, residue_mod(a, p))


def legendre(a: FiniteFieldElement) -> int:
    """Legendre symbol by Euler's criterion."""
    p = a.prime
    if p == 2:
        raise EvenPrime("Legendre symbol needs an odd prime")
    if a.residue == 0:
        return 0
    return 1 if pow(a.residue, (p - 1) // 2, p) == 1 else -1


def _exact_square_root(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def hensel_sqrt(a: PadicNumber, branch: FiniteFieldElement, digits: int) -> PadicNumber:
    """Square root of ``a`` congruent to ``branch * p**(v(a)/2)``.

    The result carries ``min(digits, a.precision)`` digits.  Exact rational
    squares come back exact.
    """
    p = a.prime
    if p == 2:
        raise EvenPrime("square roots are only supported for odd primes")
    if branch.prime != p:
        raise PrimeMismatch(f"{branch.prime} != {p}")
    if a.unit == 0:
        raise NonResidue("zero has no unit square root")
    if a.valuation % 2:
        raise OddValuation(f"valuation {a.valuation} is odd")
    u0 = residue_mod(a.unit, p)
    if legendre(FiniteFieldElement(p, u0)) != 1:
        raise NonResidue(f"{u0} is not a square mod {p}")
    if branch.residue * branch.residue % p != u0:
        raise BranchMismatch(f"{branch.residue}^2 != {u0} mod {p}")
    digits = min(digits, a.precision)
    half = a.valuation // 2

    exact = _exact_square_root(a.unit)
    if exact is not None:
        root = exact if residue_mod(exact, p) == branch.residue else -exact
        return PadicNumber(p, root, half, digits)

    # Newton: s <- (s + u/s)/2, doubling correct digits per step
    s, k = branch.residue, 1
    while k < digits:
        k = min(2 * k, digits)
        m = p**k
        u = residue_mod(a.unit, m)
        s = (s + u * pow(s, -1, m)) * pow(2, -1, m) % m
    return PadicNumber(p, Fraction(s), half, digits)
