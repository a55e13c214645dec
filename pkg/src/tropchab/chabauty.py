"""Hyperelliptic curves ``c*y^2 = f(x)``: point counts, disc expansions, tiny integrals.

Residue discs are parametrised by ``x = a0 + p*t`` with ``v(t) >= 0``.  On a
disc whose centre has ``y != 0 mod p`` we write ``y^2 = h(t) = f(a0 + p*t)/c``
and ``h = h0*(1 + u)`` with ``u`` an exact polynomial whose ``t^k`` coefficient
has valuation at least ``k``.  Then ``1/y = (1 + u)^(-1/2) / sqrt(h0)``; the
binomial series is exact rational arithmetic and only ``sqrt(h0)`` is p-adic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from ._linalg import discriminant, rank_mod_p
from .errors import (
    BadDisc,
    BadReduction,
    DependentRows,
    EvenPrime,
    HypothesisFailure,
    InsufficientPrecision,
    InsufficientTail,
    InvalidParameters,
    RankNotStabilized,
    SchemaError,
    WeierstrassDisc,
    ZeroSeries,
)
from .padic import (
    EXACT_CAP,
    FiniteFieldElement,
    PadicNumber,
    check_prime,
    hensel_sqrt,
    legendre,
    residue_mod,
    valuation,
    vp,
)
from .series import PadicSeries, antiderivative, compute_Np


@dataclass(frozen=True)
class HyperellipticCurve:
    """``c*y^2 = f(x)``; ``f`` holds integer coefficients in ascending order."""

    c: int
    f: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(a) for a in self.f))
        if self.c == 0:
            raise InvalidParameters("c must be nonzero")
        if not self.f or self.f[-1] == 0:
            raise InvalidParameters("leading coefficient of f must be nonzero")
        if self.degree < 5:
            raise InvalidParameters("need deg f >= 5 (genus >= 2)")
        if self.discriminant == 0:
            raise InvalidParameters("f is not squarefree")

    @classmethod
    def from_json(cls, obj: Mapping) -> HyperellipticCurve:
        try:
            c = obj["c"]
            f = obj["f"]
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError("c must be an integer")
            if not all(isinstance(a, int) and not isinstance(a, bool) for a in f):
                raise TypeError("f must list integers")
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad curve: {exc}") from exc
        return cls(c, tuple(f))

    def to_json(self) -> dict:
        return {"c": self.c, "f": list(self.f)}

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    @property
    def leading(self) -> int:
        return self.f[-1]

    @cached_property
    def discriminant(self) -> int:
        d = discriminant(self.f)
        return int(d)

    def f_at(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for a in reversed(self.f):
            acc = acc * x + a
        return acc


def good_reduction(curve: HyperellipticCurve, p: int) -> bool:
    check_prime(p)
    if p == 2:
        raise EvenPrime("good reduction test needs an odd prime")
    return curve.c % p != 0 and curve.leading % p != 0 and curve.discriminant % p != 0


def affine_points_Fp(curve: HyperellipticCurve, p: int) -> list[tuple[int, int]]:
    out = []
    for a in range(p):
        fa = int(curve.f_at(a)) % p
        for b in range(p):
            if (curve.c * b * b - fa) % p == 0:
                out.append((a, b))
    return out


def points_at_infinity_Fp(curve: HyperellipticCurve, p: int) -> int:
    if curve.degree % 2:
        return 1
    return 1 + legendre(FiniteFieldElement.of(curve.leading * curve.c, p))


def count_points_Fp(curve: HyperellipticCurve, p: int) -> int:
    """Points of the smooth model over F_p, counted with the quadratic character."""
    if not good_reduction(curve, p):
        raise BadReduction(f"{p} is a prime of bad reduction")
    total = 0
    for a in range(p):
        total += 1 + legendre(FiniteFieldElement.of(curve.f_at(a) * curve.c, p))
    return total + points_at_infinity_Fp(curve, p)


def is_rational_point(curve: HyperellipticCurve, x, y) -> bool:
    return curve.c * Fraction(y) ** 2 == curve.f_at(x)


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def check_point(curve: HyperellipticCurve, point: Sequence[str]) -> bool:
    """Affine ``[x, y]`` or a point at infinity ``["inf"]`` / ``["inf", "+"]``."""
    if point and str(point[0]).lower() in ("inf", "infinity"):
        if curve.degree % 2:
            return len(point) == 1
        if len(point) != 2 or point[1] not in ("+", "-"):
            return False
        return _is_rational_square(Fraction(curve.leading, curve.c))
    if len(point) != 2:
        raise SchemaError(f"point must be [x, y], got {point!r}")
    try:
        x, y = Fraction(str(point[0])), Fraction(str(point[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad point {point!r}") from exc
    return is_rational_point(curve, x, y)


@dataclass(frozen=True)
class ColemanBound:
    bound: int
    points_Fp: int


def coleman_bound_for_curve(curve: HyperellipticCurve, p: int, r: int) -> ColemanBound:
    g = curve.genus
    check_prime(p)
    if not p > 2 * g:
        raise HypothesisFailure("p > 2g", f"p={p}, g={g}")
    if not r < g:
        raise HypothesisFailure("r < g", f"r={r}, g={g}")
    if not good_reduction(curve, p):
        raise HypothesisFailure("good reduction at p", f"p={p}")
    n = count_points_Fp(curve, p)
    return ColemanBound(n + 2 * g - 2, n)


# ---------------------------------------------------------------------------
# residue discs


@dataclass(frozen=True)
class ResidueDisc:
    curve: HyperellipticCurve
    prime: int
    a: int
    b: int
    a0: int | None = field(default=None)

    def __post_init__(self):
        p = check_prime(self.prime)
        if p == 2:
            raise EvenPrime("residue discs need an odd prime")
        object.__setattr__(self, "a", self.a % p)
        object.__setattr__(self, "b", self.b % p)
        if self.a0 is None:
            object.__setattr__(self, "a0", self.a)
        elif self.a0 % p != self.a:
            raise BadDisc(f"lift {self.a0} does not reduce to {self.a}")
        if self.curve.c % p == 0:
            raise BadDisc(f"{p} divides c")
        if self.b == 0:
            raise WeierstrassDisc("discs centred at y = 0 are not supported")
        if (self.curve.c * self.b * self.b - int(self.curve.f_at(self.a))) % p:
            raise BadDisc(f"({self.a}, {self.b}) is not a point mod {p}")

    @classmethod
    def parse(cls, curve: HyperellipticCurve, p: int, text: str) -> ResidueDisc:
        try:
            a, b = (int(s) for s in text.split(","))
        except ValueError as exc:
            raise SchemaError(f"disc must be 'a,b', got {text!r}") from exc
        return cls(curve, p, a, b)

    def default_digits(self, terms: int) -> int:
        return 2 * (2 * self.curve.genus + 4) + terms


def _poly_shift_scale(coeffs: Sequence[int], a0: int, p: int) -> list[Fraction]:
    """Coefficients of ``f(a0 + p*t)`` in ``t``."""
    d = len(coeffs) - 1
    out = [Fraction(0)] * (d + 1)
    for k in range(d + 1):
        # k-th Taylor coefficient at a0
        tk = sum(coeffs[j] * math.comb(j, k) * a0 ** (j - k) for j in range(k, d + 1))
        out[k] = Fraction(tk * p**k)
    return out


def _binomial_series(w: Sequence[Fraction], alpha: Fraction, n_terms: int) -> list[Fraction]:
    """``w(t)**alpha`` to ``n_terms`` coefficients for ``w[0] == 1``."""
    s = [Fraction(1)] + [Fraction(0)] * (n_terms - 1)
    for n in range(1, n_terms):
        acc = Fraction(0)
        for k in range(1, min(n, len(w) - 1) + 1):
            acc += ((alpha + 1) * k - n) * w[k] * s[n - k]
        s[n] = acc / n
    return s


def _truncated_product(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def expand_differential(
    disc: ResidueDisc, i: int, terms: int, digits: int | None = None
) -> PadicSeries:
    """``x^i dx / y`` on the disc, as coefficients of ``t^n dt`` for ``n < terms``.

    Every coefficient satisfies ``v(c_n) >= n + 1``, which is recorded as the
    tail bound.
    """
    curve, p = disc.curve, disc.prime
    if not 0 <= i < curve.genus:
        raise InvalidParameters(f"need 0 <= i < g = {curve.genus}")
    if terms < 1:
        raise InvalidParameters("terms must be >= 1")
    digits = digits or disc.default_digits(terms)
    h = [x / curve.c for x in _poly_shift_scale(curve.f, disc.a0, p)]
    h0 = h[0]
    s0 = hensel_sqrt(PadicNumber.from_rational(h0, p, digits), FiniteFieldElement(p, disc.b), digits)
    w = [x / h0 for x in h]
    S = _binomial_series(w, Fraction(-1, 2), terms)
    # internal check: S^2 * w == 1 up to t^terms
    check = _truncated_product(_truncated_product(S, S, terms), w, terms)
    if check != [Fraction(1)] + [Fraction(0)] * (terms - 1):
        raise InsufficientPrecision("binomial expansion failed its squaring check")
    if not (s0 * s0 - PadicNumber.from_rational(h0, p, digits)).is_zero():
        raise InsufficientPrecision("square root failed its squaring check")
    xi = [Fraction(math.comb(i, j) * disc.a0 ** (i - j) * p**j) for j in range(i + 1)]
    exact = [p * x for x in _truncated_product(xi, S, terms)]
    inv_s0 = 1 / s0
    coeffs = tuple(inv_s0 * x if x else PadicNumber.zero(p, EXACT_CAP) for x in exact)
    return PadicSeries(p, 0, coeffs, terms + 1, Fraction(1))


def tiny_integral(
    disc: ResidueDisc,
    i: int,
    t1: PadicNumber,
    t2: PadicNumber,
    terms: int,
    precision: int | None = None,
) -> PadicNumber:
    """Integral of ``x^i dx/y`` from ``x = a0 + p*t1`` to ``x = a0 + p*t2``."""
    for t in (t1, t2):
        if valuation(t) < 0:
            raise InsufficientPrecision("points must satisfy v(t) >= 0 to lie in the disc")
    omega = expand_differential(disc, i, terms)
    # t^n dt = t^(n+1) dt/t
    f = antiderivative(omega.shift(1))
    try:
        result = f.evaluate(t2) - f.evaluate(t1)
    except InsufficientTail as exc:
        raise InsufficientPrecision(str(exc)) from exc
    if precision is not None and result.absolute_precision < precision:
        raise InsufficientPrecision(
            f"only {result.absolute_precision} digits certified, {precision} requested"
        )
    return result


# ---------------------------------------------------------------------------
# local zero bounds


@dataclass(frozen=True)
class DiscZeroData:
    n0: int
    local_bound: int


def local_zero_data(omega: PadicSeries) -> DiscZeroData:
    """Zero data for ``omega = sum A_n T^n dT`` on the disc ``v(T) > 0``.

    ``n0`` is the first index of minimal coefficient valuation; the
    antiderivative vanishing at ``T = 0`` has at most ``N_p(1, n0 + 1) - 1``
    zeros with ``v(T) >= 1``, which is ``1 + n0`` once ``p > n0 + 2``.
    """
    pts = omega.points()
    if not pts:
        raise ZeroSeries("every stored coefficient vanishes")
    if omega.low < 0:
        raise InvalidParameters("differential has a pole at the centre")
    m = min(v for _, v in pts)
    N = omega.truncation_index
    if not omega.is_exact:
        T = omega.tail_valuation_floor
        if T == -math.inf or T < m:
            raise InsufficientPrecision("tail may hold coefficients of smaller valuation")
    n0 = min(n for n, v in pts if v == m)
    for n in range(omega.low, n0):
        c = omega.coefficient(n)
        if c.is_zero() and c.absolute_precision <= m:
            raise InsufficientPrecision(f"coefficient {n} is not known beyond valuation {m}")
    bound = compute_Np(omega.prime, 1, n0 + 1) - 1
    return DiscZeroData(n0, bound)


def disc_zero_data(disc: ResidueDisc, i: int, terms: int | None = None) -> DiscZeroData:
    """Zero data of ``x^i dx/y`` in the coordinate ``T = x - a0``."""
    terms = terms or 4 * disc.curve.genus + 4
    omega = expand_differential(disc, i, terms)
    p = disc.prime
    coeffs = tuple(c / (Fraction(p) ** (n + 1)) for n, c in zip(omega.exponents(), omega.coeffs))
    # v(c_n) >= n + 1 gives v(A_n) >= 0 on the tail
    in_T = PadicSeries(p, 0, coeffs, 0, Fraction(0))
    return local_zero_data(in_T)


def stoll_order(rows: Sequence[Sequence[int]], p: int) -> int:
    """Smallest vanishing order at the centre among nonzero combinations of the rows.

    Rows are reduced expansions over F_p of a basis of a space of
    differentials; a combination vanishes to order ``j`` exactly when its first
    nonzero coordinate is ``j``, and the minimum is the first column that is not
    identically zero.
    """
    check_prime(p)
    rows = [[int(x) % p for x in row] for row in rows]
    if not rows or not rows[0]:
        raise RankNotStabilized("no expansion columns given")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SchemaError("rows must have equal length")
    if rank_mod_p(rows, p) < len(rows):
        raise DependentRows("rows are dependent mod p over the given columns")
    for j in range(width):
        if any(r[j] for r in rows):
            return j
    raise RankNotStabilized("every column vanishes")
