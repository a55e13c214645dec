"""Truncated Laurent series over Q_p and their Newton polygons.

Zeros are located by the valuation of their coordinate.  For a series
``f = sum a_n t^n`` put ``m(s) = min_n v(a_n) + n*s``; this is ``-log|f|`` at the
Gauss point of radius ``p**-s``.  Its slope at ``s`` is the dominant index, and
the number of zeros of valuation exactly ``s`` is the jump of the dominant
index there.  Example: ``f = p + t`` gives ``m(s) = min(1, s)``, a single kink
at ``s = 1``, i.e. one zero of valuation 1.

Truncated series carry an affine lower bound on the valuations of the
coefficients that were dropped: ``v(a_n) >= floor + slope*(n - N)`` for every
``n >= N``, where ``N`` is the first dropped exponent.  Zero counts are only
returned when that bound rules out a change to the relevant part of the
polygon; otherwise :class:`InsufficientTail` is raised.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    AllZero,
    InsufficientTail,
    NonExactResidue,
    NonpositiveRate,
    SchemaError,
    WindowError,
)
from .padic import DEFAULT_PRECISION, EXACT_CAP, INF, PadicNumber, check_prime, valuation, vp

Ext = Union[int, Fraction, float]  # float only for +-INF


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class ValuationWindow:
    """A set of valuations ``lo .. hi`` with open/closed ends; ``hi`` may be INF."""

    lo: Fraction
    hi: Ext
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        if self.hi != INF:
            object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo < 0:
            raise WindowError("window must lie in valuations >= 0")
        if self.hi == INF and not self.hi_open:
            raise WindowError("an infinite upper end must be open")
        if self.lo > self.hi or (self.lo == self.hi and (self.lo_open or self.hi_open)):
            raise WindowError(f"empty window {self}")

    def __contains__(self, s) -> bool:
        if s < self.lo or (self.lo_open and s == self.lo):
            return False
        if self.hi == INF:
            return s != INF
        return s < self.hi or (not self.hi_open and s == self.hi)

    @classmethod
    def parse(cls, text: str) -> ValuationWindow:
        m = re.fullmatch(r"\s*([\(\[])\s*([^,\s]+)\s*,\s*([^,\s]+)\s*([\)\]])\s*", text)
        if not m:
            raise SchemaError(f"cannot parse window {text!r}; expected e.g. '(0,2)' or '[1,inf)'")
        lb, lo, hi, rb = m.groups()
        try:
            lo_v = Fraction(lo)
            hi_v = INF if hi.lower() in ("inf", "infinity", "+inf") else Fraction(hi)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad window bound in {text!r}") from exc
        return cls(lo_v, hi_v, lb == "(", rb == ")")

    def __str__(self) -> str:
        hi = "inf" if self.hi == INF else str(self.hi)
        return f"{'(' if self.lo_open else '['}{self.lo},{hi}{')' if self.hi_open else ']'}"


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True)
class PadicSeries:
    """``sum coeffs[k] * t**(low + k)`` plus a dropped tail.

    ``tail_valuation_floor`` is INF for Laurent polynomials and -INF when
    nothing is known about the dropped terms.
    """

    prime: int
    low: int
    coeffs: tuple
    tail_valuation_floor: Ext = INF
    tail_slope: Fraction = Fraction(0)

    def __post_init__(self):
        check_prime(self.prime)
        if len(self.coeffs) < 1:
            raise SchemaError("a series needs at least one stored coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        for c in self.coeffs:
            if not isinstance(c, PadicNumber) or c.prime != self.prime:
                raise SchemaError("coefficients must be PadicNumbers over the series prime")
        object.__setattr__(self, "tail_slope", Fraction(self.tail_slope))
        if self.tail_slope < 0:
            raise SchemaError("tail slope must be >= 0")

    @classmethod
    def from_rationals(
        cls,
        p: int,
        coeffs: Iterable,
        low: int = 0,
        precision: int = DEFAULT_PRECISION,
        tail_valuation_floor: Ext = INF,
        tail_slope=0,
    ) -> PadicSeries:
        cs = tuple(PadicNumber.from_rational(Fraction(c), p, precision) for c in coeffs)
        return cls(p, low, cs, tail_valuation_floor, Fraction(tail_slope))

    @property
    def truncation_index(self) -> int:
        """First exponent not stored."""
        return self.low + len(self.coeffs)

    @property
    def is_exact(self) -> bool:
        return self.tail_valuation_floor == INF

    def exponents(self) -> range:
        return range(self.low, self.truncation_index)

    def coefficient(self, n: int) -> PadicNumber:
        if self.low <= n < self.truncation_index:
            return self.coeffs[n - self.low]
        if n < self.low or self.is_exact:
            return PadicNumber.zero(self.prime, EXACT_CAP)
        raise InsufficientTail(f"coefficient {n} was truncated")

    def points(self) -> list[tuple[int, int]]:
        """``(n, v(a_n))`` for the stored nonzero coefficients."""
        return [(n, c.valuation) for n, c in zip(self.exponents(), self.coeffs) if not c.is_zero()]

    def tail_bound(self, n: int) -> Ext:
        """Guaranteed lower bound for v(a_n), n >= truncation index."""
        T = self.tail_valuation_floor
        if T in (INF, -INF):
            return T
        return T + self.tail_slope * (n - self.truncation_index)

    def normalized(self) -> PadicSeries:
        """Strip exactly-zero coefficients from both ends of an exact series."""
        cs = list(self.coeffs)
        low = self.low
        while len(cs) > 1 and cs[0].is_zero():
            cs.pop(0)
            low += 1
        if self.is_exact:
            while len(cs) > 1 and cs[-1].is_zero():
                cs.pop()
        return PadicSeries(self.prime, low, tuple(cs), self.tail_valuation_floor, self.tail_slope)

    def shift(self, k: int) -> PadicSeries:
        """Multiply by ``t**k``."""
        return PadicSeries(
            self.prime, self.low + k, self.coeffs, self.tail_valuation_floor, self.tail_slope
        )

    def derivative(self) -> PadicSeries:
        """``t d/dt``: the form ``df`` written as ``sum n a_n t^n dt/t``."""
        cs = tuple(c * n for n, c in zip(self.exponents(), self.coeffs))
        return PadicSeries(self.prime, self.low, cs, self.tail_valuation_floor, self.tail_slope)

    def _dropped_floor(self, top: int, slope: Fraction) -> Ext:
        """Floor at ``top`` (growing with ``slope``) covering everything from ``top`` on."""
        best: Ext = INF
        for n in range(max(top, self.low), self.truncation_index):
            c = self.coeffs[n - self.low]
            cv = c.valuation if not c.is_zero() else c.absolute_precision
            if not (c.is_zero() and cv >= EXACT_CAP):
                best = min(best, cv - slope * (n - top))
        if not self.is_exact:
            T = self.tail_valuation_floor
            if T == -INF:
                return -INF
            best = min(best, T - slope * (self.truncation_index - top))
        return best

    def __add__(self, other: PadicSeries) -> PadicSeries:
        if self.prime != other.prime:
            raise SchemaError("prime mismatch")
        low = min(self.low, other.low)
        inexact = [s for s in (self, other) if not s.is_exact]
        if not inexact:
            top = max(self.truncation_index, other.truncation_index)
            cs = tuple(self.coefficient(n) + other.coefficient(n) for n in range(low, top))
            return PadicSeries(self.prime, low, cs)
        top = min(s.truncation_index for s in inexact)
        slope = min(s.tail_slope for s in inexact)
        cs = tuple(self.coefficient(n) + other.coefficient(n) for n in range(low, top))
        floor = min(self._dropped_floor(top, slope), other._dropped_floor(top, slope))
        return PadicSeries(self.prime, low, cs, floor, slope)

    def scale(self, c) -> PadicSeries:
        cs = tuple(x * c for x in self.coeffs)
        T = self.tail_valuation_floor
        if T not in (INF, -INF):
            T = T + (valuation(c) if isinstance(c, PadicNumber) else vp(Fraction(c), self.prime))
        return PadicSeries(self.prime, self.low, cs, T, self.tail_slope)

    def evaluate(self, t: PadicNumber) -> PadicNumber:
        """Sum the series at ``t``; precision is capped by the tail bound."""
        v = valuation(t)
        if v == INF:
            if self.low < 0:
                raise WindowError("cannot evaluate a Laurent series with poles at 0")
            return self.coefficient(0) if self.truncation_index > 0 else PadicNumber.zero(
                self.prime, EXACT_CAP
            )
        total = PadicNumber.zero(self.prime, EXACT_CAP)
        for n, c in zip(self.exponents(), self.coeffs):
            total = total + c * t**n
        if self.is_exact:
            return total
        if self.tail_valuation_floor == -INF:
            raise InsufficientTail("nothing is known about the truncated terms")
        if v < 0:
            raise InsufficientTail("tail bound does not cover points with v(t) < 0")
        # every dropped term has valuation >= floor + N*v(t)
        cap = self.tail_valuation_floor + self.truncation_index * v
        return total.with_absolute_precision(math.ceil(cap))


def parse_series(obj: dict) -> PadicSeries:
    """Series literal ``{"prime": p, "low": n0, "coeffs": ["a/b", ...]}``."""
    try:
        p = int(obj["prime"])
        low = int(obj.get("low", 0))
        coeffs = [Fraction(str(c)) for c in obj["coeffs"]]
        prec = int(obj.get("precision", DEFAULT_PRECISION))
        tail = obj.get("tail_valuation_floor")
        tail_slope = Fraction(str(obj.get("tail_slope", 0)))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad series literal: {exc}") from exc
    if tail is None or str(tail).lower() in ("inf", "infinity"):
        tail_v: Ext = INF
    else:
        try:
            tail_v = Fraction(str(tail))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad tail floor {tail!r}") from exc
    return PadicSeries.from_rationals(p, coeffs, low, prec, tail_v, tail_slope)


# ---------------------------------------------------------------------------
# Newton polygons


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple  # ((n, v), ...), n strictly increasing
    provisional: bool = False

    def segments(self) -> list[tuple[tuple, tuple]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def slopes(self) -> list[Fraction]:
        return [Fraction(v2 - v1, n2 - n1) for (n1, v1), (n2, v2) in self.segments()]

    def zero_valuations(self) -> list[tuple[Fraction, int]]:
        """``(valuation, multiplicity)`` for each segment."""
        return [(-s, (n2 - n1)) for s, ((n1, _), (n2, _)) in zip(self.slopes(), self.segments())]


def _cross(o, a, b) -> Fraction:
    return Fraction(a[0] - o[0]) * (b[1] - o[1]) - Fraction(a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: Sequence[tuple]) -> list[tuple]:
    pts = sorted(points)
    # keep the lowest point per abscissa
    dedup: list[tuple] = []
    for pt in pts:
        if dedup and dedup[-1][0] == pt[0]:
            continue
        dedup.append(pt)
    hull: list[tuple] = []
    for pt in dedup:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def newton_polygon(f: PadicSeries) -> NewtonPolygon:
    pts = f.points()
    if not pts:
        raise AllZero("every stored coefficient is zero")
    hull = lower_hull(pts)
    T = f.tail_valuation_floor
    provisional = T != INF and (T == -INF or T <= min(v for _, v in pts))
    return NewtonPolygon(tuple(hull), provisional)


def gauss_value(points: Sequence[tuple], s) -> Fraction:
    """``min v + n*s`` over the given ``(n, v)`` points."""
    return min(v + n * Fraction(s) for n, v in points)


def dominant_indices(points: Sequence[tuple], s) -> tuple[int, int]:
    """Smallest and largest index attaining ``gauss_value`` at ``s``."""
    m = gauss_value(points, s)
    idx = [n for n, v in points if v + n * Fraction(s) == m]
    return min(idx), max(idx)


def _certify(f: PadicSeries, pts, lo: Fraction, lo_open: bool) -> None:
    """Raise unless the tail cannot change polygon segments of valuation >= lo."""
    T = f.tail_valuation_floor
    if T == INF:
        return
    if T == -INF:
        raise InsufficientTail("no bound on the truncated coefficients")
    # tail terms satisfy v + n*s >= T + N*s for s >= 0, with growth > any stored index
    edge = T + f.truncation_index * lo
    m = gauss_value(pts, lo)
    if edge > m or (lo_open and edge == m):
        return
    raise InsufficientTail(
        f"tail floor {T} at index {f.truncation_index} does not certify valuations from {lo}"
    )


def count_zeros(f: PadicSeries, w: ValuationWindow) -> int:
    """Number of zeros (over C_p, with multiplicity) whose valuation lies in ``w``."""
    poly = newton_polygon(f)
    _certify(f, f.points(), w.lo, w.lo_open)
    return sum(mult for val, mult in poly.zero_valuations() if val in w)


# ---------------------------------------------------------------------------
# antiderivatives


def _floor_log(n: int, p: int) -> int:
    k = 0
    q = p
    while q <= n:
        q *= p
        k += 1
    return k


def _log_correction(N: int, p: int, h: Fraction) -> int:
    """``max_{n >= N} floor(log_p n) - h*(n - N)`` for ``h > 0``."""
    N = max(N, 1)
    best = Fraction(_floor_log(N, p))
    k = _floor_log(N, p) + 1
    while True:
        val = k - h * (p**k - N)
        if val > best:
            best = val
        if h * (p**k - N) >= k + 1:
            break
        k += 1
    return math.ceil(best)


def antiderivative(omega: PadicSeries) -> PadicSeries:
    """Primitive of ``sum a_n t^n dt/t`` with zero constant term.

    The dropped tail ``a_n/n`` loses at most ``floor(log_p n)`` of valuation;
    against a tail bound growing with slope ``s`` this is absorbed by lowering the
    floor and halving the slope.
    """
    p = omega.prime
    a0 = omega.coefficient(0) if omega.low <= 0 < omega.truncation_index else None
    if a0 is not None and not a0.is_zero():
        raise NonExactResidue(f"residue a_0 = {a0.value()} is nonzero")
    if a0 is None and omega.low <= 0 and not omega.is_exact:
        raise InsufficientTail("the residue coefficient was truncated")
    cs = []
    for n, c in zip(omega.exponents(), omega.coeffs):
        if n == 0:
            cs.append(PadicNumber.zero(p, EXACT_CAP))
        else:
            cs.append(c / n)
    T = omega.tail_valuation_floor
    slope = omega.tail_slope
    if T in (INF, -INF):
        new_T, new_slope = T, slope
    elif slope == 0:
        new_T, new_slope = -INF, slope
    else:
        new_slope = slope / 2
        new_T = T - _log_correction(omega.truncation_index, p, new_slope)
    return PadicSeries(p, omega.low, tuple(cs), new_T, new_slope)


# ---------------------------------------------------------------------------
# N_p


def compute_Np(p: int, r, N0: int) -> int:
    """Smallest ``N >= 1`` with ``r*(n - N0) > floor(log_p n)`` for all ``n >= N``.

    For each ``k`` the failing ``n`` with ``floor(log_p n) = k`` are those in
    ``[p^k, p^(k+1))`` with ``n <= N0 + k/r``; this is solved directly per ``k``
    so astronomically small rates stay cheap.
    """
    check_prime(p)
    r = Fraction(r)
    if r <= 0:
        raise NonpositiveRate(f"rate must be positive, got {r}")
    N0 = int(N0)
    worst = 0
    k = 0
    pk = 1
    while True:
        limit = N0 + Fraction(k) / r
        top = min(pk * p - 1, math.floor(limit))
        if top >= pk:
            worst = top
        # past this k the window start outruns N0 + k/r for good
        if pk > limit and pk * (p - 1) * r >= 1:
            break
        k += 1
        pk *= p
    return worst + 1


def compute_Np_scan(p: int, r, N0: int, horizon: int) -> int:
    """Reference scan of the defining inequality over ``n < horizon``."""
    r = Fraction(r)
    last_fail = 0
    for n in range(1, horizon):
        if not r * (n - N0) > _floor_log(n, p):
            last_fail = n
    return last_fail + 1


# ---------------------------------------------------------------------------
# annuli


@dataclass(frozen=True)
class AnnularSlopeReport:
    n0: int
    interior_slope: int
    bound: int
    holds: bool


def _exact_points(f: PadicSeries) -> list[tuple[int, int]]:
    pts = f.points()
    if not pts:
        raise AllZero("every stored coefficient is zero")
    return pts


def annular_slope_bound_check(omega: PadicSeries, r, a) -> AnnularSlopeReport:
    """Slope of the antiderivative inside an annulus versus the N_p bound.

    The annulus is ``0 < v(t) < r``; its outer end ``x`` is ``v = 0`` and the
    inner end ``y`` is ``v = r``.  ``N0`` is the slope of ``-log|omega|`` at
    ``x`` pointing into the annulus; the interior slope is that of
    ``-log|f|`` at distance ``a`` from ``y``, pointing towards ``y``.
    """
    r, a = Fraction(r), Fraction(a)
    if r <= 0 or not 0 < a < r:
        raise WindowError(f"need 0 < a < r, got a={a}, r={r}")
    f = antiderivative(omega)
    g_pts = _exact_points(omega)
    f_pts = _exact_points(f)
    _certify(omega, g_pts, Fraction(0), False)
    _certify(f, f_pts, r - a, False)
    n0 = dominant_indices(g_pts, 0)[0]
    interior = dominant_indices(f_pts, r - a)[0]
    bound = compute_Np(omega.prime, r - a, n0)
    return AnnularSlopeReport(n0, interior, bound, interior <= bound)


@dataclass(frozen=True)
class AnnulusZeroReport:
    zeros: int
    n0_outer: int
    n0_inner: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.zeros <= self.bound


def annulus_zero_bound(omega: PadicSeries, r, a) -> AnnulusZeroReport:
    """Zeros of the antiderivative on ``a <= v(t) <= r - a`` against the N_p bound.

    Each end contributes ``N_p(a, N0_end)`` where ``N0_end`` is the slope of
    ``-log|omega|`` at that end pointing inwards.
    """
    r, a = Fraction(r), Fraction(a)
    if r <= 0 or not 0 < a <= r / 2:
        raise WindowError(f"need 0 < a <= r/2, got a={a}, r={r}")
    f = antiderivative(omega)
    g_pts = _exact_points(omega)
    _certify(omega, g_pts, Fraction(0), False)
    n0_outer = dominant_indices(g_pts, 0)[0]
    # seen from the inner end the coordinate is p^r/t: index n -> -n
    n0_inner = -dominant_indices(g_pts, r)[1]
    zeros = count_zeros(f, ValuationWindow(a, r - a, False, False))
    p = omega.prime
    bound = compute_Np(p, a, n0_outer) + compute_Np(p, a, n0_inner)
    return AnnulusZeroReport(zeros, n0_outer, n0_inner, bound)
