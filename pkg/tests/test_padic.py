from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropchab.errors import (
    BranchMismatch,
    EvenPrime,
    InvalidParameters,
    NonResidue,
    OddValuation,
    PrimeMismatch,
)
from tropchab.padic import (
    INF,
    FiniteFieldElement,
    PadicNumber,
    add,
    check_prime,
    hensel_sqrt,
    inv,
    legendre,
    mul,
    neg,
    valuation,
)

SMALL_PRIMES = [3, 5, 7, 11, 13, 97]


def P(q, p=7, prec=20):
    return PadicNumber.from_rational(Fraction(q), p, prec)


def test_valuation_examples():
    assert valuation(P(0)) == INF
    assert valuation(P(Fraction(49, 3))) == 2
    assert valuation(P(6, 3)) == 1
    assert valuation(P(Fraction(1, 9), 3)) == -2


def test_arithmetic_examples():
    z = add(P(1), P(-1))
    assert z.is_zero() and valuation(z) == INF
    one = mul(P(3, 3), P(Fraction(1, 3), 3))
    assert one.value() == 1 and valuation(one) == 0
    for p in SMALL_PRIMES:
        assert valuation(add(P(p, p), P(p * p, p))) == 1
    assert neg(P(5)).value() == -5
    assert inv(P(Fraction(2, 7))).value() == Fraction(7, 2)


def test_inverse_of_zero_is_an_error():
    with pytest.raises(Exception):
        inv(P(0))


def test_mixed_primes_rejected():
    with pytest.raises(PrimeMismatch):
        add(P(1, 3), P(1, 5))


def test_check_prime():
    assert check_prime(7) == 7
    for bad in (1, 4, 9, 0, -3):
        with pytest.raises(InvalidParameters):
            check_prime(bad)


def test_precision_tracks_cancellation():
    # 1 and 1 + 7^5 agree to 5 digits, so their difference knows little
    x = P(1, 7, 10)
    y = P(1 + 7**5, 7, 10)
    d = y - x
    assert valuation(d) == 5
    assert d.absolute_precision == 10


def test_legendre_examples():
    assert legendre(FiniteFieldElement(7, 0)) == 0
    assert legendre(FiniteFieldElement(7, 2)) == 1
    assert legendre(FiniteFieldElement(7, 6)) == -1
    with pytest.raises(EvenPrime):
        legendre(FiniteFieldElement(2, 1))


def test_legendre_matches_square_enumeration():
    for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 97]:
        squares = {x * x % p for x in range(1, p)}
        for a in range(p):
            expected = 0 if a == 0 else (1 if a in squares else -1)
            assert legendre(FiniteFieldElement(p, a)) == expected


def test_hensel_sqrt_examples():
    r = hensel_sqrt(P(1, 3), FiniteFieldElement(3, 1), 10)
    assert r.value() == 1
    r = hensel_sqrt(P(2, 7, 30), FiniteFieldElement(7, 3), 12)
    assert r.digits(3) == [3, 1, 2]
    assert (r * r - P(2, 7, 30)).valuation >= 12
    with pytest.raises(NonResidue):
        hensel_sqrt(P(5), FiniteFieldElement(7, 1), 5)


def test_hensel_sqrt_errors():
    with pytest.raises(OddValuation):
        hensel_sqrt(P(7), FiniteFieldElement(7, 1), 5)
    with pytest.raises(BranchMismatch):
        hensel_sqrt(P(2), FiniteFieldElement(7, 1), 5)
    with pytest.raises(EvenPrime):
        hensel_sqrt(P(1, 2), FiniteFieldElement(2, 1), 5)


rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, rationals, st.sampled_from(SMALL_PRIMES))
def test_ultrametric(x, y, z, p):
    a, b = P(x, p), P(y, p)
    assert valuation(a + b) >= min(valuation(a), valuation(b))
    if valuation(a) != valuation(b) and not (a.is_zero() or b.is_zero()):
        assert valuation(a + b) == min(valuation(a), valuation(b))


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, st.sampled_from(SMALL_PRIMES))
def test_valuation_is_multiplicative(x, y, p):
    a, b = P(x, p), P(y, p)
    if a.is_zero() or b.is_zero():
        assert (a * b).is_zero()
    else:
        assert valuation(a * b) == valuation(a) + valuation(b)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**8), st.sampled_from(SMALL_PRIMES), st.integers(0, 3))
def test_hensel_sqrt_of_squares(u, p, k):
    if u % p == 0:
        u += 1
    a = P(u * u * p ** (2 * k), p, 30)
    r = hensel_sqrt(a, FiniteFieldElement(p, u), 25)
    assert valuation(r) == k
    assert valuation(r * r - a) >= 25 + 2 * k or (r * r - a).is_zero()


@settings(max_examples=200, deadline=None)
@given(st.integers(), st.integers(), st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]))
def test_legendre_is_multiplicative(a, b, p):
    la = legendre(FiniteFieldElement(p, a))
    lb = legendre(FiniteFieldElement(p, b))
    assert legendre(FiniteFieldElement(p, a * b)) == la * lb
