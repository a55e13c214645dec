import random
from fractions import Fraction

import pytest

from tropchab.errors import InsufficientTail, NonExactResidue, NonpositiveRate, WindowError
from tropchab.padic import INF, vp
from tropchab.series import (
    PadicSeries,
    ValuationWindow,
    annular_slope_bound_check,
    annulus_zero_bound,
    antiderivative,
    compute_Np,
    compute_Np_scan,
    count_zeros,
    newton_polygon,
    parse_series,
)


def S(p, coeffs, low=0, **kw):
    return PadicSeries.from_rationals(p, coeffs, low, **kw)


def poly_from_roots(roots):
    out = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] += c
            nxt[i] -= r * c
        out = nxt
    return out


def test_newton_polygon_examples():
    assert newton_polygon(S(3, [1])).vertices == ((0, 0),)
    assert newton_polygon(S(3, [3, 1])).vertices == ((0, 1), (1, 0))
    poly = newton_polygon(S(3, [9, 3, 0, 1]))
    assert poly.vertices == ((0, 2), (1, 1), (3, 0))
    assert poly.slopes() == [-1, Fraction(-1, 2)]


def test_count_zeros_examples():
    p = 3
    assert count_zeros(S(p, [p, 1]), ValuationWindow.parse("(0,2)")) == 1
    assert count_zeros(S(p, [1, 1]), ValuationWindow.parse("(0,inf)")) == 0
    assert count_zeros(S(p, [-(p**2), 1]), ValuationWindow.parse("(0,3)")) == 1


def test_window_parse_and_errors():
    w = ValuationWindow.parse("[1, inf)")
    assert 1 in w and 100 in w and INF not in w and 0 not in w
    assert str(ValuationWindow.parse("(0,2]")) == "(0,2]"
    with pytest.raises(WindowError):
        ValuationWindow(2, 1)
    with pytest.raises(WindowError):
        ValuationWindow(0, INF, hi_open=False)


def test_count_zeros_matches_root_valuations():
    rng = random.Random(11)
    for _ in range(300):
        p = rng.choice([3, 5, 7])
        roots = [
            Fraction(rng.choice([1, -1, 2, -2, 4])) * Fraction(p) ** rng.randint(-2, 4)
            for _ in range(rng.randint(1, 6))
        ]
        f = S(p, poly_from_roots(roots))
        lo = Fraction(rng.randint(0, 6), 2)
        hi = lo + Fraction(rng.randint(1, 6), 2)
        lo_open, hi_open = rng.random() < 0.5, rng.random() < 0.5
        w = ValuationWindow(lo, hi, lo_open, hi_open)
        expected = sum(1 for r in roots if vp(r, p) in w)
        assert count_zeros(f, w) == expected


def test_count_zeros_additive_over_windows():
    rng = random.Random(5)
    for _ in range(200):
        p = rng.choice([3, 5])
        cs = [Fraction(rng.randint(-20, 20)) * Fraction(p) ** rng.randint(0, 5) for _ in range(7)]
        cs[0] = cs[0] or Fraction(p**3)
        cs[-1] = cs[-1] or Fraction(1)
        f = S(p, cs)
        cut = Fraction(rng.randint(1, 8), 2)
        whole = count_zeros(f, ValuationWindow(0, INF))
        left = count_zeros(f, ValuationWindow(0, cut, True, False))
        right = count_zeros(f, ValuationWindow(cut, INF, True, True))
        assert left + right == whole
        assert whole <= len(cs) - 1


def test_truncated_series_refuses_uncertified_count():
    f = S(3, [3, 1], tail_valuation_floor=-1)
    with pytest.raises(InsufficientTail):
        count_zeros(f, ValuationWindow(0, 2))
    # a tail floor of 2 with slope 1 is enough to see the zero of valuation 1
    g = S(3, [3, 1], tail_valuation_floor=2, tail_slope=1)
    assert count_zeros(g, ValuationWindow(Fraction(1, 2), 2)) == 1


def test_antiderivative_examples():
    f = antiderivative(S(5, [0, 1]))
    assert [c.value() for c in f.coeffs] == [0, 1]
    # (x - x^3) dx = (x^2 - x^4) dx/x
    f = antiderivative(S(5, [0, 0, 1, 0, -1]))
    assert [c.value() for c in f.coeffs] == [0, 0, Fraction(1, 2), 0, Fraction(-1, 4)]
    with pytest.raises(NonExactResidue):
        antiderivative(S(5, [1, 1]))


def test_antiderivative_then_derivative_round_trip():
    rng = random.Random(2)
    for _ in range(100):
        p = rng.choice([3, 5, 7])
        low = rng.randint(-4, 0)
        cs = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(8)]
        if low <= 0:
            cs[-low] = Fraction(0)
        omega = S(p, cs, low)
        back = antiderivative(omega).derivative()
        assert [c.value() for c in back.coeffs] == [c.value() for c in omega.coeffs]


def test_antiderivative_tail_is_halved_and_lowered():
    omega = S(3, [0, 3, 9], tail_valuation_floor=5, tail_slope=1)
    f = antiderivative(omega)
    assert f.tail_slope == Fraction(1, 2)
    assert f.tail_valuation_floor < 5


def test_antiderivative_tail_bound_is_honest():
    # omega = sum_{n>=1} p^n t^n dt/t, truncated after 4 terms
    p = 3
    full = [Fraction(0)] + [Fraction(p) ** n for n in range(1, 60)]
    omega = S(p, full[:5], tail_valuation_floor=5, tail_slope=1)
    f = antiderivative(omega)
    for n in range(5, 60):
        assert vp(full[n] / n, p) >= f.tail_bound(n)


def test_parse_series():
    f = parse_series({"prime": 3, "low": -1, "coeffs": ["1/2", "0", "3"]})
    assert f.low == -1 and [c.value() for c in f.coeffs] == [Fraction(1, 2), 0, 3]


def test_compute_Np_examples():
    assert compute_Np(7, 1, 4) == 5
    assert compute_Np(3, 100, 0) == 1
    assert compute_Np(3, 1, 5) == 7
    with pytest.raises(NonpositiveRate):
        compute_Np(3, 0, 1)


def test_compute_Np_matches_scan():
    for p in (2, 3, 5, 7):
        for N0 in range(0, 25):
            for r in (Fraction(1, 5), Fraction(1, 2), 1, Fraction(3, 2), 3):
                assert compute_Np(p, r, N0) == compute_Np_scan(p, r, N0, 2000)


def test_compute_Np_tiny_rate_is_fast():
    n = compute_Np(5, Fraction(1, 4 * 7**50), 10)
    assert n > 7**50


def test_compute_Np_monotone():
    rates = [Fraction(1, k) for k in range(1, 21)]
    primes = [3, 5, 7, 11]
    for N0 in range(0, 21):
        for r in rates:
            vals = [compute_Np(p, r, N0) for p in primes]
            assert vals == sorted(vals, reverse=True)
        for p in primes:
            vals = [compute_Np(p, r, N0) for r in rates]
            assert vals == sorted(vals)  # rates decrease along the list
    for p in primes:
        for r in rates:
            vals = [compute_Np(p, r, N0) for N0 in range(0, 21)]
            assert vals == sorted(vals)


def test_compute_Np_at_most_twice_N0():
    for p in (3, 5, 7):
        for N0 in range(1, 501):
            assert compute_Np(p, 1, N0) <= 2 * N0


def test_annular_slope_examples():
    rep = annular_slope_bound_check(S(3, [0, 1]), 2, 1)
    assert rep.interior_slope == 1 and rep.holds
    p = 3
    cs = [0, p] + [0] * (p - 1) + [1]
    assert annular_slope_bound_check(S(p, cs), 2, 1).holds


def _random_exact_form(rng):
    p = rng.choice([3, 5, 7])
    low = rng.randint(-4, 0)
    hi = rng.randint(1, 6)
    cs = [Fraction(rng.choice([0, 1, -1, 2, 3])) * Fraction(p) ** rng.randint(-2, 4) for _ in range(low, hi + 1)]
    cs[-low] = Fraction(0)
    if not any(cs):
        cs[-1] = Fraction(1)
    r = Fraction(rng.randint(1, 8), rng.randint(1, 2))
    a = r * Fraction(rng.randint(1, 4), 8)
    return S(p, cs, low), r, a


def test_annulus_zero_bound_random():
    rng = random.Random(20)
    for _ in range(200):
        omega, r, a = _random_exact_form(rng)
        rep = annulus_zero_bound(omega, r, a)
        assert rep.holds, (omega, r, a, rep)
        assert annular_slope_bound_check(omega, r, a).holds


def test_annulus_zero_bound_rejects_wide_shrink():
    with pytest.raises(WindowError):
        annulus_zero_bound(S(3, [0, 1]), 2, Fraction(3, 2))
