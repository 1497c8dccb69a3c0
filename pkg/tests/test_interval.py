"""Enclosure soundness of the certified interval arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellrep.interval import (
    CertifiedReal,
    InsufficientPrecision,
    float_down,
    float_up,
    imin,
    refine,
)

fractions = st.fractions(
    min_value=Fraction(-10 ** 6), max_value=Fraction(10 ** 6),
    max_denominator=10 ** 6)


def enc(f: Fraction, prec: int = 128) -> CertifiedReal:
    return CertifiedReal.from_fraction(f, prec)


def contains(x: CertifiedReal, f: Fraction) -> bool:
    lo = Fraction(*float_down(x).as_integer_ratio())
    hi = Fraction(*float_up(x).as_integer_ratio())
    return lo <= f <= hi


@given(fractions, fractions)
def test_add_sub_mul_contain_exact(a, b):
    x, y = enc(a), enc(b)
    assert contains(x + y, a + b)
    assert contains(x - y, a - b)
    assert contains(x * y, a * b)


@given(fractions, fractions.filter(lambda f: abs(f) > Fraction(1, 1000)))
def test_div_contains_exact(a, b):
    assert contains(enc(a) / enc(b), a / b)


@given(fractions.filter(lambda f: f > 0))
def test_log_exp_roundtrip_contains(a):
    x = enc(a)
    y = x.log().exp()
    assert y.lo <= x.hi and x.lo <= y.hi  # overlapping enclosures of a


@given(fractions, st.integers(min_value=0, max_value=12))
def test_integer_power_contains(a, n):
    assert contains(enc(a).powi(n), a ** n)


@given(st.integers(min_value=-10 ** 30, max_value=10 ** 30))
def test_int_construction_exact(v):
    x = CertifiedReal.from_int(v, 128)
    assert x.lo <= v <= x.hi


def test_width_shrinks_with_precision():
    a = Fraction(1, 3)
    w64 = enc(a, 64).width
    w256 = enc(a, 256).width
    assert w256 < w64


def test_comparison_raises_on_overlap():
    third = enc(Fraction(1, 3), 64)
    with pytest.raises(InsufficientPrecision):
        third < third  # noqa: B015
    assert enc(Fraction(1, 3)) < enc(Fraction(1, 2))
    assert enc(Fraction(1, 2)) > enc(Fraction(1, 3))


def test_division_by_zero_interval_signals():
    # an interval straddling zero: [-1/2, 1/2]
    z = CertifiedReal(enc(Fraction(-1, 2), 64).lo, enc(Fraction(1, 2), 64).hi, 64)
    with pytest.raises(InsufficientPrecision):
        CertifiedReal.from_int(1, 64) / z


def test_floor_and_nearest_int():
    x = enc(Fraction(7, 2))
    assert x.floor() == 3
    m, dist = enc(Fraction(22, 7)).nearest_int()
    assert m == 3
    assert contains(dist, Fraction(1, 7))
    big = CertifiedReal.from_int(10 ** 60 + 3, 512) + enc(Fraction(2, 5), 512)
    assert big.floor() == 10 ** 60 + 3


def test_nearest_int_tie_handling():
    # an exact half-integer point has a certain distance of 1/2
    _, dist = enc(Fraction(1, 2), 64).nearest_int()
    assert contains(dist, Fraction(1, 2))
    # but an enclosure straddling the tie cannot commit to a neighbor
    straddle = CertifiedReal(enc(Fraction(499, 1000), 64).lo,
                             enc(Fraction(501, 1000), 64).hi, 64)
    with pytest.raises(InsufficientPrecision):
        straddle.nearest_int()


def test_hex_roundtrip_is_superset():
    x = enc(Fraction(1, 7), 192)
    c, r = x.to_hex()
    y = CertifiedReal.from_hex(c, r, 192)
    assert y.lo <= x.lo and x.hi <= y.hi


def test_even_power_of_straddling_interval():
    x = CertifiedReal(CertifiedReal.from_int(-1, 64).lo,
                      CertifiedReal.from_int(2, 64).hi, 64)
    sq = x.powi(2)
    assert sq.lo <= 0 and float_up(sq) >= 4


def test_negative_power():
    x = enc(Fraction(2))
    assert contains(x.powi(-2), Fraction(1, 4))


def test_intersect_and_imin():
    a = enc(Fraction(1, 3), 64)
    b = enc(Fraction(1, 3), 256)
    assert a.intersect(b).width <= b.width
    lo = imin(enc(Fraction(1)), enc(Fraction(2)))
    assert contains(lo, Fraction(1))


def test_refine_ladder_escalates():
    calls = []

    def attempt(prec):
        calls.append(prec)
        if prec < 1024:
            raise InsufficientPrecision("not yet")
        return prec

    assert refine(attempt, start=256, cap=2048) == 1024
    assert calls == [256, 512, 1024]


def test_refine_ladder_gives_up_at_cap():
    def never(prec):
        raise InsufficientPrecision("never")

    with pytest.raises(InsufficientPrecision):
        refine(never, start=256, cap=512)
