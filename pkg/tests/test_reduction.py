"""Continued fractions and the de Weger reduction lemmas."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellrep.interval import CertifiedReal, float_up
from pellrep.realalg import phi_interval
from pellrep.reduction import (
    ReductionFailure,
    ReductionProblem,
    continued_fraction,
    convergent_index_bound,
    linearization_factor,
    reduce_homogeneous,
    reduce_inhomogeneous,
)


def theta_golden_decimal(prec: int) -> CertifiedReal:
    return phi_interval(prec).log() / CertifiedReal.from_int(10, prec).log()


def ln10(prec: int) -> CertifiedReal:
    return CertifiedReal.from_int(10, prec).log()


def test_rational_expansion_terminates():
    cf = continued_fraction(Fraction(355, 113), depth=99)
    assert cf.quotients == [3, 7, 16]
    assert cf.exact
    assert cf.convergents[-1] == (355, 113)


def test_golden_ratio_all_ones():
    cf = continued_fraction(phi_interval, depth=40)
    assert cf.quotients == [1] * 40


def test_golden_decimal_prefix():
    cf = continued_fraction(theta_golden_decimal, depth=16, start_precision=256)
    assert cf.quotients == [0, 4, 1, 3, 1, 1, 1, 6, 4, 2, 1, 10, 1, 4, 46, 3]


def test_convergent_identities():
    cf = continued_fraction(theta_golden_decimal, depth=60, start_precision=512)
    p, q = zip(*cf.convergents)
    for t in range(2, len(cf.quotients)):
        assert p[t] == cf.quotients[t] * p[t - 1] + p[t - 2]
        assert q[t] == cf.quotients[t] * q[t - 1] + q[t - 2]
        assert p[t] * q[t - 1] - p[t - 1] * q[t] == (-1) ** (t - 1)


def test_convergent_quality():
    cf = continued_fraction(theta_golden_decimal, depth=40, start_precision=512)
    x = theta_golden_decimal(768)
    for t in range(1, 39):
        p, q = cf.convergents[t]
        q_next = cf.convergents[t + 1][1]
        err = abs(x - Fraction(p, q))
        assert err.certainly_less(CertifiedReal.from_fraction(
            Fraction(1, q * q_next), 768))


def test_best_approximation_spot_check():
    cf = continued_fraction(theta_golden_decimal, depth=12, start_precision=512)
    x = theta_golden_decimal(512)
    for t in range(2, len(cf.convergents)):
        p, q = cf.convergents[t]
        if q > 10 ** 4:
            break
        best = abs(x * q - p)
        for q2 in range(1, q):
            p2 = round(q2 * 0.20898764024997873)
            competitor = abs(x * q2 - p2)
            assert not competitor.certainly_less(best)


def test_precision_robustness():
    a = continued_fraction(theta_golden_decimal, depth=50, start_precision=512)
    b = continued_fraction(theta_golden_decimal, depth=50, start_precision=1024)
    assert a.quotients == b.quotients


def test_expansion_q_threshold_stop():
    cf = continued_fraction(theta_golden_decimal, q_threshold=10 ** 20,
                            extra_terms=5, start_precision=512)
    t0 = cf.convergent_above(10 ** 20)
    assert len(cf.convergents) == t0 + 1 + 5


def test_fixed_enclosure_without_refinement_raises():
    from pellrep.interval import InsufficientPrecision

    x = theta_golden_decimal(64)  # frozen, cannot be refined
    with pytest.raises(InsufficientPrecision):
        continued_fraction(x, depth=60)


def test_convergent_index_bound():
    assert convergent_index_bound(1) == 2
    big = convergent_index_bound(537 * 10 ** 348)
    assert 1670 <= big <= 1690
    assert convergent_index_bound(10 ** 10) >= convergent_index_bound(10 ** 5)
    with pytest.raises(ValueError):
        convergent_index_bound(0)


def test_homogeneous_plugin_example():
    # c = 1, rho = 1, |theta2| = 1, A = 1, X0 = 1 gives log 3
    cf = continued_fraction(phi_interval, depth=10)
    prob = ReductionProblem(Fraction(1), Fraction(1), phi_interval, 1,
                            theta2_abs=CertifiedReal.from_int(1, 128))
    y = reduce_homogeneous(prob, cf)
    assert y == pytest.approx(math.log(3), rel=1e-9)


def test_homogeneous_requires_enough_terms():
    cf = continued_fraction(phi_interval, depth=3)
    prob = ReductionProblem(Fraction(1), Fraction(1), phi_interval, 10 ** 6,
                            theta2_abs=CertifiedReal.from_int(1, 128))
    with pytest.raises(ValueError):
        reduce_homogeneous(prob, cf)


def test_homogeneous_rejects_inhomogeneous_problem():
    cf = continued_fraction(phi_interval, depth=10)
    prob = ReductionProblem(Fraction(1), Fraction(1), phi_interval, 1,
                            psi=Fraction(1, 3),
                            theta2_abs=CertifiedReal.from_int(1, 128))
    with pytest.raises(ValueError):
        reduce_homogeneous(prob, cf)


def _sqrt_source(d: int):
    return lambda prec: CertifiedReal.from_int(d, prec).sqrt()


def _scan_violations(theta_f: Fraction, psi_f: Fraction, c: float, rho: float,
                     x0: int, y_bound: float) -> list[tuple[int, int]]:
    """Exhaustive check of the reduction conclusion on a rational proxy grid:
    any |x1| <= X0 with Y = min(X, log(c/|Lambda|)/rho) >= y_bound violates."""
    bad = []
    for x1 in range(-x0, x0 + 1):
        # Lambda / theta2 = psi - x1 theta + x2; nearest integer x2 minimizes
        frac = psi_f - x1 * theta_f
        x2 = -round(frac)
        lam = float(frac + x2)
        big_x = max(abs(x1), abs(x2))
        if big_x > x0 or big_x < 1:
            continue
        y_max = math.log(c / abs(lam)) / rho if lam else float("inf")
        if min(big_x, y_max) >= y_bound + 1e-9:
            bad.append((x1, x2))
    return bad


@pytest.mark.parametrize("d,psi_num,psi_den,x0", [
    (2, 1, 3, 100), (3, 2, 7, 150), (5, 5, 11, 200), (7, 1, 9, 75),
])
def test_inhomogeneous_sound_against_scan(d, psi_num, psi_den, x0):
    c, rho = Fraction(1), Fraction(1)
    theta = _sqrt_source(d)
    psi = Fraction(psi_num, psi_den)
    cf = continued_fraction(theta, q_threshold=x0, extra_terms=34,
                            start_precision=512)
    prob = ReductionProblem(c, rho, theta, x0, psi=psi, theta2_abs=ln10)
    t, y = reduce_inhomogeneous(prob, cf)
    assert cf.convergents[t][1] > x0
    # high-accuracy rational proxies for the scan
    theta_f = Fraction(float_up(theta(192))).limit_denominator(10 ** 15)
    bad = _scan_violations(theta_f, psi, float(c), float(rho), x0, y)
    assert bad == []


def test_inhomogeneous_failure_exhausts():
    # psi = 0 keeps ||q psi|| = 0 for every convergent: hypothesis never holds
    theta = _sqrt_source(2)
    cf = continued_fraction(theta, q_threshold=50, extra_terms=34,
                            start_precision=512)
    prob = ReductionProblem(Fraction(1), Fraction(1), theta, 50,
                            psi=Fraction(0), theta2_abs=ln10)
    with pytest.raises(ReductionFailure):
        reduce_inhomogeneous(prob, cf)


def test_linearization_examples():
    pairs = [(Fraction("0.183"), Fraction("18.3"), 20.22),
             (Fraction("0.19"), Fraction(19), 21.1),
             (Fraction("0.46"), Fraction(452), 606.0),
             (Fraction("0.01"), Fraction(22), 22.12)]
    for a, scale, printed in pairs:
        f = linearization_factor(a)
        scaled = f * float(scale)
        assert scaled <= printed
        assert scaled > printed * 0.99
    assert linearization_factor(Fraction("0.183")) == pytest.approx(1.10446, abs=2e-4)
    with pytest.raises(ValueError):
        linearization_factor(Fraction(1))
    with pytest.raises(ValueError):
        linearization_factor(Fraction(0))


def test_linearization_second_inequality_grid():
    # |x| < a/(1 - e^-a) |e^x - 1| on a grid of |x| < a < 1
    for a in (0.1, 0.3, 0.5, 0.7, 0.9):
        factor = a / (1 - math.exp(-a))
        for t in range(-9, 10):
            x = a * t / 10
            if x == 0:
                continue
            assert abs(x) < factor * abs(math.exp(x) - 1) + 1e-15


@given(st.integers(min_value=2, max_value=50))
@settings(max_examples=20)
def test_sqrt_cf_reproducible(d):
    root = math.isqrt(d)
    if root * root == d:
        return
    a = continued_fraction(_sqrt_source(d), depth=25, start_precision=256)
    b = continued_fraction(_sqrt_source(d), depth=25, start_precision=512)
    assert a.quotients == b.quotients
