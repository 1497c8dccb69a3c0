"""Dominant-root isolation and the certified growth/approximation estimates."""

import os
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellrep.bigseq import pell_lucas_term
from pellrep.interval import CertifiedReal, float_down, float_up
from pellrep.realalg import (
    AlgebraicContext,
    binet_residual,
    binet_weight,
    char_poly,
    check_growth_envelope,
    clear_root_cache,
    dominant_root,
    golden_approx_checks,
    golden_aux_facts,
    load_root_cache,
    phi_interval,
    save_root_cache,
    sqrt5,
)


def test_char_poly_examples():
    # 1 + sqrt 2 is the order-2 root
    pell_root = 1 + CertifiedReal.from_int(2, 128).sqrt()
    assert char_poly(2, pell_root).contains_zero()
    # exact rational point: 2.5^3 - 2*2.5^2 - 2.5 - 1 = -0.375
    val = char_poly(3, CertifiedReal.from_fraction(Fraction(5, 2), 128))
    assert float_down(val) <= -0.375 <= float_up(val)
    assert char_poly(3, dominant_root(3)).contains_zero()


def test_dominant_root_values():
    g2 = dominant_root(2, 256)
    sqrt2 = CertifiedReal.from_int(2, 300).sqrt()
    assert g2.overlaps(1 + sqrt2)
    g3 = dominant_root(3, 256)
    assert abs(float_up(g3) - 2.5468) < 1e-3
    g50 = dominant_root(50, 256)
    assert float_up(g50.width) < 1e-30


def test_root_bracket_certified_across_orders():
    # the full [2, 700] sweep runs in the acceptance suite; spot densely here
    for k in [2, 3, 5, 10, 50, 100, 250, 500, 700]:
        g = dominant_root(k, 256)
        phi = phi_interval(g.prec)
        phi_sq = phi * phi
        assert g.certainly_less(phi_sq)
        assert (phi_sq * (1 - phi.powi(-k))).certainly_less(g)
        assert char_poly(k, g).contains_zero()


def test_root_enclosure_narrows_with_precision():
    clear_root_cache()
    lo = dominant_root(17, 256)
    hi = dominant_root(17, 512)
    assert lo.lo <= hi.lo and hi.hi <= lo.hi
    assert hi.width <= lo.width


def test_binet_weight_window():
    for k in [2, 3, 7, 20, 100]:
        ctx = AlgebraicContext.create(k)
        w = ctx.g_gamma
        assert 0.276 < float_down(w) and float_up(w) < 0.5


def test_binet_weight_k2_exact_value():
    # at the order-2 root the weight simplifies to sqrt(2)/4
    g = dominant_root(2, 256)
    expected = CertifiedReal.from_int(2, 300).sqrt() / 4
    assert binet_weight(2, g).overlaps(expected)


def test_binet_weight_at_phi_squared():
    # g_k(phi^2) = 1/(phi + 2) independently of k
    phi = phi_interval(256)
    expected = 1 / (phi + 2)
    for k in (2, 5, 50):
        assert binet_weight(k, phi * phi).overlaps(expected)


def test_binet_residual_small_and_deep():
    ctx = AlgebraicContext.create(3)
    assert float_up(binet_residual(ctx, 0)) < 2
    assert float_up(binet_residual(ctx, 10)) < 2
    ctx4 = AlgebraicContext.create(4)
    r = binet_residual(ctx4, 7)
    direct = abs(726 - float((2 * ctx4.gamma - 2).center)
                 * float(ctx4.g_gamma.center) * float(ctx4.gamma.center) ** 7)
    assert abs(float_up(r) - direct) < 1e-6


def test_growth_envelope():
    ctx = AlgebraicContext.create(3)
    assert check_growth_envelope(ctx, 1)
    assert check_growth_envelope(ctx, 12)
    ctx10 = AlgebraicContext.create(10)
    assert check_growth_envelope(ctx10, 25)


def test_golden_approx_checks():
    ctx = AlgebraicContext.create(50)
    res = golden_approx_checks(ctx, 2)
    assert float_up(abs(res.xi)) < 1.25 / 1.618 ** 25
    ctx64 = AlgebraicContext.create(64)
    golden_approx_checks(ctx64, 60)
    with pytest.raises(ValueError):
        golden_approx_checks(ctx, 1)
    with pytest.raises(ValueError):
        golden_approx_checks(AlgebraicContext.create(49), 2)
    with pytest.raises(ValueError):
        golden_approx_checks(ctx, 10 ** 40)  # beyond phi^(k/2)


def test_golden_aux_facts():
    for k in (50, 60, 100):
        assert golden_aux_facts(k, 256)


def test_enclosure_soundness_against_rationals():
    @given(st.fractions(min_value=Fraction(2), max_value=Fraction(27, 10),
                        max_denominator=10 ** 9),
           st.integers(min_value=2, max_value=40))
    @settings(max_examples=60)
    def run(x, k):
        enc = CertifiedReal.from_fraction(x, 192)
        horner = char_poly(k, enc)
        exact = x ** k - 2 * x ** (k - 1) - sum(x ** j for j in range(k - 1))
        wide = CertifiedReal.from_fraction(exact, 256)
        assert horner.overlaps(wide)

    run()


def test_root_cache_file_roundtrip(tmp_path):
    path = os.path.join(tmp_path, "gamma.cache")
    dominant_root(11, 256)
    n = save_root_cache(path)
    assert n >= 1
    before = dominant_root(11, 256)
    clear_root_cache()
    assert load_root_cache(path) == n
    after = dominant_root(11, 256)
    assert after.overlaps(before)
    # loaded enclosure is no wider than a small outward pad of the original
    assert float_up(after.width) <= 4 * max(float_up(before.width), 1e-300)


def test_root_cache_rejects_other_version(tmp_path):
    path = os.path.join(tmp_path, "gamma.cache")
    with open(path, "w") as fh:
        fh.write("# pellrep-gamma-cache 0 mpfr=ancient\n1\t2\t0x1p+0\t0x1p-9\n")
    assert load_root_cache(path) == 0


def test_sqrt5_and_phi():
    s5 = sqrt5(128)
    prod = s5 * s5
    assert prod.lo <= 5 <= prod.hi
    phi = phi_interval(128)
    ident = phi * phi - phi - 1  # phi^2 = phi + 1
    assert ident.contains_zero()
