"""Exact sequence and repdigit layer."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellrep.bigseq import (
    Repdigit,
    SequenceTable,
    as_repdigit,
    fibonacci,
    fibonacci_overlap,
    pell_lucas_term,
    repdigit_product_decompositions,
    repdigit_value,
)


def naive_term(k: int, n: int) -> int:
    """Independent recomputation straight from the definition."""
    terms = {i: 0 for i in range(-(k - 2), 0)}
    terms[0] = terms[1] = 2
    for i in range(2, n + 1):
        terms[i] = 2 * terms[i - 1] + sum(terms[i - j] for j in range(2, k + 1))
    return terms[n]


@pytest.mark.parametrize("k,n,expected", [
    (3, 2, 6), (3, -1, 0), (4, 7, 726), (3, 5, 102), (2, 2, 6), (5, 5, 110),
])
def test_term_examples(k, n, expected):
    assert pell_lucas_term(k, n) == expected


def test_recurrence_against_naive_window():
    for k in range(2, 21):
        for n in range(2, 61):
            assert pell_lucas_term(k, n) == naive_term(k, n)


def test_terms_are_positive_even_for_nonnegative_index():
    for k in range(2, 21):
        for n in range(0, 61):
            q = pell_lucas_term(k, n)
            assert q > 0 and q % 2 == 0


def test_index_below_domain_raises():
    with pytest.raises(ValueError):
        pell_lucas_term(3, -2)
    with pytest.raises(ValueError):
        SequenceTable(1)


@pytest.mark.parametrize("n,expected", [(0, 0), (10, 55), (8, 21), (1, 1)])
def test_fibonacci(n, expected):
    assert fibonacci(n) == expected


@pytest.mark.parametrize("a,l,expected", [(5, 2, 55), (1, 1, 1), (9, 3, 999)])
def test_repdigit_value(a, l, expected):
    assert repdigit_value(a, l) == expected
    assert str(Repdigit(l, a)) == str(a) * l


def test_repdigit_validation():
    with pytest.raises(ValueError):
        repdigit_value(0, 1)
    with pytest.raises(ValueError):
        repdigit_value(10, 1)
    with pytest.raises(ValueError):
        repdigit_value(5, 0)


def test_as_repdigit():
    assert as_repdigit(666) == Repdigit(3, 6)
    assert as_repdigit(198) is None
    assert as_repdigit(2) == Repdigit(1, 2)
    with pytest.raises(ValueError):
        as_repdigit(0)


@pytest.mark.parametrize("n,expected", [
    (726, {"11*66", "22*33"}),
    (16, {"2*8", "4*4"}),
    (10, {"2*5"}),
    (110, {"2*55", "5*22"}),
    (260, set()),
])
def test_decomposition_examples(n, expected):
    assert {str(d) for d in repdigit_product_decompositions(n)} == expected


def all_repdigit_pairs_up_to(limit: int):
    """Oracle: every canonical repdigit pair with product < limit."""
    reps = [Repdigit(l, a) for l in range(1, len(str(limit)) + 1)
            for a in range(1, 10) if repdigit_value(a, l) < limit]
    table: dict[int, set[str]] = {}
    for i, r in enumerate(reps):
        for s in reps[i:]:
            if (r.length, r.digit) > (s.length, s.digit):
                r, s = s, r
            p = r.value * s.value
            if p < limit:
                table.setdefault(p, set()).add(f"{r}*{s}")
    return table


def test_decomposition_complete_below_one_million():
    oracle = all_repdigit_pairs_up_to(10 ** 6)
    for value, expected in oracle.items():
        assert {str(d) for d in repdigit_product_decompositions(value)} == expected
    # spot non-products stay empty (products removed from a dense range)
    for n in range(1, 5000):
        if n not in oracle:
            assert repdigit_product_decompositions(n) == []


@given(st.integers(min_value=1, max_value=10 ** 6))
@settings(max_examples=300)
def test_decomposition_matches_divisor_scan(n):
    found = set()
    for v in range(1, math.isqrt(n) + 1):
        if n % v == 0:
            r1, r2 = as_repdigit(v), as_repdigit(n // v)
            if r1 and r2:
                found.add(f"{r1}*{r2}")
    assert {str(d) for d in repdigit_product_decompositions(n)} == found


@given(st.integers(min_value=1, max_value=10 ** 12))
@settings(max_examples=300)
def test_digit_count_pruning_soundness(n):
    d = len(str(n))
    for dec in repdigit_product_decompositions(n):
        assert dec.first.length + dec.second.length in (d, d + 1)
        assert dec.first.value * dec.second.value == n
        assert (dec.first.length, dec.first.digit) <= (dec.second.length,
                                                       dec.second.digit)


@pytest.mark.parametrize("k,n_max,extent,residual", [
    (3, 10, 3, -2), (5, 10, 5, -2), (2, 10, 2, -2),
])
def test_fibonacci_overlap_examples(k, n_max, extent, residual):
    ov = fibonacci_overlap(k, n_max)
    assert ov.extent == extent
    assert ov.residual == residual


def test_fibonacci_overlap_law():
    for k in range(2, 31):
        ov = fibonacci_overlap(k, 2 * k)
        assert ov.extent == k
        assert ov.first_failure == k + 1
        assert ov.residual == -2
        assert pell_lucas_term(k, k + 1) == 2 * fibonacci(2 * k + 2) - 2
