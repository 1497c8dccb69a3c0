"""Campaign drivers: search, table verification, and both reduction sweeps."""

import math

import pytest

from pellrep import config as cfg
from pellrep.bigseq import pell_lucas_term
from pellrep.prover import (
    exhaustive_search,
    fibonacci_overlap_flags,
    large_k_campaign,
    small_k_campaign,
    small_k_reduce,
    verify_solution_table,
)


@pytest.fixture(scope="module")
def desk_search():
    return exhaustive_search((3, 30), (1, 40))


def test_search_hit_pattern(desk_search):
    hits = {(r.k, r.n) for r in desk_search}
    for k in range(3, 31):
        for n in (1, 2, 3, 4):
            assert (k, n) in hits
        assert ((k, 5) in hits) == (k >= 5)
        assert ((k, 7) in hits) == (k == 4)
    assert all(n in (1, 2, 3, 4, 5, 7) for (_, n) in hits)


def test_search_is_ordered_and_exact(desk_search):
    keys = [(r.k, r.n) for r in desk_search]
    assert keys == sorted(keys)
    for r in desk_search:
        assert r.value == pell_lucas_term(r.k, r.n)
        for d in r.decompositions:
            assert d.first.value * d.second.value == r.value


def test_search_specific_records(desk_search):
    by_kn = {(r.k, r.n): r for r in desk_search}
    q74 = by_kn[(4, 7)]
    assert q74.value == 726
    assert {str(d) for d in q74.decompositions} == {"11*66", "22*33"}
    assert (3, 6) not in by_kn  # 260 has no repdigit-pair factorization


def test_search_window_annotation():
    recs = exhaustive_search((4, 4), (7, 7), window_check=True)
    assert len(recs) == 1 and recs[0].window_ok is True


def test_search_validation():
    with pytest.raises(ValueError):
        exhaustive_search((1, 5), (1, 10))
    with pytest.raises(ValueError):
        exhaustive_search((3, 5), (0, 10))


def test_table_statuses(desk_search):
    cmp = verify_solution_table(desk_search, 3, 30, 40)
    by_label = {r.label: r for r in cmp.rows}
    assert by_label["Q1"].status == "match"
    assert by_label["Q2"].status == "match"
    assert by_label["Q3"].status == "value-typo"
    assert by_label["Q3"].value_typos == ["8*1=8!=16"]
    assert by_label["Q4k3"].status == "match"
    assert by_label["Q4"].status == "match"
    assert by_label["Q5"].status == "range-mismatch"
    assert by_label["Q5"].mismatched_k == [3, 4]
    assert by_label["Q7"].status == "match"
    assert len(cmp.issues) == 2
    assert cmp.extras == []


def test_table_detects_extras():
    recs = exhaustive_search((3, 6), (1, 10))
    fake = recs + [recs[0].__class__(99, 2, 6, recs[0].decompositions)]
    cmp = verify_solution_table(fake, 3, 6, 10)
    assert any("extra" in i for i in cmp.issues)


def test_small_k_reduce_k3():
    row = small_k_reduce(3, cfg.SmallKConfig())
    assert row.failures == []
    assert len(row.l_pair_bounds) == 81  # all digit pairs attempted
    assert 1 <= row.l_max <= 118
    assert 1 <= row.m_max <= 118
    assert row.n_max <= 790
    assert row.x0 == int(5.1e29 * 3 ** 9 * math.log(3) ** 5) or row.x0 > 0
    assert all(b <= row.l_bound for b in row.l_pair_bounds)


def test_small_k_campaign_multiple():
    rows = small_k_campaign([3, 4], cfg.SmallKConfig(workers=2))
    assert [r.k for r in rows] == [3, 4]
    assert all(not r.failures for r in rows)


def test_small_k_campaign_rejects_out_of_range():
    with pytest.raises(ValueError):
        small_k_campaign([2])
    with pytest.raises(ValueError):
        small_k_campaign([641])


@pytest.fixture(scope="module")
def large_ledger():
    return large_k_campaign(cfg.LargeKConfig())


def test_large_k_reaches_contradiction(large_ledger):
    assert large_ledger.contradiction
    assert large_ledger.final_k_bound <= 640
    assert len(large_ledger.passes) <= 3


def test_large_k_pass_structure(large_ledger):
    first = large_ledger.passes[0]
    assert first.x0 == cfg.LARGE_K_X0_FIRST
    assert first.l_max <= 363
    assert first.k_bound == max(first.case1_k, first.case2_k)
    # ceilings strictly decrease pass over pass
    for prev, cur in zip(large_ledger.passes, large_ledger.passes[1:]):
        assert cur.x0 < prev.x0
        assert cur.k_bound < prev.k_bound


def test_large_k_bounds_tighten_with_precision(large_ledger):
    """Upward-rounded bounds can only tighten when precision doubles."""
    sharper = large_k_campaign(cfg.LargeKConfig(cf_precision_start=8192))
    for a, b in zip(sharper.passes, large_ledger.passes):
        assert a.k_bound <= b.k_bound
        assert a.lambda_bound <= b.lambda_bound + 1e-6


def test_fibonacci_overlap_flags():
    flags = fibonacci_overlap_flags(range(2, 11))
    assert len(flags) == 9
    assert all(f.severity == "mismatch" for f in flags)
