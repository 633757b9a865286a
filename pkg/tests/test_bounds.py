from dataclasses import replace
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitlock.bounds import (FACTPROD_EQUALITY, TWOBAD_TABLES, BoundCertificate, Ordering, adequate_budget,
                              check_table_row, divisor_inequality_check, factorial_product_compare,
                              factorial_vector, find_certificate, induction_budget, is_factprod_exception,
                              ratio_report, verify_allowedconf, verify_combination_rules, width_constant_checks)
from orbitlock.catalog import NAMED_CONFIGURATIONS, stacked_max_locked
from orbitlock.enumerator import enumerate_flexible_tight_ious_upto, enumerate_posets
from orbitlock.errors import BadDivisor, BadVector, NotFlexibleTightIOU
from orbitlock.poset import antichain, chain, chains2, crown
from orbitlock.structure import StructuredPoset, all_prune_decompositions


def test_factorial_product_examples():
    assert factorial_product_compare((2, 2, 3)) is Ordering.EQ
    assert factorial_product_compare((3, 5)) is Ordering.EQ
    assert factorial_product_compare((2, 2, 2, 2)) is Ordering.LT
    assert factorial_product_compare((3, 3)) is Ordering.GT


@pytest.mark.parametrize("b", [(2,), (1, 3), (3, 2), ()])
def test_bad_vectors(b):
    with pytest.raises(BadVector):
        factorial_product_compare(b)


def _slow_compare(b):
    # multiply the quotient one factor at a time instead of forming both sides
    q = Fraction(1)
    for x in b:
        for i in range(2, x + 1):
            q *= i
    for i in range(2, sum(b) - len(b) + 1):
        q /= i
    return Ordering.LT if q < 1 else Ordering.EQ if q == 1 else Ordering.GT


def test_factorial_product_sweep_against_quotients():
    exceptions = set()
    for total in range(4, 21):
        for m in range(2, total // 2 + 1):
            for b in combinations_with_replacement(range(2, total + 1), m):
                if sum(b) != total:
                    continue
                got = factorial_product_compare(b)
                assert got is _slow_compare(b)
                if got is not Ordering.LT:
                    exceptions.add(b)
    listed = {b for b in exceptions if is_factprod_exception(b)}
    assert exceptions - listed == set(FACTPROD_EQUALITY)


def test_divisor_inequality():
    assert divisor_inequality_check(6, 2) and divisor_inequality_check(6, 3)
    for n in range(6, 61):
        for k in range(2, n):
            if n % k == 0:
                assert factorial(k) * factorial(n // k) ** k < factorial(n - 1)
                assert divisor_inequality_check(n, k)


@pytest.mark.parametrize("n,k", [(5, 5), (6, 4), (6, 1), (6, 6), (4, 2)])
def test_bad_divisors(n, k):
    with pytest.raises(BadDivisor):
        divisor_inequality_check(n, k)


def test_width_constants():
    assert all(width_constant_checks().values())


def _brute_min_sum(target, budget, w):
    best = None
    for m in range(0, budget // 2 + 1):
        for v in combinations_with_replacement(range(2, w), m):
            if sum(v) <= budget and prod(factorial(x) for x in v) >= target:
                if best is None or sum(v) < best:
                    best = sum(v)
    return best


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000), st.integers(0, 14), st.integers(2, 7))
def test_factorial_vector_is_optimal(target, budget, w):
    got = factorial_vector(target, budget, w)
    want = _brute_min_sum(target, budget, w)
    if want is None:
        assert got is None
    else:
        assert got is not None and sum(got) == want
        assert prod(factorial(x) for x in got) >= target
        assert all(2 <= x <= w - 1 for x in got)


def test_certificate_validity():
    c = BoundCertificate(4, 0, (3, 2), 5)
    assert c.product == 12
    assert c.is_valid(12) and not c.is_valid(13)
    assert not BoundCertificate(3, 0, (3,), 5).is_valid(1)
    assert not BoundCertificate(5, 0, (4, 3), 6).is_valid(1)
    assert c.to_json()["product"] == "12"


def test_crown_needs_offset_four():
    S = NAMED_CONFIGURATIONS["C8"]()
    assert adequate_budget(S.n, len(S.structure), 0) == 3
    assert find_certificate(S, 4, 0) is None
    assert find_certificate(S, 4, 3) is None
    cert = find_certificate(S, 4, 4)
    assert cert is not None and cert.is_valid(8)


def test_two_chains_need_offset_one():
    S = NAMED_CONFIGURATIONS["2C3"]()
    assert find_certificate(S, 3, 0) is None
    assert find_certificate(S, 3, 1).is_valid(2)


@pytest.mark.parametrize("w,kinds", [(3, ("S", "S")), (4, ("C2", "S")), (5, ("S", "C2", "S"))])
def test_max_locked_stack_certificate(w, kinds):
    S = StructuredPoset.natural(stacked_max_locked(w, kinds))
    cert = find_certificate(S, max(w, 5) + 1, 0)
    assert cert is not None and cert.route == "max-locked" and cert.w_values == (w,)


def test_three_by_two_route_is_not_used_for_short_stacks():
    S = StructuredPoset.natural(chains2(2))
    cert = find_certificate(S, 5, 0)
    assert cert is None or cert.route != "max-locked"


def _small_ious():
    return list(enumerate_flexible_tight_ious_upto(8))


def test_induction_budget_formula():
    for S in _small_ious():
        for pd in all_prune_decompositions(S):
            blocks = S.structure.blocks
            parts = (sum(len(blocks[i]) - 1 for i in pd.others)
                     + len(blocks[pd.removed]) - len(pd.separation)
                     + sum(len(blocks[j]) - len(pd.autonomous_antichains[j]) for j in pd.adjacent))
            for q in range(3):
                assert induction_budget(pd, q) == (parts + q) // 2


def test_induction_budget_vanishes_when_nothing_merges():
    seen = 0
    for S in _small_ious():
        for pd in all_prune_decompositions(S):
            if pd.others or len(pd.separation) != len(pd.removed_block):
                continue
            if any(len(a) > 1 for j in pd.adjacent for a in pd.autonomous_antichains[j]):
                continue
            assert induction_budget(pd, 0) == 0
            seen += 1
    assert seen


def test_combination_rules_on_small_ious():
    for S in _small_ious():
        if len(S.structure) < 3:
            continue
        for pd in all_prune_decompositions(S):
            for o in (0, 1):
                for q in range(len(pd.removed_block)):
                    assert verify_combination_rules(S, pd.removed, o, q, component=pd.component)


def test_certificate_check_refuses_non_flexible():
    with pytest.raises(NotFlexibleTightIOU):
        verify_allowedconf(StructuredPoset.natural(chains2(3)))


@pytest.mark.parametrize("row", TWOBAD_TABLES, ids=lambda r: f"t{r.table}-{r.aut_q1}-{r.aut_q2}")
def test_table_rows(row):
    assert check_table_row(row)


def test_table_row_detects_tampering():
    row = TWOBAD_TABLES[0]
    assert not check_table_row(replace(row, budget=row.budget + 1))
    assert not check_table_row(replace(row, bound=(2,)))


def test_ratio_three_chains():
    r = ratio_report(chains2(3))
    assert [f.factor for f in r.factors] == [Fraction(6, 27)]
    assert r.inequality_holds


def test_ratio_crown_factor():
    r = ratio_report(crown(4))
    assert len(r.factors) == 1 and r.factors[0].factor <= Fraction(3, 4)
    assert r.inequality_holds


def test_ratio_rigid():
    P = chain(4)
    r = ratio_report(P)
    assert r.factors == [] and r.factor_product == 1
    assert r.ratio == Fraction(1, r.end) and r.end >= 2 ** 3
    assert ratio_report(antichain(0)).inequality_holds


def test_ratio_downgrades_under_cap():
    # the cap counts elements
    r = ratio_report(antichain(6), cap_end=5)
    assert not r.end_exact and r.inequality_holds is None
    assert r.factors[0].end is None and r.factor_product is None


def test_ratio_property_small():
    for n in range(1, 6):
        for P in enumerate_posets(n):
            assert ratio_report(P).inequality_holds
