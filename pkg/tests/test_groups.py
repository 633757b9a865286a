from itertools import combinations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import automorphisms, endomorphisms_count, orbits_of, posets
from orbitlock.enumerator import enumerate_posets
from orbitlock.errors import CapExceeded, EmptySubset, NotAnAntichainPartition
from orbitlock.groups import (PermGroup, alpha_restriction_count, automorphism_group, automorphism_group_respecting,
                              compose, endo_lower_bound_check, endomorphism_count, endomorphism_count_respecting,
                              endomorphism_floor, fixed_off_antichain_check, has_twins, inverse, is_automorphism)
from orbitlock.poset import antichain, chain, chains2, crown, from_cover_pairs, standard_example


def test_antichain_group_is_symmetric():
    G = automorphism_group(antichain(5))
    assert G.order == 120 == G.chain_order()


def test_chain_is_rigid():
    assert automorphism_group(chain(6)).order == 1


def test_crown_group():
    G = automorphism_group(crown(4))
    assert G.order == 8
    assert len(G.orbits()) == 2
    assert not G.fixed_points()


def test_cap():
    with pytest.raises(CapExceeded):
        automorphism_group(antichain(10), cap=8)
    with pytest.raises(CapExceeded):
        endomorphism_count(antichain(10), cap=8)


def test_not_antichain_partition():
    with pytest.raises(NotAnAntichainPartition):
        automorphism_group_respecting(chain(2), [[0, 1]])
    with pytest.raises(NotAnAntichainPartition):
        automorphism_group_respecting(antichain(3), [[0, 1]])


def test_respecting_subgroup_of_crown():
    P = crown(4)
    H = automorphism_group_respecting(P, [[0, 1], [2, 3], [4, 5], [6, 7]])
    assert automorphism_group(P).order % H.order == 0


def test_alpha_empty_subset():
    with pytest.raises(EmptySubset):
        alpha_restriction_count(chain(2), [])


def test_alpha_on_standard_example():
    P = standard_example(4)
    assert alpha_restriction_count(P, range(4)) == 24


def test_end_small_values():
    assert endomorphism_count(chain(3)) == 10
    assert endomorphism_count(antichain(3)) == 27
    assert endomorphism_count(antichain(0)) == 1


def test_end_floor_crown():
    P = crown(4)
    N = endomorphism_floor(P)
    assert N ** 2 >= 2 ** 8 > (N - 1) ** 2
    assert endo_lower_bound_check(P)


def test_group_element_listing_and_membership():
    G = automorphism_group(standard_example(3))
    elements = set(G.elements())
    assert len(elements) == G.order == 6
    for g in elements:
        assert G.contains(g)
        assert G.contains(compose(g, inverse(g)))
    assert not G.contains((1, 0, 2, 3, 4, 5))


def test_stabilizer_chain_from_redundant_generators():
    gens = [(1, 2, 3, 0), (3, 0, 1, 2), (1, 0, 2, 3), (0, 1, 3, 2)]
    assert PermGroup(4, gens).chain_order() == 24


def test_twins():
    P = from_cover_pairs(3, [(0, 2), (1, 2)])
    assert has_twins(P, [0, 1])
    assert not has_twins(chains2(2), [0, 1])


@settings(max_examples=120, deadline=None)
@given(posets(max_n=7))
def test_automorphism_count_matches_permutation_search(P):
    brute = automorphisms(P)
    G = automorphism_group(P, cap=None)
    assert G.order == len(brute) == G.chain_order()
    assert {frozenset(o) for o in G.orbits()} == set(orbits_of(P.n, brute))
    for g in G.generators:
        assert is_automorphism(P, g)


@settings(max_examples=80, deadline=None)
@given(posets(max_n=6))
def test_endomorphism_count_matches_map_search(P):
    assert endomorphism_count(P) == endomorphisms_count(P)


@settings(max_examples=80, deadline=None)
@given(posets(min_n=1, max_n=6), st.randoms(use_true_random=False))
def test_structured_counts_match_and_nest(P, rnd):
    orbits = automorphism_group(P, cap=None).orbits()
    blocks = []
    for o in orbits:
        items = sorted(o)
        rnd.shuffle(items)
        cut = rnd.randint(1, len(items))
        blocks += [b for b in (items[:cut], items[cut:]) if b]
    aut_d = automorphism_group_respecting(P, blocks, cap=None).order
    end_d = endomorphism_count_respecting(P, blocks, cap=None)
    assert aut_d == len(automorphisms(P, blocks))
    assert end_d == endomorphisms_count(P, blocks)
    aut = automorphism_group(P, cap=None).order
    assert aut % aut_d == 0
    assert aut_d <= end_d <= endomorphism_count(P) and aut <= endomorphism_count(P)


@settings(max_examples=80, deadline=None)
@given(posets(min_n=1, max_n=6), st.data())
def test_alpha_counts_distinct_restrictions(P, data):
    subset = data.draw(st.sets(st.integers(0, P.n - 1), min_size=1))
    brute = {tuple(g[x] for x in sorted(subset)) for g in automorphisms(P)}
    assert alpha_restriction_count(P, subset, cap=None) == len(brute)


def _antichains(P):
    for r in range(2, P.n + 1):
        for A in combinations(range(P.n), r):
            if P.is_antichain(A):
                yield A


@pytest.mark.parametrize("n", range(1, 6))
def test_automorphisms_agreeing_off_a_twin_free_antichain_coincide(n):
    """For every pair of automorphisms mapping A to itself and agreeing off A."""
    for P in enumerate_posets(n):
        auts = automorphisms(P)
        for A in _antichains(P):
            if has_twins(P, A):
                continue
            inside = set(A)
            keep = [g for g in auts if {g[a] for a in A} == inside]
            for g, h in combinations(keep, 2):
                assert any(g[x] != h[x] for x in range(n) if x not in inside)
            assert fixed_off_antichain_check(P, A)


def test_end_floor_for_every_small_poset():
    for n in range(1, 6):
        for P in enumerate_posets(n):
            h = P.height
            assert endomorphisms_count(P) ** (h + 1) >= 2 ** (h * n)


def test_end_floor_boundary_values():
    assert endomorphism_floor(chain(1)) == 1
    assert endomorphism_floor(chain(2)) == 2
    assert factorial(5) ** 2 >= 2 ** 10
