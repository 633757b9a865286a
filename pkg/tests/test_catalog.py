from fractions import Fraction
from itertools import product
from math import factorial

import pytest

from oracles import automorphisms, endomorphisms_count
from orbitlock.catalog import (NAMED_CONFIGURATIONS, build_catalog, capped, crown8_locked, dual_structured,
                               forbidden_configuration_match, is_max_locked, maxlocked_h1, rank_pair_kinds,
                               stacked_max_locked, structured_form, structured_isomorphic,
                               verify_max_locked_structure)
from orbitlock.errors import NotMaxLocked
from orbitlock.groups import automorphism_group, endomorphism_count_respecting
from orbitlock.poset import antichain, chain, chains2, crown, standard_example
from orbitlock.structure import StructuredPoset

# (elements, |Aut_D|, |End_D|) from the map-enumeration oracle in oracles.py
FROZEN = {
    "2C3": (6, 2, 4), "2C3star": (6, 2, 4), "2V": (6, 2, 4),
    "hat2V": (8, 4, 16), "bar2V": (8, 4, 16),
    "tildeS4": (10, 8, 544),
    "hatC8": (10, 8, 96), "barC8": (10, 8, 96),
    "hat4C2": (10, 8, 64), "bar4C2": (10, 8, 64),
    "hatS4": (10, 8, 1100), "barS4": (10, 8, 1100),
    "C8": (8, 8, 288),
}


def test_thirteen_names():
    assert set(NAMED_CONFIGURATIONS) == set(FROZEN)


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_named_values(name):
    S = NAMED_CONFIGURATIONS[name]()
    n, aut, end = FROZEN[name]
    assert S.n == n
    assert S.group.order == aut == S.group.chain_order()
    assert endomorphism_count_respecting(S.poset, S.structure.blocks, cap=None) == end
    assert Fraction(aut, end) <= Fraction(3, 4)


@pytest.mark.parametrize("name", [k for k, v in FROZEN.items() if v[0] <= 8])
def test_small_named_values_against_oracle(name):
    S = NAMED_CONFIGURATIONS[name]()
    _, aut, end = FROZEN[name]
    assert len(automorphisms(S.poset, S.structure.blocks)) == aut
    assert endomorphisms_count(S.poset, S.structure.blocks) == end


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_named_are_tight_unions(name):
    S = NAMED_CONFIGURATIONS[name]()
    assert S.tight and S.is_iou
    assert forbidden_configuration_match(S) == name
    assert forbidden_configuration_match(dual_structured(S)) == name


def test_two_chains_star_is_max_locked_under_width_two_rule():
    S = NAMED_CONFIGURATIONS["2C3star"]()
    assert S.width == 2 and S.group.order == 2
    assert S.max_locked and not S.flexible


@pytest.mark.parametrize("base", ["2V", "C8", "4C2", "S4"])
def test_capping_above_and_below_differ_even_up_to_duality(base):
    hat, bar = capped(base, True), capped(base, False)
    assert structured_form(hat) != structured_form(bar)
    assert not structured_isomorphic(hat, bar, allow_dual=True)
    flip = tuple(reversed(range(hat.n)))
    moved = StructuredPoset(hat.poset.relabel(flip), [[flip[x] for x in b] for b in hat.structure.blocks])
    assert structured_isomorphic(hat, moved)


def test_locked_crown():
    S = crown8_locked()
    aut = S.group.order
    assert aut == endomorphism_count_respecting(S.poset, S.structure.blocks, cap=None)
    assert aut == endomorphisms_count(S.poset, S.structure.blocks)


def test_catalog_height_one_entries():
    names = [e.name for e in build_catalog(5) if e.family == "maxlocked_h1"]
    assert names == ["maxlocked_h1(2,C2)", "maxlocked_h1(3,S)", "maxlocked_h1(3,C2)", "maxlocked_h1(4,S)",
                     "maxlocked_h1(4,C2)", "maxlocked_h1(5,S)", "maxlocked_h1(5,C2)"]
    for e in build_catalog(5):
        if e.family == "maxlocked_h1":
            assert e.model.max_locked
            assert forbidden_configuration_match(e.model) == e.name


def test_max_locked_recognition():
    assert is_max_locked(standard_example(4))
    assert is_max_locked(chains2(3))
    assert not is_max_locked(crown(4))
    assert not is_max_locked(chain(3))
    # the definition has no height requirement, so a bare antichain qualifies
    assert is_max_locked(antichain(3))
    assert not is_max_locked(antichain(1))
    with pytest.raises(NotMaxLocked):
        verify_max_locked_structure(crown(4))
    with pytest.raises(ValueError):
        maxlocked_h1(3, "X")


@pytest.mark.parametrize("w", [3, 4, 5])
@pytest.mark.parametrize("height", [1, 2, 3])
def test_stacks(w, height):
    for kinds in product(["S", "C2"], repeat=height):
        P = stacked_max_locked(w, kinds)
        assert automorphism_group(P, cap=None).order == factorial(w)
        assert rank_pair_kinds(P) == list(kinds)
        assert verify_max_locked_structure(P)


@pytest.mark.parametrize("w", [2, 3, 4])
def test_height_one_endomorphism_floors(w):
    C = StructuredPoset.natural(chains2(w))
    assert endomorphism_count_respecting(C.poset, C.structure.blocks, cap=None) >= w ** w
    if w >= 3:
        S = StructuredPoset.natural(standard_example(w))
        assert endomorphism_count_respecting(S.poset, S.structure.blocks, cap=None) >= (w - 1) ** w
