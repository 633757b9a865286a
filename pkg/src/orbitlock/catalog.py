"""Named forbidden configurations and max-locked ordered sets.

Thirteen small structured ordered sets, plus the height-one max-locked sets
S_w and wC_2, are the configurations that escape the adequate-bound argument.
``forbidden_configuration_match`` recognises them up to isomorphism and
duality, blocks included.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

from .errors import NotMaxLocked
from .groups import PermGroup, alpha_restriction_count, automorphism_group
from .poset import (Poset, chains2, crown, dual, from_cover_pairs, is_coconnected,
                    rank_decomposition, standard_example, width)
from .search import canonical_search
from .structure import StructuredPoset


def _named(names: Sequence[str], covers: Iterable[tuple[str, str]],
           blocks: Iterable[Iterable[str]]) -> StructuredPoset:
    idx = {name: i for i, name in enumerate(names)}
    P = from_cover_pairs(len(names), [(idx[a], idx[b]) for a, b in covers])
    return StructuredPoset(P, [[idx[x] for x in b] for b in blocks])


def two_chains3() -> StructuredPoset:
    """Two disjoint 3-chains, each level a block."""
    return _named(["a1", "a2", "a3", "b1", "b2", "b3"],
                  [("a1", "a2"), ("a2", "a3"), ("b1", "b2"), ("b2", "b3")],
                  [["a1", "b1"], ["a2", "b2"], ["a3", "b3"]])


def two_chains3_star() -> StructuredPoset:
    """Two 3-chains whose bottoms lie below both tops."""
    return _named(["b1", "b2", "m1", "m2", "t1", "t2"],
                  [("b1", "m1"), ("m1", "t1"), ("b2", "m2"), ("m2", "t2"), ("b1", "t2"), ("b2", "t1")],
                  [["b1", "b2"], ["m1", "m2"], ["t1", "t2"]])


def two_vees() -> StructuredPoset:
    """Two disjoint V shapes; matching arms of the two Vs form the top blocks."""
    return _named(["b1", "b2", "p1", "p2", "q1", "q2"],
                  [("b1", "p1"), ("b1", "q1"), ("b2", "p2"), ("b2", "q2")],
                  [["b1", "b2"], ["p1", "p2"], ["q1", "q2"]])


def tilde_s4() -> StructuredPoset:
    names = ["b1", "b2", "b3", "b4", "m1", "m2", "t1", "t2", "t3", "t4"]
    covers = [("b1", "m2"), ("b2", "m2"), ("m2", "t3"), ("m2", "t4"),
              ("b3", "m1"), ("b4", "m1"), ("m1", "t1"), ("m1", "t2"),
              ("b1", "t2"), ("b2", "t1"), ("b3", "t4"), ("b4", "t3")]
    return _named(names, covers, [["b1", "b2", "b3", "b4"], ["m1", "m2"], ["t1", "t2", "t3", "t4"]])


def _four_top_bases() -> dict[str, tuple[list[str], list[tuple[str, str]]]]:
    """Bottoms and covers of 2V, 4C2, S4 and C8 with tops t1..t4 labelled so that
    t1, t3 and t2, t4 have no common lower bound where that matters."""
    bottoms4 = ["b1", "b2", "b3", "b4"]
    return {
        "2V": (["b1", "b2"], [("b1", "t1"), ("b1", "t2"), ("b2", "t3"), ("b2", "t4")]),
        "4C2": (bottoms4, [(f"b{i}", f"t{i}") for i in range(1, 5)]),
        "S4": (bottoms4, [(f"b{i}", f"t{j}") for i in range(1, 5) for j in range(1, 5) if i != j]),
        "C8": (bottoms4, [("b1", "t1"), ("b2", "t1"), ("b2", "t2"), ("b3", "t2"),
                          ("b3", "t3"), ("b4", "t3"), ("b4", "t4"), ("b1", "t4")]),
    }


def capped(base: str, above: bool) -> StructuredPoset:
    """Add a1 over (or under) t1, t3 and a2 over (or under) t2, t4."""
    bottoms, covers = _four_top_bases()[base]
    tops = ["t1", "t2", "t3", "t4"]
    extra = [("a1", t) for t in ("t1", "t3")] + [("a2", t) for t in ("t2", "t4")]
    if above:
        extra = [(t, a) for a, t in extra]
    names = bottoms + tops + ["a1", "a2"]
    return _named(names, covers + extra, [bottoms, tops, ["a1", "a2"]])


def crown8() -> StructuredPoset:
    return StructuredPoset.natural(crown(4))


def crown8_locked() -> StructuredPoset:
    """8-crown with blocks that pin every endomorphism to an automorphism."""
    names = ["b1", "b2", "b3", "b4", "t1", "t2", "t3", "t4"]
    covers = [(f"b{i}", f"t{i}") for i in range(1, 5)] + [("b1", "t3"), ("b2", "t4"), ("b4", "t1"), ("b3", "t2")]
    return _named(names, covers, [["t1", "t2"], ["t3", "t4"], ["b1", "b2"], ["b3", "b4"]])


NAMED_CONFIGURATIONS = {
    "2C3": two_chains3,
    "2C3star": two_chains3_star,
    "2V": two_vees,
    "hat2V": lambda: capped("2V", True),
    "bar2V": lambda: capped("2V", False),
    "tildeS4": tilde_s4,
    "hatC8": lambda: capped("C8", True),
    "barC8": lambda: capped("C8", False),
    "hat4C2": lambda: capped("4C2", True),
    "bar4C2": lambda: capped("4C2", False),
    "hatS4": lambda: capped("S4", True),
    "barS4": lambda: capped("S4", False),
    "C8": crown8,
}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    model: StructuredPoset
    family: str = "named"      # "named" or "maxlocked_h1"

    @property
    def elements(self) -> int:
        return self.model.n

    @property
    def orbit_count(self) -> int:
        return len(self.model.structure)


def maxlocked_h1(w: int, kind: str) -> StructuredPoset:
    if kind == "S":
        P = standard_example(w)
    elif kind == "C2":
        P = chains2(w)
    else:
        raise ValueError(f"unknown height-one family {kind!r}")
    return StructuredPoset.natural(P)


def build_catalog(max_w: int = 4) -> list[CatalogEntry]:
    entries = [CatalogEntry(name, make()) for name, make in NAMED_CONFIGURATIONS.items()]
    for w in range(2, max_w + 1):
        if w >= 3:
            entries.append(CatalogEntry(f"maxlocked_h1({w},S)", maxlocked_h1(w, "S"), "maxlocked_h1"))
        entries.append(CatalogEntry(f"maxlocked_h1({w},C2)", maxlocked_h1(w, "C2"), "maxlocked_h1"))
    return entries


# -- max-locked ordered sets ---------------------------------------------------------

def is_max_locked(P: Poset, group: PermGroup | None = None) -> bool:
    if P.n == 0 or not is_coconnected(P):
        return False
    group = group or automorphism_group(P, cap=None)
    w = width(P)
    if w == 2:
        return group.order == 2
    if w < 3 or group.fixed_points():
        return False
    need = factorial(w - 1) if w != 4 else 9
    return any(alpha_restriction_count(P, level, cap=None) >= need
               for level in rank_decomposition(P).levels)


def _pair_kind(P: Poset, lower: Iterable[int], upper: Iterable[int], w: int) -> str | None:
    sub = P.induced(list(lower) + list(upper))
    form = canonical_search(sub).form
    if w >= 2 and form == canonical_search(chains2(w)).form:
        return "C2"
    if w >= 3 and form == canonical_search(standard_example(w)).form:
        return "S"
    return None


def rank_pair_kinds(P: Poset) -> list[str | None]:
    levels = rank_decomposition(P).levels
    w = width(P)
    return [_pair_kind(P, levels[k], levels[k + 1], w) for k in range(len(levels) - 1)]


def verify_max_locked_structure(P: Poset) -> bool:
    """Every pair of consecutive ranks is S_w or wC_2 and |Aut| = w!."""
    if not is_max_locked(P):
        raise NotMaxLocked("input is not max-locked")
    w = width(P)
    kinds = rank_pair_kinds(P)
    return bool(kinds) and all(k is not None for k in kinds) and \
        automorphism_group(P, cap=None).order == factorial(w)


def stacked_max_locked(w: int, kinds: Sequence[str]) -> Poset:
    """Stack ranks of size w; each consecutive pair is S_w ("S") or wC_2 ("C2")."""
    pairs = []
    for level, kind in enumerate(kinds):
        lo, hi = level * w, (level + 1) * w
        for i in range(w):
            for j in range(w):
                if (kind == "S" and i != j) or (kind == "C2" and i == j):
                    pairs.append((lo + i, hi + j))
    return from_cover_pairs(w * (len(kinds) + 1), pairs)


# -- recognition ----------------------------------------------------------------------

def structured_form(S: StructuredPoset) -> bytes:
    return canonical_search(S.poset, blocks=S.structure.blocks).form


def dual_structured(S: StructuredPoset) -> StructuredPoset:
    return StructuredPoset(dual(S.poset), S.structure, S.labels)


def structured_isomorphic(A: StructuredPoset, B: StructuredPoset, allow_dual: bool = False) -> bool:
    if A.n != B.n or len(A.structure) != len(B.structure):
        return False
    fb = structured_form(B)
    if structured_form(A) == fb:
        return True
    return allow_dual and structured_form(dual_structured(A)) == fb


_NAMED_FORMS: dict[bytes, str] | None = None


def _named_forms() -> dict[bytes, str]:
    global _NAMED_FORMS
    if _NAMED_FORMS is None:
        forms = {}
        for name, make in NAMED_CONFIGURATIONS.items():
            model = make()
            forms.setdefault(structured_form(model), name)
            forms.setdefault(structured_form(dual_structured(model)), name)
        _NAMED_FORMS = forms
    return _NAMED_FORMS


def forbidden_configuration_match(S: StructuredPoset) -> str | None:
    """Name of the catalog entry ``S`` matches (up to duality), or None."""
    name = _named_forms().get(structured_form(S))
    if name is not None:
        return name
    P = S.poset
    if P.n > 1 and P.height == 1 and S.max_locked:
        w = width(P)
        kind = _pair_kind(P, rank_decomposition(P).levels[0], rank_decomposition(P).levels[1], w)
        if kind is not None:
            return f"maxlocked_h1({w},{kind})"
        return f"maxlocked_h1({w})"
    return None
