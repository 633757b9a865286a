"""Isomorph-free generation of small ordered sets and structured ordered sets.

``enumerate_posets`` grows posets one maximal element at a time.  A child is
kept only when the element just added is, up to automorphism, the maximal
element that a canonical deletion rule would remove, so every isomorphism
class appears exactly once without a store of previously seen classes.

``enumerate_flexible_tight_ious`` builds structured posets one block at a time
in rank order and keeps the block-transitive ones.  A slower route that
tightens every antichain partition of every poset is kept as a cross-check.
"""
from __future__ import annotations

from itertools import combinations
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import CapExceeded
from .groups import block_colors, check_antichain_partition
from .poset import Poset, bits, width
from .search import automorphism_search, canonical_search, orbit_partition
from .structure import StructuredPoset, twin_classes

CanonicalForm = bytes

MAX_POSET_ELEMENTS = 9
MAX_IOU_ELEMENTS = 10


def canonical_form(P: Poset, coloring: Sequence[Hashable] | None = None,
                   blocks: Iterable[Iterable[int]] | None = None) -> CanonicalForm:
    """Relabelling-invariant encoding of ``P``.

    ``coloring`` gives a block label per element; like ``blocks`` it is read as
    an unlabelled partition, so permuting the labels leaves the form unchanged.
    """
    if coloring is not None:
        if len(coloring) != P.n:
            raise ValueError("coloring needs one label per element")
        groups: dict = {}
        for x, c in enumerate(coloring):
            groups.setdefault(c, []).append(x)
        blocks = list(groups.values())
    if blocks is not None:
        blocks = [sorted(b) for b in blocks]
    return canonical_search(P, blocks=blocks).form


# -- plain posets -------------------------------------------------------------------

def ideals(P: Poset) -> list[int]:
    """All down-closed subsets of ``P`` as bit masks."""
    order = P.linear_extension
    out: list[int] = []

    def walk(i: int, current: int) -> None:
        if i == len(order):
            out.append(current)
            return
        walk(i + 1, current)
        x = order[i]
        if P.down[x] & ~current == 0:
            walk(i + 1, current | 1 << x)

    walk(0, 0)
    return out


def _map_mask(perm: Sequence[int], mask: int) -> int:
    out = 0
    for x in bits(mask):
        out |= 1 << perm[x]
    return out


def ideal_orbits(masks: Iterable[int], gens: Sequence[Sequence[int]]) -> list[list[int]]:
    """Orbits of a set of masks under a permutation group, each sorted, listed by minimum."""
    pending = set(masks)
    out = []
    while pending:
        start = min(pending)
        orbit = {start}
        stack = [start]
        while stack:
            m = stack.pop()
            for g in gens:
                img = _map_mask(g, m)
                if img not in orbit:
                    orbit.add(img)
                    stack.append(img)
        pending -= orbit
        out.append(sorted(orbit))
    out.sort(key=lambda o: o[0])
    return out


def _add_maximal(P: Poset, below: int, copies: int = 1) -> Poset:
    n = P.n
    new = mask_of_range(n, n + copies)
    up = [P.up[x] | new if below >> x & 1 else P.up[x] for x in range(n)]
    return Poset(n + copies, up + [0] * copies)


def mask_of_range(lo: int, hi: int) -> int:
    return ((1 << hi) - 1) ^ ((1 << lo) - 1)


def _deletion_key(P: Poset, x: int) -> tuple:
    down = P.down
    return (down[x].bit_count(), sorted(down[y].bit_count() for y in bits(down[x])))


def _is_canonical_child(C: Poset) -> bool:
    new = C.n - 1
    maxima = [x for x in range(C.n) if C.up[x] == 0]
    keys = {x: _deletion_key(C, x) for x in maxima}
    best = max(keys.values())
    if keys[new] != best:
        return False
    tied = [x for x in maxima if keys[x] == best]
    if len(tied) == 1:
        return True
    data = canonical_search(C)
    position = {x: i for i, x in enumerate(data.labeling)}
    chosen = max(tied, key=position.__getitem__)
    reps = orbit_partition(C.n, data.generators)
    return reps[chosen] == reps[new]


def _children(P: Poset, max_width: int | None) -> Iterator[Poset]:
    gens = automorphism_search(P).generators
    for orbit in ideal_orbits(ideals(P), gens):
        C = _add_maximal(P, orbit[0])
        if max_width is not None and width(C) > max_width:
            continue
        if _is_canonical_child(C):
            yield C


def enumerate_posets(n: int, max_width: int | None = None) -> Iterator[Poset]:
    """One poset per isomorphism class on ``n`` elements, optionally of bounded width."""
    if n > MAX_POSET_ELEMENTS:
        raise CapExceeded(f"poset enumeration is capped at {MAX_POSET_ELEMENTS} elements")
    if n < 0:
        raise ValueError("n must be non-negative")

    def grow(P: Poset) -> Iterator[Poset]:
        if P.n == n:
            yield P
            return
        for C in _children(P, max_width):
            yield from grow(C)

    yield from grow(Poset(0, []))


def enumerate_posets_upto(n: int, max_width: int | None = None) -> Iterator[Poset]:
    for k in range(n + 1):
        yield from enumerate_posets(k, max_width)


def brute_force_poset_classes(n: int) -> set[CanonicalForm]:
    """Canonical forms of every strict order on ``n`` labelled points."""
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    forms = set()
    for choice in range(1 << len(pairs)):
        up = [0] * n
        for i, (x, y) in enumerate(pairs):
            if choice >> i & 1:
                up[x] |= 1 << y
        if any(up[x] >> y & 1 and up[y] >> x & 1 for x, y in pairs):
            continue
        if any(up[y] & ~up[x] for x in range(n) for y in bits(up[x])):
            continue
        forms.add(canonical_form(Poset(n, up)))
    return forms


# -- structured posets -----------------------------------------------------------------

def _structured_key(P: Poset, blocks: Sequence[Iterable[int]]) -> CanonicalForm:
    return canonical_search(P, blocks=[sorted(b) for b in blocks]).form


def _orbit_blocks(P: Poset, blocks: Sequence[Iterable[int]]) -> list[frozenset[int]]:
    gens = automorphism_search(P, colors=block_colors(P.n, list(blocks))).generators
    reps = orbit_partition(P.n, gens)
    groups: dict[int, set[int]] = {}
    for x, r in enumerate(reps):
        groups.setdefault(r, set()).add(x)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def _is_flexible_tight_iou(P: Poset, blocks: Sequence[Iterable[int]]) -> bool:
    S = StructuredPoset(P, blocks)
    return P.n > 1 and S.tight and S.is_iou and not S.max_locked


def _block_layers(P: Poset, blocks: list[frozenset[int]], limit: int) -> Iterator[tuple[Poset, list[frozenset[int]]]]:
    n = P.n
    top = max(P.ranks, default=-1)
    gens = automorphism_search(P, colors=block_colors(n, blocks)).generators if n else []
    ranks = P.ranks
    usable = [I for I in ideals(P) if (max((ranks[y] for y in bits(I)), default=-1) + 1) >= top]
    room = limit - n
    for orbit in ideal_orbits(usable, gens):
        first, rest = orbit[0], orbit[1:]
        for extra in range(0, min(len(rest), room - 1) + 1):
            for chosen in combinations(rest, extra):
                downsets = (first,) + chosen
                for mu in range(1, room // len(downsets) + 1):
                    if mu * len(downsets) < 2:
                        continue
                    up = list(P.up)
                    k = n
                    for I in downsets:
                        new = mask_of_range(k, k + mu)
                        for x in bits(I):
                            up[x] |= new
                        k += mu
                    C = Poset(k, up + [0] * (k - n))
                    new_block = frozenset(range(n, k))
                    yield C, blocks + [new_block]


def block_transitive_structures(limit: int) -> dict[int, list[tuple[Poset, list[frozenset[int]]]]]:
    """Block-transitive structured posets up to ``limit`` elements, blocks of size >= 2.

    Blocks are listed in non-decreasing rank; every such structured poset arises
    from its prefix of lower-ranked blocks by adding one layer of maximal elements.
    """
    levels: dict[int, dict[CanonicalForm, tuple[Poset, list[frozenset[int]]]]] = {
        k: {} for k in range(limit + 1)}
    levels[0][b""] = (Poset(0, []), [])
    for size in range(limit + 1):
        for key in sorted(levels[size]):
            P, blocks = levels[size][key]
            for C, cblocks in _block_layers(P, blocks, limit):
                if set(_orbit_blocks(C, cblocks)) != set(cblocks):
                    continue
                form = _structured_key(C, cblocks)
                levels[C.n].setdefault(form, (C, cblocks))
    return {k: [levels[k][f] for f in sorted(levels[k])] for k in levels}


def enumerate_flexible_tight_ious(n: int) -> Iterator[StructuredPoset]:
    """Flexible tight interdependent orbit unions on exactly ``n`` elements."""
    yield from (S for S in enumerate_flexible_tight_ious_upto(n) if S.n == n)


def enumerate_flexible_tight_ious_upto(n: int) -> Iterator[StructuredPoset]:
    if n > MAX_IOU_ELEMENTS:
        raise CapExceeded(f"structured enumeration is capped at {MAX_IOU_ELEMENTS} elements")
    levels = block_transitive_structures(n)
    for size in range(2, n + 1):
        for P, blocks in levels[size]:
            if _is_flexible_tight_iou(P, blocks):
                yield StructuredPoset(P, blocks)


# -- the slow route: tighten every antichain partition ------------------------------------

def antichain_partitions(P: Poset, labels: Sequence[int] | None = None) -> Iterator[list[frozenset[int]]]:
    """Partitions of ``P`` into antichains; with ``labels``, only partitions
    whose blocks stay inside one label class."""
    comparable = [P.up[x] | P.down[x] for x in range(P.n)]
    if labels is not None:
        for x in range(P.n):
            comparable[x] |= sum(1 << y for y in range(P.n) if labels[y] != labels[x])

    def place(x: int, parts: list[int]) -> Iterator[list[frozenset[int]]]:
        if x == P.n:
            yield [frozenset(bits(m)) for m in parts]
            return
        for i, m in enumerate(parts):
            if not comparable[x] & m:
                parts[i] = m | 1 << x
                yield from place(x + 1, parts)
                parts[i] = m
        parts.append(1 << x)
        yield from place(x + 1, parts)
        parts.pop()

    yield from place(0, [])


def tighten(P: Poset, blocks: Sequence[Iterable[int]]) -> list[frozenset[int]] | None:
    """Split blocks into orbits until stable; None if slack survives."""
    current = sorted((frozenset(b) for b in check_antichain_partition(P, blocks)), key=min)
    while True:
        nxt = _orbit_blocks(P, current)
        if nxt == current:
            break
        current = nxt
    if P.n > 2 and any(len(c) > 1 for b in current for c in twin_classes(P, b, P.full_mask)):
        return None
    return current


def flexible_tight_ious_by_tightening(n: int, within_orbits: bool = False) -> list[StructuredPoset]:
    """Same stream as ``enumerate_flexible_tight_ious`` via every antichain partition.

    Tightening only ever produces blocks inside Aut(P)-orbits, so
    ``within_orbits`` restricts the starting partitions to those refining the
    natural orbits without changing the result.
    """
    found: dict[CanonicalForm, StructuredPoset] = {}
    for P in enumerate_posets(n):
        labels = None
        if within_orbits:
            labels = orbit_partition(P.n, automorphism_search(P).generators)
            if len(set(labels)) == P.n:
                continue
        for D in antichain_partitions(P, labels):
            T = tighten(P, D)
            if T is None or not _is_flexible_tight_iou(P, T):
                continue
            found.setdefault(_structured_key(P, T), StructuredPoset(P, T))
    return [found[k] for k in sorted(found)]
