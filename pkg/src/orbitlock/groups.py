"""Automorphism groups, restriction counts and endomorphism counts.

Group orders come from the individualization search in :mod:`.search`.  A
``PermGroup`` also carries a Schreier-Sims stabilizer chain built from its
generators alone, which gives membership tests and a second, independent route
to the order.
"""
from __future__ import annotations

from collections import defaultdict
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, EmptySubset, NotAnAntichainPartition
from .poset import Poset, bits, mask_of
from .search import automorphism_search, orbit_partition

DEFAULT_AUT_CAP = 64
DEFAULT_END_CAP = 16

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    """First apply ``a``, then ``b``."""
    return tuple(b[x] for x in a)


def inverse(a: Sequence[int]) -> Perm:
    inv = [0] * len(a)
    for x, y in enumerate(a):
        inv[y] = x
    return tuple(inv)


class _StabilizerChain:
    """Deterministic Schreier-Sims over a single strong generating set."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]]):
        self.n = degree
        self.ident = identity(degree)
        self.base: list[int] = []
        self.strong: list[Perm] = []
        self.trans: list[dict[int, Perm]] = []
        for g in generators:
            g = tuple(g)
            if g == self.ident or g in self.strong:
                continue
            if all(g[b] == b for b in self.base):
                self.base.append(next(x for x in range(self.n) if g[x] != x))
            self.strong.append(g)
        self.trans = [{} for _ in self.base]
        for i in range(len(self.base)):
            self._orbit(i)
        i = len(self.base) - 1
        while i >= 0:
            self._orbit(i)
            i = self._check_level(i)

    def _level_gens(self, level: int) -> list[Perm]:
        fixed = self.base[:level]
        return [s for s in self.strong if all(s[b] == b for b in fixed)]

    def _orbit(self, level: int) -> None:
        b = self.base[level]
        gens = self._level_gens(level)
        trans = {b: self.ident}
        queue = [b]
        while queue:
            p = queue.pop()
            for s in gens:
                q = s[p]
                if q not in trans:
                    trans[q] = compose(trans[p], s)
                    queue.append(q)
        self.trans[level] = trans

    def _check_level(self, level: int) -> int:
        """Sift every Schreier generator of ``level``; return the next level to visit."""
        gens = self._level_gens(level)
        trans = self.trans[level]
        for p, u in list(trans.items()):
            for s in gens:
                schreier = compose(compose(u, s), inverse(trans[s[p]]))
                residue, depth = self.sift(schreier, level + 1)
                if residue != self.ident:
                    self.strong.append(residue)
                    if depth == len(self.base):
                        self.base.append(next(x for x in range(self.n) if residue[x] != x))
                        self.trans.append({})
                    for l in range(level + 1, depth + 1):
                        self._orbit(l)
                    return depth
        return level - 1

    def sift(self, g: Perm, start: int) -> tuple[Perm, int]:
        for i in range(start, len(self.base)):
            x = g[self.base[i]]
            t = self.trans[i].get(x)
            if t is None:
                return g, i
            g = compose(g, inverse(t))
        return g, len(self.base)

    def order(self) -> int:
        total = 1
        for t in self.trans:
            total *= len(t)
        return total

    def contains(self, g: Sequence[int]) -> bool:
        residue, level = self.sift(tuple(g), 0)
        return level == len(self.base) and residue == self.ident

    def elements(self) -> Iterator[Perm]:
        def walk(level: int, acc: Perm) -> Iterator[Perm]:
            if level < 0:
                yield acc
                return
            for t in self.trans[level].values():
                yield from walk(level - 1, compose(acc, t))

        yield from walk(len(self.base) - 1, self.ident)


class PermGroup:
    """A permutation group on ``range(degree)`` given by generators."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]], order: int | None = None,
                 base: Sequence[int] = ()):
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(tuple(g) for g in generators)
        self._order = order
        self.base = tuple(base)

    @cached_property
    def chain(self) -> _StabilizerChain:
        return _StabilizerChain(self.degree, self.generators)

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order()
        return self._order

    def chain_order(self) -> int:
        return self.chain.order()

    def contains(self, perm: Sequence[int]) -> bool:
        return self.chain.contains(perm)

    def elements(self) -> Iterator[Perm]:
        return self.chain.elements()

    @cached_property
    def orbit_labels(self) -> tuple[int, ...]:
        return tuple(orbit_partition(self.degree, self.generators))

    def orbits(self) -> list[frozenset[int]]:
        groups: dict[int, set[int]] = defaultdict(set)
        for x, r in enumerate(self.orbit_labels):
            groups[r].add(x)
        return [frozenset(groups[r]) for r in sorted(groups)]

    def orbit_of(self, x: int) -> frozenset[int]:
        r = self.orbit_labels[x]
        return frozenset(y for y, s in enumerate(self.orbit_labels) if s == r)

    def fixed_points(self) -> frozenset[int]:
        return frozenset(x for x in range(self.degree) if all(g[x] == x for g in self.generators))

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order}, generators={len(self.generators)})"


def _check_cap(P: Poset, cap: int | None, what: str) -> None:
    if cap is not None and P.n > cap:
        raise CapExceeded(f"{what} refused: {P.n} elements exceeds cap {cap}")


def check_antichain_partition(P: Poset, blocks: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    out = [frozenset(b) for b in blocks]
    seen = 0
    for b in out:
        if not b:
            raise NotAnAntichainPartition("empty block")
        m = mask_of(b)
        if m & seen:
            raise NotAnAntichainPartition("blocks overlap")
        if any(not (0 <= x < P.n) for x in b):
            raise NotAnAntichainPartition("block element out of range")
        seen |= m
        if not P.is_antichain(b):
            raise NotAnAntichainPartition(f"block {sorted(b)} is not an antichain")
    if seen != P.full_mask:
        raise NotAnAntichainPartition("blocks do not cover the ground set")
    return out


def block_colors(n: int, blocks: Sequence[Iterable[int]]) -> list[int]:
    colors = [0] * n
    for i, b in enumerate(blocks):
        for x in b:
            colors[x] = i
    return colors


def automorphism_group(P: Poset, cap: int | None = DEFAULT_AUT_CAP, colors=None) -> PermGroup:
    _check_cap(P, cap, "automorphism search")
    data = automorphism_search(P, colors)
    return PermGroup(P.n, data.generators, data.order, data.base)


def automorphism_group_respecting(P: Poset, blocks: Sequence[Iterable[int]],
                                  cap: int | None = DEFAULT_AUT_CAP) -> PermGroup:
    """Automorphisms mapping every block onto itself."""
    blocks = check_antichain_partition(P, blocks)
    return automorphism_group(P, cap, block_colors(P.n, blocks))


def pointwise_stabilizer_order(P: Poset, fixed: Iterable[int], colors=None,
                               cap: int | None = DEFAULT_AUT_CAP) -> int:
    base = list(colors) if colors is not None else [0] * P.n
    colors = [(c, -1) for c in base]
    for x in fixed:
        colors[x] = (base[x], x)
    return automorphism_group(P, cap, colors).order


def alpha_restriction_count(P: Poset, subset: Iterable[int], blocks=None,
                            cap: int | None = DEFAULT_AUT_CAP) -> int:
    """Number of distinct restrictions to ``subset`` of automorphisms.

    With ``blocks`` the automorphisms must respect those blocks.  Computed as
    the index of the pointwise stabilizer of ``subset``.
    """
    subset = list(subset)
    if not subset:
        raise EmptySubset("restriction count needs a nonempty subset")
    colors = None
    if blocks is not None:
        colors = block_colors(P.n, check_antichain_partition(P, blocks))
    whole = automorphism_group(P, cap, colors).order
    return whole // pointwise_stabilizer_order(P, subset, colors, cap)


# -- endomorphisms ----------------------------------------------------------------

def _comparability_components(P: Poset) -> list[list[int]]:
    seen = 0
    comps = []
    for x in range(P.n):
        if seen >> x & 1:
            continue
        comp = 1 << x
        frontier = comp
        while frontier:
            nxt = 0
            for y in bits(frontier):
                nxt |= P.up[y] | P.down[y]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(list(bits(comp)))
    return comps


def _sweep_order(P: Poset, comp: list[int]) -> list[int]:
    """Linear extension chosen greedily to keep the frontier small."""
    cmask = mask_of(comp)
    pending_up = {x: (P.upper_covers[x] & cmask).bit_count() for x in comp}
    placed = 0
    order = []
    left = set(comp)
    while left:
        best = None
        for x in sorted(left):
            if P.lower_covers[x] & ~placed:
                continue
            closing = sum(1 for y in bits(P.lower_covers[x]) if pending_up[y] == 1)
            score = (1 if pending_up[x] else 0) - closing
            if best is None or score < best[0]:
                best = (score, x)
        x = best[1]
        order.append(x)
        left.discard(x)
        placed |= 1 << x
        for y in bits(P.lower_covers[x]):
            pending_up[y] -= 1
    return order


def _count_component(P: Poset, comp: list[int], domains: Sequence[int]) -> int:
    closed_up = [P.up[v] | (1 << v) for v in range(P.n)]
    cmask = mask_of(comp)
    pending_up = {x: (P.upper_covers[x] & cmask).bit_count() for x in comp}
    active: list[int] = []
    states: dict[tuple[int, ...], int] = {(): 1}
    for x in _sweep_order(P, comp):
        lows = [active.index(y) for y in bits(P.lower_covers[x])]
        for y in bits(P.lower_covers[x]):
            pending_up[y] -= 1
        keep = [k for k, a in enumerate(active) if pending_up[a] > 0]
        stays = pending_up[x] > 0
        nxt: dict[tuple[int, ...], int] = defaultdict(int)
        for key, count in states.items():
            allowed = domains[x]
            for k in lows:
                allowed &= closed_up[key[k]]
            if not allowed:
                continue
            kept = tuple(key[k] for k in keep)
            if stays:
                for v in bits(allowed):
                    nxt[kept + (v,)] += count
            else:
                nxt[kept] += count * allowed.bit_count()
        active = [active[k] for k in keep] + ([x] if stays else [])
        states = nxt
        if not states:
            return 0
    return sum(states.values())


def count_order_preserving(P: Poset, domains: Sequence[int] | None = None) -> int:
    """Number of order-preserving self-maps f with f(x) in ``domains[x]``."""
    if domains is None:
        domains = [P.full_mask] * P.n
    total = 1
    for comp in _comparability_components(P):
        total *= _count_component(P, comp, domains)
        if total == 0:
            break
    return total


def endomorphism_count(P: Poset, cap: int | None = DEFAULT_END_CAP) -> int:
    _check_cap(P, cap, "endomorphism count")
    return count_order_preserving(P)


def endomorphism_count_respecting(P: Poset, blocks: Sequence[Iterable[int]],
                                  cap: int | None = DEFAULT_END_CAP) -> int:
    """Order-preserving maps sending every block into itself."""
    blocks = check_antichain_partition(P, blocks)
    _check_cap(P, cap, "endomorphism count")
    domains = [0] * P.n
    for b in blocks:
        m = mask_of(b)
        for x in b:
            domains[x] = m
    return count_order_preserving(P, domains)


def endomorphism_floor(P: Poset) -> int:
    """Smallest integer N with N**(h+1) >= 2**(h*n)."""
    h = P.height
    if h <= 0:
        return 1
    target = 1 << (h * P.n)
    lo, hi = 1, 1 << -(-(h * P.n) // (h + 1))
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** (h + 1) >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def endo_lower_bound_check(P: Poset, cap: int | None = DEFAULT_END_CAP) -> bool:
    """Exact test of |End(P)| >= 2**(h n / (h+1)) as |End|**(h+1) >= 2**(h n)."""
    h = max(P.height, 0)
    return endomorphism_count(P, cap) ** (h + 1) >= 1 << (h * P.n)


def has_twins(P: Poset, elements: Iterable[int]) -> bool:
    """Two of ``elements`` share both their up-set and their down-set."""
    seen = set()
    for x in elements:
        key = (P.up[x], P.down[x])
        if key in seen:
            return True
        seen.add(key)
    return False


def fixed_off_antichain_check(P: Poset, A: Iterable[int]) -> bool:
    """For an antichain without twins, an automorphism fixing every point
    outside it is the identity.  Vacuously true when ``A`` has twins."""
    A = set(A)
    if not P.is_antichain(A) or has_twins(P, A):
        return True
    return pointwise_stabilizer_order(P, [x for x in range(P.n) if x not in A], cap=None) == 1


def is_automorphism(P: Poset, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(P.n)):
        return False
    return P.relabel(perm) == P
