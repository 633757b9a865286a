"""Finite ordered sets on the ground set 0..n-1.

Relations are stored as bit rows held in Python ints: ``up[x]`` has bit y set
iff x < y, and ``down[y]`` is the mirror row.  Every
constructor closes the relation transitively and recomputes the covers, so two
posets with the same strict order compare equal regardless of how they were
built.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import ArityMismatch, CapExceeded, CycleDetected, EmptySubset, IndexOutOfRange, ParseError

MAX_ELEMENTS = 256


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


class Poset:
    """Immutable strict order on ``range(n)``."""

    __slots__ = ("n", "up", "down", "__dict__")

    def __init__(self, n: int, up: Sequence[int]):
        # ``up`` must already be transitive and irreflexive; use the
        # module-level constructors for anything else.
        if n > MAX_ELEMENTS:
            raise CapExceeded(f"{n} elements exceeds the cap of {MAX_ELEMENTS}")
        self.n = n
        self.up = tuple(up)
        down = [0] * n
        for x in range(n):
            for y in bits(self.up[x]):
                down[y] |= 1 << x
        self.down = tuple(down)

    # -- basic relation queries -------------------------------------------
    def lt(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def leq(self, x: int, y: int) -> bool:
        return x == y or bool(self.up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return x == y or bool((self.up[x] | self.down[x]) >> y & 1)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def upper_covers(self) -> tuple[int, ...]:
        out = []
        for x in range(self.n):
            above = self.up[x]
            implied = 0
            for z in bits(above):
                implied |= self.up[z]
            out.append(above & ~implied)
        return tuple(out)

    @cached_property
    def lower_covers(self) -> tuple[int, ...]:
        low = [0] * self.n
        for x, row in enumerate(self.upper_covers):
            for y in bits(row):
                low[y] |= 1 << x
        return tuple(low)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        return tuple((x, y) for x in range(self.n) for y in bits(self.upper_covers[x]))

    def relations(self) -> Iterator[tuple[int, int]]:
        for x in range(self.n):
            for y in bits(self.up[x]):
                yield x, y

    # -- derived structure --------------------------------------------------
    @cached_property
    def ranks(self) -> tuple[int, ...]:
        r = [0] * self.n
        for x in self.linear_extension:
            below = self.lower_covers[x]
            r[x] = 1 + max(r[y] for y in bits(below)) if below else 0
        return tuple(r)

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        # elements sorted by the size of their down-set form a linear extension
        return tuple(sorted(range(self.n), key=lambda x: (self.down[x].bit_count(), x)))

    @property
    def height(self) -> int:
        return max(self.ranks, default=-1) if self.n else 0

    def minimal_elements(self) -> frozenset[int]:
        return frozenset(x for x in range(self.n) if not self.down[x])

    def maximal_elements(self) -> frozenset[int]:
        return frozenset(x for x in range(self.n) if not self.up[x])

    def is_antichain(self, elements: Iterable[int]) -> bool:
        m = mask_of(elements)
        return all(not (self.up[x] & m) for x in bits(m))

    def induced(self, elements: Iterable[int]) -> Poset:
        """Subposet on ``elements``, relabelled in increasing order."""
        order = sorted(set(elements))
        for x in order:
            _check_index(x, self.n)
        pos = {x: i for i, x in enumerate(order)}
        sub = [0] * len(order)
        m = mask_of(order)
        for i, x in enumerate(order):
            sub[i] = mask_of(pos[y] for y in bits(self.up[x] & m))
        return Poset(len(order), sub)

    def relabel(self, perm: Sequence[int]) -> Poset:
        """Image of the poset under the bijection x -> perm[x]."""
        up = [0] * self.n
        for x in range(self.n):
            up[perm[x]] = mask_of(perm[y] for y in bits(self.up[x]))
        return Poset(self.n, up)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.n == other.n and self.up == other.up

    def __hash__(self) -> int:
        return hash((self.n, self.up))

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, covers={list(self.covers)})"


def _check_index(x: int, n: int) -> None:
    if not (0 <= x < n):
        raise IndexOutOfRange(f"element {x} outside 0..{n - 1}")


def from_cover_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Poset:
    """Poset generated by ``pairs`` (lower, upper); redundant pairs are dropped."""
    if n < 0:
        raise IndexOutOfRange("negative element count")
    if n > MAX_ELEMENTS:
        raise CapExceeded(f"{n} elements exceeds the cap of {MAX_ELEMENTS}")
    succ = [0] * n
    for a, b in pairs:
        _check_index(a, n)
        _check_index(b, n)
        if a == b:
            raise CycleDetected(f"loop at {a}")
        succ[a] |= 1 << b
    indeg = [0] * n
    for a in range(n):
        for b in bits(succ[a]):
            indeg[b] += 1
    stack = [x for x in range(n) if indeg[x] == 0]
    topo = []
    while stack:
        x = stack.pop()
        topo.append(x)
        for y in bits(succ[x]):
            indeg[y] -= 1
            if indeg[y] == 0:
                stack.append(y)
    if len(topo) != n:
        raise CycleDetected("cover pairs contain a directed cycle")
    up = [0] * n
    for x in reversed(topo):
        row = succ[x]
        for y in bits(succ[x]):
            row |= up[y]
        up[x] = row
    return Poset(n, up)


def from_relation(n: int, pairs: Iterable[tuple[int, int]]) -> Poset:
    """Alias of :func:`from_cover_pairs` for inputs listing arbitrary relations."""
    return from_cover_pairs(n, pairs)


@dataclass(frozen=True)
class RankDecomposition:
    levels: tuple[frozenset[int], ...]

    @property
    def height(self) -> int:
        return len(self.levels) - 1


def rank_decomposition(P: Poset) -> RankDecomposition:
    if P.n == 0:
        return RankDecomposition((frozenset(),))
    levels: list[set[int]] = [set() for _ in range(max(P.ranks) + 1)]
    for x, r in enumerate(P.ranks):
        levels[r].add(x)
    return RankDecomposition(tuple(frozenset(s) for s in levels))


def width(P: Poset) -> int:
    """Largest antichain size, via a minimum chain cover (Dilworth)."""
    match_of_right = [-1] * P.n

    def augment(x: int, seen: list[bool]) -> bool:
        for y in bits(P.up[x]):
            if seen[y]:
                continue
            seen[y] = True
            if match_of_right[y] < 0 or augment(match_of_right[y], seen):
                match_of_right[y] = x
                return True
        return False

    matched = 0
    for x in range(P.n):
        if augment(x, [False] * P.n):
            matched += 1
    return P.n - matched


def max_antichain_brute(P: Poset) -> int:
    """Exhaustive maximum antichain; exponential, for cross-checks only."""
    best = 0
    for size in range(P.n, 0, -1):
        for combo in combinations(range(P.n), size):
            if P.is_antichain(combo):
                return size
    return best


def is_order_autonomous(P: Poset, A: Iterable[int]) -> bool:
    a = mask_of(A)
    if not a:
        raise EmptySubset("order-autonomy needs a nonempty set")
    for x in bits(a):
        _check_index(x, P.n)
    for z in range(P.n):
        if a >> z & 1:
            continue
        hit = P.up[z] & a
        if hit and hit != a:
            return False
        hit = P.down[z] & a
        if hit and hit != a:
            return False
    return True


def is_coconnected(P: Poset) -> bool:
    """True iff no split of the ground set into nonempty B, T has B < T.

    Such a split exists exactly when the incomparability graph is
    disconnected: its components are then totally ordered by <, and the
    lowest one serves as B.
    """
    if P.n <= 1:
        return True
    full = P.full_mask
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nxt |= full & ~(P.up[x] | P.down[x] | (1 << x))
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def is_coconnected_brute(P: Poset) -> bool:
    """Search every bipartition; only for small inputs."""
    if P.n > 20:
        raise CapExceeded("bipartition search is limited to 20 elements")
    full = P.full_mask
    for b in range(1, full):
        t = full & ~b
        if all(P.up[x] & t == t for x in bits(b)):
            return False
    return True


def dual(P: Poset) -> Poset:
    return Poset(P.n, P.down)


def lex_sum(T: Poset, pieces: Sequence[Poset]) -> Poset:
    """Replace each element t of T by the poset ``pieces[t]``."""
    if len(pieces) != T.n:
        raise ArityMismatch(f"{len(pieces)} pieces for an index set of {T.n}")
    offsets = []
    total = 0
    for piece in pieces:
        if piece.n == 0:
            raise ArityMismatch("pieces must be nonempty")
        offsets.append(total)
        total += piece.n
    block_mask = [((1 << p.n) - 1) << off for p, off in zip(pieces, offsets)]
    up = [0] * total
    for t, piece in enumerate(pieces):
        above = 0
        for s in bits(T.up[t]):
            above |= block_mask[s]
        for x in range(piece.n):
            up[offsets[t] + x] = (piece.up[x] << offsets[t]) | above
    return Poset(total, up)


def disjoint_union(*parts: Poset) -> Poset:
    return lex_sum(antichain(len(parts)), parts)


# -- small families ----------------------------------------------------------

def chain(k: int) -> Poset:
    return from_cover_pairs(k, [(i, i + 1) for i in range(k - 1)])


def antichain(k: int) -> Poset:
    return Poset(k, [0] * k)


def standard_example(k: int) -> Poset:
    """S_k: minimal l_0..l_{k-1} (elements 0..k-1), maximal u_i (k+i), l_i < u_j iff i != j."""
    return from_cover_pairs(2 * k, [(i, k + j) for i in range(k) for j in range(k) if i != j])


def chains2(k: int) -> Poset:
    """k disjoint 2-chains; bottoms 0..k-1, tops k..2k-1."""
    return from_cover_pairs(2 * k, [(i, k + i) for i in range(k)])


def crown(k: int) -> Poset:
    """The 2k-crown: b_i < t_i and b_{i+1} < t_i (indices mod k), bottoms first."""
    return from_cover_pairs(2 * k, [p for i in range(k) for p in ((i, k + i), ((i + 1) % k, k + i))])


# -- text format ----------------------------------------------------------------

def parse_pos(text: str) -> Poset:
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "n" and len(fields) == 2 and n is None:
                n = int(fields[1])
            elif fields[0] == "c" and len(fields) == 3 and n is not None:
                pairs.append((int(fields[1]), int(fields[2])))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise ParseError("missing 'n <count>' header")
    if n < 0:
        raise ParseError("negative element count")
    try:
        return from_cover_pairs(n, pairs)
    except IndexOutOfRange as exc:
        raise ParseError(str(exc)) from None


def serialize_pos(P: Poset) -> str:
    lines = [f"n {P.n}"]
    lines += [f"c {a} {b}" for a, b in P.covers]
    return "\n".join(lines) + "\n"
