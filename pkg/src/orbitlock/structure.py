"""Dictated orbit structures, orbit graphs and interdependent orbit unions.

A dictated orbit structure is a partition of the ground set into antichains.
Automorphisms are required to map every block onto itself; the orbits of that
group (the D-orbits) are the vertices of the orbit graph, joined when two of
them are directly interdependent: some pair across them is comparable and
some pair is not.  Connected components give the interdependent orbit unions.

The second half of the module builds the prune-and-compact decomposition of a
flexible tight union around a removed block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import factorial, gcd
from typing import Iterable, Sequence

from .errors import (BlockNotInStructure, NotTightIOU, OrbitNotAntichain, ParseError,
                     TooFewBlocks)
from .groups import (PermGroup, automorphism_group, block_colors, check_antichain_partition,
                     compose, inverse, pointwise_stabilizer_order)
from .poset import Poset, bits, mask_of, width


@dataclass(frozen=True)
class DictatedOrbitStructure:
    blocks: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, P: Poset, blocks: Iterable[Iterable[int]]) -> DictatedOrbitStructure:
        checked = check_antichain_partition(P, blocks)
        return cls(tuple(sorted(checked, key=min)))

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise BlockNotInStructure(f"element {x} is in no block")

    def index(self, block: Iterable[int]) -> int:
        b = frozenset(block)
        try:
            return self.blocks.index(b)
        except ValueError:
            raise BlockNotInStructure(f"{sorted(b)} is not a block") from None

    def as_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)


def singleton_structure(P: Poset) -> DictatedOrbitStructure:
    return DictatedOrbitStructure(tuple(frozenset([x]) for x in range(P.n)))


def natural_orbit_structure(P: Poset, group: PermGroup | None = None) -> DictatedOrbitStructure:
    group = group or automorphism_group(P, cap=None)
    orbits = group.orbits()
    for o in orbits:
        if not P.is_antichain(o):
            raise OrbitNotAntichain(f"orbit {sorted(o)} contains a comparable pair")
    return DictatedOrbitStructure(tuple(orbits))


def parse_dos(text: str, P: Poset) -> DictatedOrbitStructure:
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] != "b" or len(fields) < 2:
            raise ParseError(f"line {lineno}: expected 'b i0 i1 ...'")
        try:
            blocks.append([int(f) for f in fields[1:]])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer element") from None
    return DictatedOrbitStructure.of(P, blocks)


def serialize_dos(D: DictatedOrbitStructure) -> str:
    return "".join("b " + " ".join(map(str, b)) + "\n" for b in D.as_lists())


def _interdependent(P: Poset, c: int, d: int) -> bool:
    """Masks ``c`` and ``d``: some pair across them comparable, some not."""
    comparable = incomparable = False
    for x in bits(c):
        rel = (P.up[x] | P.down[x]) & d
        if rel:
            comparable = True
        if rel != d:
            incomparable = True
        if comparable and incomparable:
            return True
    return False


def directly_interdependent(P: Poset, D: DictatedOrbitStructure, C: Iterable[int],
                            E: Iterable[int]) -> bool:
    i, j = D.index(C), D.index(E)
    if i == j:
        raise BlockNotInStructure("a block is not compared with itself")
    return _interdependent(P, mask_of(D.blocks[i]), mask_of(D.blocks[j]))


def twin_classes(P: Poset, elements: Iterable[int], within: int) -> list[frozenset[int]]:
    """Group ``elements`` by their strict up- and down-sets inside the mask ``within``.

    For elements of one antichain these classes are exactly the maximal
    order-autonomous antichains of the subposet on ``within``.
    """
    classes: dict[tuple[int, int], list[int]] = {}
    for x in sorted(elements):
        classes.setdefault((P.up[x] & within, P.down[x] & within), []).append(x)
    return sorted((frozenset(c) for c in classes.values()), key=min)


@dataclass(frozen=True)
class OrbitGraph:
    vertices: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    def components(self) -> list[list[int]]:
        adj: dict[int, set[int]] = {i: set() for i in range(len(self.vertices))}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen: set[int] = set()
        comps = []
        for v in range(len(self.vertices)):
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


def _orbit_graph(P: Poset, vertices: Sequence[frozenset[int]]) -> OrbitGraph:
    masks = [mask_of(v) for v in vertices]
    edges = tuple((i, j) for i in range(len(masks)) for j in range(i + 1, len(masks))
                  if _interdependent(P, masks[i], masks[j]))
    return OrbitGraph(tuple(vertices), edges)


class StructuredPoset:
    """A poset with a dictated orbit structure.

    ``labels`` records, for subposets cut out of a larger one, which element
    of the outermost host each local element came from; ``parent`` records
    the index in the poset it was cut from directly.
    """

    def __init__(self, poset: Poset, structure: DictatedOrbitStructure | Iterable[Iterable[int]],
                 labels: Sequence[int] | None = None, parent: Sequence[int] | None = None):
        if not isinstance(structure, DictatedOrbitStructure):
            structure = DictatedOrbitStructure.of(poset, structure)
        self.poset = poset
        self.structure = structure
        self.labels = tuple(labels) if labels is not None else tuple(range(poset.n))
        self.parent = tuple(parent) if parent is not None else tuple(range(poset.n))

    @classmethod
    def natural(cls, P: Poset) -> StructuredPoset:
        return cls(P, natural_orbit_structure(P))

    @property
    def n(self) -> int:
        return self.poset.n

    @cached_property
    def group(self) -> PermGroup:
        return automorphism_group(self.poset, cap=None,
                                  colors=block_colors(self.n, self.structure.blocks))

    @cached_property
    def orbits(self) -> tuple[frozenset[int], ...]:
        return tuple(self.group.orbits())

    @cached_property
    def orbit_graph(self) -> OrbitGraph:
        return _orbit_graph(self.poset, self.orbits)

    @cached_property
    def block_graph(self) -> OrbitGraph:
        return _orbit_graph(self.poset, self.structure.blocks)

    @cached_property
    def without_slack(self) -> bool:
        if self.n <= 2:
            return True
        full = self.poset.full_mask
        return all(len(c) == 1 for b in self.structure.blocks for c in twin_classes(self.poset, b, full))

    @cached_property
    def block_transitive(self) -> bool:
        return set(self.orbits) == set(self.structure.blocks)

    @cached_property
    def tight(self) -> bool:
        return self.without_slack and self.block_transitive

    @cached_property
    def is_iou(self) -> bool:
        return self.n > 0 and len(self.orbit_graph.components()) == 1

    @cached_property
    def max_locked(self) -> bool:
        from .catalog import is_max_locked
        return is_max_locked(self.poset)

    @cached_property
    def flexible(self) -> bool:
        return self.is_iou and self.n > 1 and not self.max_locked

    @cached_property
    def width(self) -> int:
        return width(self.poset)

    def ious(self) -> list[StructuredPoset]:
        return interdependent_orbit_unions(self)

    def sub(self, elements: Iterable[int], blocks: Iterable[Iterable[int]]) -> StructuredPoset:
        """Structured subposet; ``blocks`` are given in this poset's labels."""
        order = sorted(set(elements))
        pos = {x: i for i, x in enumerate(order)}
        local = [[pos[x] for x in b] for b in blocks]
        return StructuredPoset(self.poset.induced(order), local, [self.labels[x] for x in order], order)

    def __repr__(self) -> str:
        return f"StructuredPoset(n={self.n}, blocks={self.structure.as_lists()})"


def orbit_graph(S: StructuredPoset) -> OrbitGraph:
    return S.orbit_graph


def interdependent_orbit_unions(S: StructuredPoset) -> list[StructuredPoset]:
    graph = S.orbit_graph
    out = []
    for comp in graph.components():
        blocks = [graph.vertices[i] for i in comp]
        elements = [x for b in blocks for x in b]
        out.append(S.sub(elements, blocks))
    return sorted(out, key=lambda u: min(u.labels))


def structure_flags(S: StructuredPoset) -> tuple[bool, bool, bool]:
    return S.without_slack, S.tight, S.flexible


def extend_by_identity(n: int, labels: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    out = list(range(n))
    for i, x in enumerate(labels):
        out[x] = labels[perm[i]]
    return tuple(out)


def product_decomposition_check(P: Poset) -> bool:
    """|Aut(P)| equals the product of the orders over non-singleton natural unions."""
    whole = StructuredPoset.natural(P)
    product = 1
    for u in whole.ious():
        if u.n > 1:
            product *= u.group.order
    return product == whole.group.order


def union_placement_check(S: StructuredPoset) -> bool:
    """Each block of a union lies entirely below or entirely beside every outside element,
    and each union automorphism extends by the identity to the whole poset."""
    P = S.poset
    colors = block_colors(P.n, S.structure.blocks)
    for u in S.ious():
        umask = mask_of(u.parent)
        for block in u.structure.blocks:
            cm = mask_of(u.parent[i] for i in block)
            for x in range(P.n):
                if umask >> x & 1:
                    continue
                below = P.down[x] & cm
                above = P.up[x] & cm
                if (below and below != cm) or (above and above != cm):
                    return False
        for g in u.group.generators:
            ext = extend_by_identity(P.n, u.parent, g)
            if P.relabel(ext) != P or any(colors[ext[x]] != colors[x] for x in range(P.n)):
                return False
    return True


# -- prune and compact ----------------------------------------------------------

@dataclass
class PruneDecomposition:
    host: StructuredPoset
    removed: int                                   # index of the removed block
    component: tuple[int, ...]                     # blocks of the chosen component
    adjacent: tuple[int, ...]                      # component blocks interdependent with the removed one
    others: tuple[int, ...]                        # blocks outside the component and the removed block
    autonomous_antichains: dict[int, tuple[frozenset[int], ...]]
    representatives: dict[int, tuple[int, ...]]
    pruned: StructuredPoset                        # U_n with its structure
    q_part: StructuredPoset                        # Q with the orbits of the E_Q-respecting group
    q_input: tuple[frozenset[int], ...]            # E_Q in host labels
    separation: tuple[frozenset[int], ...]         # Q-orbits inside the removed block, host labels
    ell_Q: int = field(init=False)

    def __post_init__(self):
        self.ell_Q = sum(len(v) for v in self.autonomous_antichains.values())

    @property
    def removed_block(self) -> frozenset[int]:
        return self.host.structure.blocks[self.removed]

    @property
    def is_cutvertex(self) -> bool:
        return bool(self.others)

    @property
    def nontrivial_adjacent(self) -> tuple[int, ...]:
        return tuple(j for j in self.adjacent
                     if any(len(a) > 1 for a in self.autonomous_antichains[j]))


def _components_without(S: StructuredPoset, removed: int) -> list[list[int]]:
    graph = S.block_graph
    keep = [i for i in range(len(graph.vertices)) if i != removed]
    sub = OrbitGraph(tuple(graph.vertices[i] for i in keep),
                     tuple((keep.index(a), keep.index(b)) for a, b in graph.edges
                           if a != removed and b != removed))
    return [[keep[i] for i in comp] for comp in sub.components()]


def admissible_components(S: StructuredPoset, removed: int) -> list[tuple[int, ...]]:
    """Components of the block graph minus ``removed`` that have at least two blocks."""
    return [tuple(c) for c in _components_without(S, removed) if len(c) >= 2]


def prune(S: StructuredPoset, removed: int | Iterable[int],
          component: Sequence[int] | None = None, *, check: bool = True) -> PruneDecomposition:
    blocks = S.structure.blocks
    if not isinstance(removed, int):
        removed = S.structure.index(removed)
    if not 0 <= removed < len(blocks):
        raise BlockNotInStructure(f"no block with index {removed}")
    if check and not (S.tight and S.flexible):
        raise NotTightIOU("prune needs a flexible tight interdependent orbit union")
    if len(blocks) < 3:
        raise TooFewBlocks("prune needs at least three blocks")
    choices = admissible_components(S, removed)
    if component is None:
        if not choices:
            raise TooFewBlocks("no component with two or more blocks remains")
        comp = choices[0]
    else:
        comp = tuple(sorted(component))
        if comp not in choices:
            raise TooFewBlocks(f"{comp} is not a component with two or more blocks")
    P = S.poset
    rmask = mask_of(blocks[removed])
    cmask = mask_of(x for j in comp for x in blocks[j])
    adjacent = tuple(j for j in comp if _interdependent(P, mask_of(blocks[j]), rmask))
    others = tuple(i for i in range(len(blocks)) if i != removed and i not in comp)

    classes = {j: tuple(twin_classes(P, blocks[j], cmask)) for j in adjacent}
    reps = {j: tuple(min(a) for a in classes[j]) for j in adjacent}

    far = [j for j in comp if j not in adjacent]
    pruned_blocks = [blocks[j] for j in far] + [frozenset(reps[j]) for j in adjacent]
    pruned = S.sub([x for b in pruned_blocks for x in b], pruned_blocks)

    q_input = tuple([a for j in adjacent for a in classes[j]] + [blocks[removed]]
                    + [blocks[i] for i in others])
    q_elements = [x for b in q_input for x in b]
    q_with_input = S.sub(q_elements, q_input)
    q_orbits_local = q_with_input.orbits
    q_orbits = [frozenset(q_with_input.parent[i] for i in o) for o in q_orbits_local]
    q_part = S.sub(q_elements, q_orbits)
    separation = tuple(sorted((o for o in q_orbits if o <= blocks[removed]), key=min))
    return PruneDecomposition(S, removed, comp, adjacent, others, classes, reps, pruned, q_part,
                              q_input, separation)


def all_prune_decompositions(S: StructuredPoset) -> list[PruneDecomposition]:
    out = []
    for r in range(len(S.structure.blocks)):
        for comp in admissible_components(S, r):
            out.append(prune(S, r, comp, check=False))
    return out


def _respects(perm: Sequence[int], blocks: Iterable[frozenset[int]]) -> bool:
    blist = list(blocks)
    bset = set(blist)
    return all(frozenset(perm[x] for x in b) in bset for b in blist)


def prune_normality_check(pd: PruneDecomposition) -> bool:
    """Extensions by identity of the Q-group form a normal subgroup of the host group."""
    S = pd.host
    P = S.poset
    q = pd.q_part
    qmask = mask_of(q.parent)
    host_colors = block_colors(P.n, S.structure.blocks)
    q_blocks_host = [frozenset(q.parent[i] for i in b) for b in q.structure.blocks]
    extensions = [extend_by_identity(P.n, q.parent, d) for d in q.group.generators]
    for e in extensions:
        if P.relabel(e) != P or any(host_colors[e[x]] != host_colors[x] for x in range(P.n)):
            return False
    for g in S.group.generators:
        for e in extensions:
            conj = compose(compose(inverse(g), e), g)
            if any(conj[x] != x for x in range(P.n) if not qmask >> x & 1):
                return False
            if not _respects(conj, q_blocks_host):
                return False
    return True


def prune_inequality_check(S: StructuredPoset, removed: int | Iterable[int],
                           component: Sequence[int] | None = None) -> bool:
    pd = prune(S, removed, component)
    return _prune_inequality(pd)


def _prune_inequality(pd: PruneDecomposition) -> bool:
    lhs = pd.host.group.order
    rhs = pd.pruned.group.order * pd.q_part.group.order
    return lhs <= rhs and prune_normality_check(pd)


def prune_lemma_checks(pd: PruneDecomposition) -> dict[str, bool]:
    """Structural facts every prune decomposition of a flexible tight union satisfies."""
    S = pd.host
    P = S.poset
    blocks = S.structure.blocks
    out: dict[str, bool] = {}
    out["inequality"] = _prune_inequality(pd)

    ok = True
    for j in pd.adjacent:
        cl = pd.autonomous_antichains[j]
        if len(cl) <= 1 or len({len(a) for a in cl}) != 1:
            ok = False
        for g in S.group.generators:
            if not _respects(g, cl):
                ok = False
    out["classes_split_and_respected"] = ok

    out["pruned_tight_iou"] = pd.pruned.tight and pd.pruned.is_iou

    ok = True
    rblock = blocks[pd.removed]
    for j in pd.nontrivial_adjacent:
        for a in pd.autonomous_antichains[j]:
            for x in a:
                for y in a:
                    if x < y and not any(P.comparable(d, x) != P.comparable(d, y) for d in rblock):
                        ok = False
    out["removed_block_separates"] = ok

    q_order = pd.q_part.parent
    q_blocks_host = [frozenset(q_order[i] for i in b) for b in pd.q_part.structure.blocks]
    out["host_respects_q_orbits"] = all(_respects(g, q_blocks_host) for g in S.group.generators)
    out["q_tight"] = pd.q_part.tight

    wq = pd.q_part.group.order
    k = len(pd.separation)
    size = len(rblock)
    w = S.width
    rloc = [q_order.index(x) for x in rblock]
    qcolors = block_colors(pd.q_part.n, pd.q_part.structure.blocks)
    determined = pointwise_stabilizer_order(pd.q_part.poset, rloc, qcolors, cap=None) == 1
    part_bound = factorial(size // k) ** k
    if determined:
        out["q_bound_when_determined"] = wq <= min(factorial(w - 1), part_bound)
    if not pd.is_cutvertex:
        prod = 1
        for j in pd.adjacent:
            for a in pd.autonomous_antichains[j]:
                prod *= factorial(len(a))
        out["q_bound_non_cutvertex"] = wq <= min(factorial(w - 1), part_bound, prod)
        if not pd.nontrivial_adjacent:
            out["host_bounded_by_pruned"] = S.group.order <= pd.pruned.group.order
    return out


def adjacent_gcd_check(S: StructuredPoset) -> bool:
    blocks = S.structure.blocks
    return all(gcd(len(blocks[a]), len(blocks[b])) > 1 for a, b in S.block_graph.edges)
