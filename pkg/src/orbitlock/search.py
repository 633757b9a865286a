"""Partition refinement and backtracking on ordered sets.

One engine serves two purposes.  ``automorphism_search`` walks a single path
of individualizations and, at each level, decides for every candidate image of
the base point whether some automorphism fixing the earlier base points maps
the base point there.  The orbit sizes multiply to the group order and the
automorphisms found form a strong generating set for that base.

``canonical_search`` explores the whole search tree, pruned by the
automorphisms already known, and keeps the leaf with the smallest certificate.

Vertex data beyond the order relation comes in two flavours.  ``colors`` are
labels that every automorphism must preserve exactly.  ``blocks`` is an
unlabelled partition: automorphisms may permute blocks, but must map each block
onto a block.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .poset import Poset, bits, mask_of

Cells = list[list[int]]


class _Instance:
    __slots__ = ("n", "up", "down", "same", "colors")

    def __init__(self, P: Poset, colors: Sequence[Hashable] | None, blocks):
        self.n = P.n
        self.up = P.up
        self.down = P.down
        self.colors = tuple(colors) if colors is not None else None
        if blocks is None:
            self.same = None
        else:
            same = [0] * P.n
            for block in blocks:
                m = mask_of(block)
                for x in block:
                    same[x] = m & ~(1 << x)
            self.same = tuple(same)

    def initial_cells(self) -> Cells:
        if self.n == 0:
            return []
        if self.colors is None:
            return [list(range(self.n))]
        groups: dict = {}
        for x, c in enumerate(self.colors):
            groups.setdefault(c, []).append(x)
        return [groups[c] for c in sorted(groups)]


def _refine(inst: _Instance, cells: Cells, queue: Cells) -> tuple[Cells, tuple]:
    """Split cells until the partition is equitable; return it with a trace."""
    n = inst.n
    up, down, same = inst.up, inst.down, inst.same
    trace = []
    pending = list(queue)
    while pending and len(cells) < n:
        w = pending.pop(0)
        wm = mask_of(w)
        out: Cells = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict = {}
            if same is None:
                for x in cell:
                    key = ((up[x] & wm).bit_count(), (down[x] & wm).bit_count())
                    groups.setdefault(key, []).append(x)
            else:
                for x in cell:
                    key = ((up[x] & wm).bit_count(), (down[x] & wm).bit_count(), (same[x] & wm).bit_count())
                    groups.setdefault(key, []).append(x)
            if len(groups) == 1:
                out.append(cell)
                continue
            keys = sorted(groups)
            frags = [groups[k] for k in keys]
            trace.append((len(out), tuple((k, len(f)) for k, f in zip(keys, frags))))
            out.extend(frags)
            pending = [c for c in pending if c is not cell]
            pending.extend(frags)
        cells = out
    return cells, tuple(trace)


def _individualize(inst: _Instance, cells: Cells, i: int, v: int) -> tuple[Cells, tuple]:
    single = [v]
    rest = [x for x in cells[i] if x != v]
    new = cells[:i] + [single, rest] + cells[i + 1:]
    return _refine(inst, new, [single])


def _target(cells: Cells) -> int:
    best, where = 0, -1
    for i, c in enumerate(cells):
        if len(c) > 1 and (where < 0 or len(c) < best):
            best, where = len(c), i
    return where


def _is_automorphism(inst: _Instance, perm: Sequence[int]) -> bool:
    up, same, colors = inst.up, inst.same, inst.colors
    for x in range(inst.n):
        px = perm[x]
        if colors is not None and colors[px] != colors[x]:
            return False
        m = 0
        for y in bits(up[x]):
            m |= 1 << perm[y]
        if m != up[px]:
            return False
        if same is not None:
            m = 0
            for y in bits(same[x]):
                m |= 1 << perm[y]
            if m != same[px]:
                return False
    return True


def _match(inst: _Instance, left: Cells, right: Cells):
    i = _target(left)
    if i < 0:
        perm = [0] * inst.n
        for a, b in zip(left, right):
            perm[a[0]] = b[0]
        return tuple(perm) if _is_automorphism(inst, perm) else None
    v = left[i][0]
    lcells, ltrace = _individualize(inst, left, i, v)
    for c in right[i]:
        rcells, rtrace = _individualize(inst, right, i, c)
        if rtrace != ltrace or len(rcells) != len(lcells):
            continue
        found = _match(inst, lcells, rcells)
        if found is not None:
            return found
    return None


def orbit_closure(start: int, gens: Sequence[Sequence[int]]) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def orbit_partition(n: int, gens: Sequence[Sequence[int]]) -> list[int]:
    """Union-find over generators; returns the smallest element of each orbit."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [find(x) for x in range(n)]


@dataclass
class AutomorphismData:
    generators: list[tuple[int, ...]]
    order: int
    base: list[int]


def automorphism_search(P: Poset, colors=None, blocks=None) -> AutomorphismData:
    inst = _Instance(P, colors, blocks)
    start = inst.initial_cells()
    cells, _ = _refine(inst, start, list(start))
    gens: list[tuple[int, ...]] = []
    order = 1
    base = []
    while (i := _target(cells)) >= 0:
        cell = cells[i]
        b = cell[0]
        left, ltrace = _individualize(inst, cells, i, b)
        level: list[tuple[int, ...]] = []
        orbit = {b}
        for c in cell[1:]:
            if c in orbit:
                continue
            right, rtrace = _individualize(inst, cells, i, c)
            if rtrace != ltrace or len(right) != len(left):
                continue
            perm = _match(inst, left, right)
            if perm is not None:
                level.append(perm)
                orbit = orbit_closure(b, level)
        order *= len(orbit)
        gens.extend(level)
        base.append(b)
        cells = left
    return AutomorphismData(gens, order, base)


@dataclass
class CanonicalData:
    labeling: list[int]          # labeling[i] is the element placed at position i
    form: bytes
    generators: list[tuple[int, ...]]
    order: int


def _encode(inst: _Instance, order: Sequence[int]) -> tuple:
    lab = [0] * inst.n
    for i, x in enumerate(order):
        lab[x] = i
    rows = []
    for x in order:
        m = 0
        for y in bits(inst.up[x]):
            m |= 1 << lab[y]
        rows.append(m)
    if inst.same is not None:
        for x in order:
            m = 0
            for y in bits(inst.same[x]):
                m |= 1 << lab[y]
            rows.append(m)
    if inst.colors is not None:
        return (tuple(rows), tuple(inst.colors[x] for x in order))
    return (tuple(rows),)


def _form_bytes(inst: _Instance, enc: tuple) -> bytes:
    width = max(1, (inst.n + 7) // 8)
    out = bytearray(inst.n.to_bytes(2, "big"))
    out.append(1 if inst.same is not None else 0)
    for row in enc[0]:
        out += row.to_bytes(width, "big")
    if len(enc) > 1:
        out += repr(enc[1]).encode()
    return bytes(out)


def canonical_search(P: Poset, colors=None, blocks=None) -> CanonicalData:
    inst = _Instance(P, colors, blocks)
    aut = automorphism_search(P, colors, blocks)
    gens = list(aut.generators)
    known = set(gens)
    start = inst.initial_cells()
    root, _ = _refine(inst, start, list(start))
    best: list | None = None
    best_order: list[int] = []

    def visit(cells: Cells, certs: list, fixed: list[int]) -> None:
        nonlocal best, best_order
        if best is not None and certs > best[:len(certs)]:
            return
        i = _target(cells)
        if i < 0:
            order = [c[0] for c in cells]
            cert = certs + [(1, _encode(inst, order))]
            if best is None or cert < best:
                best, best_order = cert, order
            elif cert == best:
                perm = [0] * inst.n
                for a, b in zip(best_order, order):
                    perm[a] = b
                perm = tuple(perm)
                if perm not in known and _is_automorphism(inst, perm):
                    known.add(perm)
                    gens.append(perm)
            return
        explored: list[int] = []
        for c in cells[i]:
            if explored:
                stab = [g for g in gens if all(g[v] == v for v in fixed)]
                reps = orbit_partition(inst.n, stab)
                if any(reps[c] == reps[e] for e in explored):
                    continue
            child, trace = _individualize(inst, cells, i, c)
            visit(child, certs + [(0, trace)], fixed + [c])
            explored.append(c)

    visit(root, [], [])
    enc = best[-1][1]
    return CanonicalData(best_order, _form_bytes(inst, enc), gens, aut.order)
