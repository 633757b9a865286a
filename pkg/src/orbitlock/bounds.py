"""Factorial-product arithmetic and adequate-bound certificates.

A certificate for a structured poset (P, D) with cap ``w`` and offset ``o`` is
a vector of integers in 0..w-1 whose factorials multiply to at least
|Aut_D(P)| and whose sum stays within floor((|P| - |D| + o) / 2).  Everything
here is exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

from .catalog import forbidden_configuration_match
from .errors import BadDivisor, BadVector, CapExceeded, NotFlexibleTightIOU
from .groups import (DEFAULT_AUT_CAP, DEFAULT_END_CAP, automorphism_group, endomorphism_count,
                     endomorphism_count_respecting, endomorphism_floor)
from .poset import Poset
from .structure import PruneDecomposition, StructuredPoset, admissible_components, prune


class Ordering(Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


FACTPROD_EQUALITY = frozenset({(2, 2, 3), (3, 5)})


def is_factprod_exception(b: Sequence[int]) -> bool:
    t = tuple(b)
    return (len(t) == 2 and t[0] == 2) or t in {(3, 3), (3, 4), (2, 2, 2)}


def factorial_product_compare(b: Sequence[int]) -> Ordering:
    """Compare the product of b_j! with (sum(b) - len(b))!."""
    b = tuple(b)
    if len(b) < 2 or any(x < 2 for x in b) or list(b) != sorted(b):
        raise BadVector(f"need a sorted vector of length >= 2 with entries >= 2, got {b}")
    lhs = prod(factorial(x) for x in b)
    rhs = factorial(sum(b) - len(b))
    return Ordering.LT if lhs < rhs else Ordering.EQ if lhs == rhs else Ordering.GT


def divisor_inequality_check(n: int, k: int) -> bool:
    """k! ((n/k)!)^k < (n-1)! for a nontrivial divisor k of n >= 6."""
    if n < 6 or not 1 < k < n or n % k:
        raise BadDivisor(f"{k} is not a nontrivial divisor of {n} (n >= 6 required)")
    return factorial(k) * factorial(n // k) ** k < factorial(n - 1)


def width_constant_checks() -> dict[str, bool]:
    """The three numeric constants behind the width-11 estimate, checked exactly."""
    return {
        # lg((w-1)!)/(2w) <= 0.991  <=>  ((w-1)!)^1000 <= 2^(1982 w)
        "factorial_over_2w": all(factorial(w - 1) ** 1000 <= 2 ** (1982 * w) for w in range(5, 12)),
        # lg(4!)/8 < 0.574  <=>  24^1000 < 2^4592
        "four_factorial": 24 ** 1000 < 2 ** 4592,
        # lg(3!)/3 < 0.87  <=>  6^100 < 2^261
        "three_factorial": 6 ** 100 < 2 ** 261,
    }


# -- certificates ------------------------------------------------------------------

def adequate_budget(size: int, blocks: int, offset: int) -> int:
    return (size - blocks + offset) // 2


@dataclass(frozen=True)
class BoundCertificate:
    w: int
    offset: int
    w_values: tuple[int, ...]
    budget: int
    route: str = "search"

    @property
    def product(self) -> int:
        return prod(factorial(x) for x in self.w_values)

    def is_valid(self, aut_order: int) -> bool:
        return (sum(self.w_values) <= self.budget
                and all(0 <= x <= self.w - 1 for x in self.w_values)
                and aut_order <= self.product)

    def to_json(self) -> dict:
        return {"w": self.w, "o": self.offset, "w_values": list(self.w_values),
                "product": str(self.product), "budget": self.budget, "route": self.route}


def factorial_vector(target: int, budget: int, w: int) -> tuple[int, ...] | None:
    """Shortest-sum vector with entries in 2..w-1, factorial product >= target, sum <= budget."""
    if target <= 1:
        return ()
    if budget < 2 or w < 3:
        return None
    best = [1] * (budget + 1)
    choice = [0] * (budget + 1)
    for b in range(1, budget + 1):
        best[b], choice[b] = best[b - 1], 0
        for p in range(2, min(w - 1, b) + 1):
            v = factorial(p) * best[b - p]
            if v > best[b]:
                best[b], choice[b] = v, p
        if best[b] >= target:
            out = []
            while b > 0:
                if choice[b]:
                    out.append(choice[b])
                    b -= choice[b]
                else:
                    b -= 1
            return tuple(sorted(out, reverse=True))
    return None


def _certify(S: StructuredPoset, w: int, o: int, values: Sequence[int], route: str) -> BoundCertificate | None:
    cert = BoundCertificate(w, o, tuple(sorted(values, reverse=True)),
                            adequate_budget(S.n, len(S.structure), o), route)
    return cert if cert.is_valid(S.group.order) else None


def _max_locked_route(S: StructuredPoset, w: int, o: int) -> BoundCertificate | None:
    if not S.max_locked:
        return None
    ranks = S.poset.height + 1
    a = S.width
    if ranks < 3 or (ranks, a) == (3, 2):
        return None
    return _certify(S, w, o, [a], "max-locked")


def _two_orbit_route(S: StructuredPoset, w: int, o: int) -> BoundCertificate | None:
    P = S.poset
    if len(S.structure) != 2 or P.height != 1:
        return None
    lo, hi = S.structure.blocks
    if lo != P.minimal_elements():
        lo, hi = hi, lo
    if lo != P.minimal_elements() or hi != P.maximal_elements():
        return None
    small = min(len(lo), len(hi))
    value = small if len(lo) != len(hi) else small - 1
    return _certify(S, w, o, [value], "two-orbit")


def induction_budget(pd: PruneDecomposition, q: int) -> int:
    """T_q of the prune decomposition."""
    blocks = pd.host.structure.blocks
    later = sum(len(blocks[i]) for i in pd.others) - len(pd.others)
    removed = len(blocks[pd.removed]) - len(pd.separation)
    adjacent = sum(len(blocks[j]) for j in pd.adjacent) - pd.ell_Q
    return (later + removed + adjacent + q) // 2


@dataclass(frozen=True)
class InductionBudget:
    q: int
    value: int


def induction_certificate(pd: PruneDecomposition, w: int, q: int) -> tuple[int, ...] | None:
    return factorial_vector(pd.q_part.group.order, induction_budget(pd, q), w)


def _parity_odd(pd: PruneDecomposition) -> bool:
    blocks = pd.host.structure.blocks
    total = (sum(len(blocks[i]) for i in pd.others) - len(pd.others)
             + len(blocks[pd.removed]) - 1
             + sum(len(blocks[j]) for j in pd.adjacent) - pd.ell_Q)
    return total % 2 == 1


def _prune_route(S: StructuredPoset, w: int, o: int, depth: int) -> BoundCertificate | None:
    if len(S.structure) < 3 or not S.tight or not S.is_iou:
        return None
    for r in range(len(S.structure)):
        comps = admissible_components(S, r)
        if len(comps) != 1 or len(comps[0]) != len(S.structure) - 1:
            continue  # only non-cutvertices
        pd = prune(S, r, comps[0], check=False)
        size_n = len(S.structure.blocks[r])
        k = len(pd.separation)
        if S.group.order <= pd.pruned.group.order:
            c = find_certificate(pd.pruned, w, o + size_n - 1, depth + 1)
            if c is not None and (cert := _certify(S, w, o, c.w_values, "prune-without-Q")):
                return cert
        for on in (o, o + 1):
            q = o - on + k - 1
            qv = induction_certificate(pd, w, q)
            if qv is None:
                continue
            c = find_certificate(pd.pruned, w, on, depth + 1)
            if c is not None and (cert := _certify(S, w, o, c.w_values + qv, "prune-with-Q")):
                return cert
        if o == 0 and _parity_odd(pd):
            qv = induction_certificate(pd, w, k - 1)
            c = find_certificate(pd.pruned, w, 1, depth + 1) if qv is not None else None
            if c is not None and (cert := _certify(S, w, o, c.w_values + qv, "prune-odd")):
                return cert
        break
    return None


def find_certificate(S: StructuredPoset, w: int, o: int, _depth: int = 0) -> BoundCertificate | None:
    """Witness that (S, D) is offset by ``o`` from being ``w``-adequately bounded."""
    for route in (_max_locked_route, _two_orbit_route):
        cert = route(S, w, o)
        if cert is not None:
            return cert
    if _depth < 8:
        cert = _prune_route(S, w, o, _depth)
        if cert is not None:
            return cert
    budget = adequate_budget(S.n, len(S.structure), o)
    values = factorial_vector(S.group.order, budget, w)
    if values is None:
        return None
    return BoundCertificate(w, o, values, budget, "search")


def verify_combination_rules(S: StructuredPoset, removed: int, o: int, q: int, w: int | None = None,
                             component: Sequence[int] | None = None) -> bool:
    """Check the three ways of combining a pruned certificate with a Q-bound."""
    pd = prune(S, removed, component, check=False)
    w = w if w is not None else max(S.width, 5)
    aut = S.group.order
    size_n = len(S.structure.blocks[pd.removed])
    k = len(pd.separation)
    base = find_certificate(pd.pruned, w, o)
    ok = True
    if base is not None and aut <= pd.pruned.group.order:
        shifted = BoundCertificate(w, o - (size_n - 1), base.w_values,
                                   adequate_budget(S.n, len(S.structure), o - (size_n - 1)))
        ok &= shifted.is_valid(aut)
    qv = induction_certificate(pd, w, q)
    if base is not None and qv is not None:
        off = o + q - (k - 1)
        joined = BoundCertificate(w, off, base.w_values + qv, adequate_budget(S.n, len(S.structure), off))
        ok &= joined.is_valid(aut)
        if o == 1 and q == k - 1 and _parity_odd(pd):
            joined0 = BoundCertificate(w, 0, base.w_values + qv, adequate_budget(S.n, len(S.structure), 0))
            ok &= joined0.is_valid(aut)
    return ok


def verify_allowedconf(S: StructuredPoset) -> bool:
    if not (S.tight and S.flexible):
        raise NotFlexibleTightIOU("input must be a flexible tight interdependent orbit union")
    if forbidden_configuration_match(S) is not None:
        return True
    return find_certificate(S, max(S.width, 5), 0) is not None


# -- the Aut/End ratio ------------------------------------------------------------------

@dataclass
class IouFactor:
    elements: tuple[int, ...]
    aut: int
    end: int | None

    @property
    def factor(self) -> Fraction | None:
        return Fraction(self.aut, self.end) if self.end else None


@dataclass
class RatioReport:
    aut: int
    end: int
    end_exact: bool
    factors: list[IouFactor] = field(default_factory=list)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.aut, self.end)

    @property
    def factor_product(self) -> Fraction | None:
        out = Fraction(1)
        for f in self.factors:
            if f.factor is None:
                return None
            out *= f.factor
        return out

    @property
    def inequality_holds(self) -> bool | None:
        """None when an inexact count leaves the comparison undecided."""
        bound = self.factor_product
        if bound is None or not self.end_exact:
            return None
        return self.ratio <= bound

    def to_json(self) -> dict:
        return {
            "aut": str(self.aut),
            "end": str(self.end),
            "end_exact": self.end_exact,
            "ratio": str(self.ratio),
            "factors": [{"elements": list(f.elements), "aut": str(f.aut),
                         "end": None if f.end is None else str(f.end),
                         "factor": None if f.factor is None else str(f.factor)} for f in self.factors],
            "factor_product": None if self.factor_product is None else str(self.factor_product),
            "inequality_holds": self.inequality_holds,
        }


def ratio_report(P: Poset, cap_end: int | None = DEFAULT_END_CAP,
                 cap_aut: int | None = DEFAULT_AUT_CAP, natural: StructuredPoset | None = None) -> RatioReport:
    aut = automorphism_group(P, cap_aut).order
    try:
        end, exact = endomorphism_count(P, cap_end), True
    except CapExceeded:
        end, exact = endomorphism_floor(P), False
    report = RatioReport(aut, end, exact)
    natural = natural or StructuredPoset.natural(P)
    for u in natural.ious():
        if u.n <= 1:
            continue
        try:
            e = endomorphism_count_respecting(u.poset, u.structure.blocks, cap_end)
        except CapExceeded:
            e = None
        report.factors.append(IouFactor(u.labels, u.group.order, e))
    return report


# -- fixtures for the two-bad-removals case analysis ---------------------------------------

@dataclass(frozen=True)
class TableRow:
    table: int
    aut_q1: int
    size_q1: int
    aut_q2: int
    size_q2: int
    budget: int
    multiplier: int
    bound: tuple[int, ...]
    equal: bool
    size_u: int | None = None


def _rows(table, multiplier, data):
    return [TableRow(table, a1, s1, a2, s2, budget, multiplier, bound, eq, su)
            for a1, s1, a2, s2, su, budget, bound, eq in data]


TWOBAD_TABLES: list[TableRow] = (
    _rows(1, 1, [(36, 12, 36, 12, None, 9, (4, 5), False), (36, 12, 4, 8, None, 7, (4, 3), True),
                 (36, 12, 2, 6, None, 6, (5,), False), (4, 8, 4, 8, None, 5, (4,), False),
                 (4, 8, 2, 6, None, 4, (4,), False), (2, 6, 2, 6, None, 3, (3,), False)])
    + _rows(2, 2, [(36, 12, 36, 12, None, 10, (4, 5), False), (36, 12, 4, 8, None, 8, (4, 4), False),
                   (36, 12, 2, 6, None, 7, (5, 2), False), (4, 8, 4, 8, None, 6, (4, 2), False),
                   (4, 8, 2, 6, None, 5, (4,), False), (2, 6, 2, 6, None, 4, (4,), False)])
    + _rows(3, 4, [(36, 12, 36, 12, 28, 11, (5, 5), False), (36, 12, 4, 8, 24, 9, (4, 4), True),
                   (36, 12, 2, 6, 22, 8, (4, 4), False), (4, 8, 4, 8, 20, 7, (4, 3), False),
                   (4, 8, 2, 6, 18, 6, (4, 2), False), (2, 6, 2, 6, 16, 5, (4,), False)])
)


def check_table_row(row: TableRow) -> bool:
    offset = {1: 6, 2: 4, 3: 1}[row.table]
    if row.budget != (row.size_q1 + row.size_q2 - offset) // 2:
        return False
    if row.size_u is not None and row.size_u != row.size_q1 + row.size_q2 + 4:
        return False
    lhs = row.multiplier * row.aut_q1 * row.aut_q2
    rhs = prod(factorial(x) for x in row.bound)
    relation = lhs == rhs if row.equal else lhs < rhs
    return relation and sum(row.bound) <= row.budget
