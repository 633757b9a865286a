"""Named property suites run over exhaustively generated inputs.

Each suite turns ``n_max`` into a list of work items, maps a checker over
them (optionally in a process pool) and sums per-check pass counts.  Results
are merged in item order, so the summary does not depend on the pool size.
"""
from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .bounds import (FACTPROD_EQUALITY, Ordering, TWOBAD_TABLES, check_table_row, divisor_inequality_check,
                     factorial_product_compare, find_certificate, induction_certificate, is_factprod_exception,
                     ratio_report, verify_allowedconf, verify_combination_rules, width_constant_checks)
from .catalog import (build_catalog, crown8, crown8_locked, forbidden_configuration_match, is_max_locked,
                      maxlocked_h1, verify_max_locked_structure)
from .enumerator import enumerate_flexible_tight_ious_upto, enumerate_posets
from .errors import UnknownSuite
from .groups import (alpha_restriction_count, endo_lower_bound_check, endomorphism_count,
                     endomorphism_count_respecting, fixed_off_antichain_check)
from .poset import Poset, rank_decomposition
from .structure import (StructuredPoset, adjacent_gcd_check, all_prune_decompositions, prune_lemma_checks,
                        product_decomposition_check, union_placement_check)


@dataclass
class SuiteResult:
    name: str
    n_max: int
    passed: Counter = field(default_factory=Counter)
    total: Counter = field(default_factory=Counter)
    failures: list[str] = field(default_factory=list)

    def record(self, check: str, ok: bool, detail: str = "") -> None:
        self.total[check] += 1
        if ok:
            self.passed[check] += 1
        elif len(self.failures) < 20:
            self.failures.append(f"{check}: {detail}")

    def merge(self, other: "SuiteResult") -> None:
        self.passed.update(other.passed)
        self.total.update(other.total)
        room = 20 - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])

    @property
    def ok(self) -> bool:
        return all(self.passed[k] == self.total[k] for k in self.total)

    def lines(self) -> list[str]:
        out = [f"{k}: {self.passed[k]}/{self.total[k]}" for k in sorted(self.total)]
        out += [f"FAIL {f}" for f in self.failures]
        out.append(f"suite {self.name} (n_max={self.n_max}): {'PASS' if self.ok else 'FAIL'}")
        return out


def _poset_items(n_max: int) -> list[tuple[int, tuple[int, ...]]]:
    return [(P.n, P.up) for n in range(n_max + 1) for P in enumerate_posets(n)]


def _iou_items(n_max: int) -> list[tuple[int, tuple[int, ...], list[list[int]]]]:
    return [(S.n, S.poset.up, S.structure.as_lists()) for S in enumerate_flexible_tight_ious_upto(n_max)]


# -- per-item checkers (module level so they pickle) --------------------------------------

def _antichains(P: Poset):
    comparable = [P.up[x] | P.down[x] for x in range(P.n)]

    def grow(start: int, chosen: list[int], forbidden: int):
        yield chosen
        for x in range(start, P.n):
            if not forbidden >> x & 1:
                yield from grow(x + 1, chosen + [x], forbidden | comparable[x])

    yield from grow(0, [], 0)


def _check_core(item) -> SuiteResult:
    n, up = item
    P = Poset(n, up)
    r = SuiteResult("lemmas-core", n)
    tag = f"poset {up}"
    r.record("antichain_fixed_off", all(fixed_off_antichain_check(P, A) for A in _antichains(P) if len(A) >= 2), tag)
    N = StructuredPoset.natural(P)
    r.record("union_placement", union_placement_check(N), tag)
    r.record("aut_product_over_unions", product_decomposition_check(P), tag)
    r.record("end_height_floor", endo_lower_bound_check(P, cap=None), tag)
    return r


def _check_ratio(item) -> SuiteResult:
    n, up = item
    P = Poset(n, up)
    r = SuiteResult("ratios", n)
    rep = ratio_report(P, cap_end=None, cap_aut=None)
    r.record("ratio_below_union_factors", rep.inequality_holds is True, f"poset {up}: {rep.ratio} vs {rep.factor_product}")
    return r


def _check_prune(item) -> SuiteResult:
    n, up, blocks = item
    S = StructuredPoset(Poset(n, up), blocks)
    r = SuiteResult("prune", n)
    tag = f"structure {up} {blocks}"
    r.record("adjacent_block_gcd", adjacent_gcd_check(S), tag)
    match = forbidden_configuration_match(S)
    if match is None:
        r.record("certificate_offset0", verify_allowedconf(S), tag)
    w = max(S.width, 5)
    for pd in all_prune_decompositions(S):
        where = f"{tag} removed={pd.removed}"
        for check, ok in prune_lemma_checks(pd).items():
            r.record(f"prune.{check}", ok, where)
        if not pd.is_cutvertex and sum(len(pd.autonomous_antichains[j]) for j in pd.nontrivial_adjacent) >= 3:
            k = len(pd.separation)
            r.record("q_side_certificate", induction_certificate(pd, S.width, k - 1) is not None, where)
        for o in (0, 1):
            for q in range(0, len(pd.separation)):
                r.record("combination_rules",
                         verify_combination_rules(S, pd.removed, o, q, w, pd.component), f"{where} o={o} q={q}")
    return r


def _run(name: str, n_max: int, items: list, worker: Callable, jobs: int) -> SuiteResult:
    total = SuiteResult(name, n_max)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(worker, items, chunksize=max(1, len(items) // (8 * jobs)))
            for part in parts:
                total.merge(part)
    else:
        for item in items:
            total.merge(worker(item))
    return total


# -- suites --------------------------------------------------------------------------

def suite_lemmas_core(n_max: int, jobs: int = 1) -> SuiteResult:
    return _run("lemmas-core", n_max, _poset_items(n_max), _check_core, jobs)


def suite_ratios(n_max: int, jobs: int = 1) -> SuiteResult:
    return _run("ratios", n_max, _poset_items(n_max), _check_ratio, jobs)


def suite_prune(n_max: int, jobs: int = 1) -> SuiteResult:
    return _run("prune", n_max, _iou_items(n_max), _check_prune, jobs)


def sorted_vectors(total_cap: int, min_len: int = 2) -> Iterable[tuple[int, ...]]:
    """Non-decreasing vectors with entries >= 2 and sum <= total_cap."""
    def grow(prefix: tuple[int, ...], low: int, room: int):
        if len(prefix) >= min_len:
            yield prefix
        for x in range(low, room + 1):
            yield from grow(prefix + (x,), x, room - x)

    yield from grow((), 2, total_cap)


def suite_bounds(n_max: int, jobs: int = 1) -> SuiteResult:
    r = SuiteResult("bounds", n_max)
    for b in sorted_vectors(n_max):
        got = factorial_product_compare(b)
        if is_factprod_exception(b):
            r.record("factorial_product.listed_exception", True)
            continue
        want = Ordering.EQ if b in FACTPROD_EQUALITY else Ordering.LT
        r.record("factorial_product", got == want, f"{b}: {got.value}")
    for n in range(6, 61):
        for k in range(2, n):
            if n % k == 0:
                r.record("divisor_inequality", divisor_inequality_check(n, k), f"n={n} k={k}")
    for row in TWOBAD_TABLES:
        r.record("two_removal_tables", check_table_row(row), str(row))
    for name, ok in width_constant_checks().items():
        r.record(f"width_constants.{name}", ok)
    return r


def suite_catalog(n_max: int, jobs: int = 1) -> SuiteResult:
    r = SuiteResult("catalog", n_max)
    expected = {"2C3": (6, 2), "2C3star": (6, 2), "2V": (6, 2), "hat2V": (8, 4), "bar2V": (8, 4),
                "tildeS4": (10, 8), "hatC8": (10, 8), "barC8": (10, 8), "hat4C2": (10, 8),
                "bar4C2": (10, 8), "hatS4": (10, 8), "barS4": (10, 8), "C8": (8, 8)}
    max_w = max(n_max, 4)
    for entry in build_catalog(max_w):
        S = entry.model
        if entry.family == "named":
            r.record("named.size_and_aut", (S.n, S.group.order) == expected[entry.name], entry.name)
            end = endomorphism_count_respecting(S.poset, S.structure.blocks, cap=None)
            r.record("named.ratio_at_most_3_4", Fraction(S.group.order, end) <= Fraction(3, 4), entry.name)
            r.record("named.tight_union", S.tight and S.is_iou, entry.name)
            r.record("named.self_match", forbidden_configuration_match(S) == entry.name, entry.name)
            if len(S.structure) == 3:
                i = S.group.order.bit_length() - 1
                r.record("three_orbit.shape", S.group.order == 2 ** i and S.n == 4 + 2 * i and 1 <= i <= 3,
                         entry.name)
                w = max(S.width, 5)
                r.record("three_orbit.offset1", find_certificate(S, w, 1) is not None, entry.name)
                r.record("three_orbit.not_offset0", find_certificate(S, w, 0) is None, entry.name)
        else:
            P = S.poset
            w = S.width
            r.record("maxlocked_h1.is_max_locked", is_max_locked(P), entry.name)
            if w >= 3:
                r.record("maxlocked_h1.structure", verify_max_locked_structure(P), entry.name)
                levels = rank_decomposition(P).levels
                r.record("maxlocked_h1.alpha_levels",
                         alpha_restriction_count(P, levels[0], cap=None)
                         == alpha_restriction_count(P, levels[1], cap=None), entry.name)
            if w <= 4:
                end = endomorphism_count(P, cap=None)
                floor = w ** w if "C2" in entry.name else (w - 1) ** w
                r.record("maxlocked_h1.end_floor", end >= floor, entry.name)
    C8 = crown8()
    r.record("crown8.offset4", find_certificate(C8, 4, 4) is not None and find_certificate(C8, 4, 0) is None)
    L = crown8_locked()
    end = endomorphism_count_respecting(L.poset, L.structure.blocks, cap=None)
    r.record("crown8_locked.aut_equals_end", L.group.order == end)
    for w in range(2, 5):
        for kind in ("S", "C2"):
            if kind == "S" and w < 3:
                continue
            S = maxlocked_h1(w, kind)
            r.record("maxlocked_h1.match", forbidden_configuration_match(S) == f"maxlocked_h1({w},{kind})",
                     f"{w},{kind}")
    return r


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "lemmas-core": suite_lemmas_core,
    "prune": suite_prune,
    "bounds": suite_bounds,
    "catalog": suite_catalog,
    "ratios": suite_ratios,
}


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ORBITLOCK_JOBS", "1")))
    except ValueError:
        return 1


def run_suite(name: str, n_max: int, jobs: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    return SUITES[name](n_max, jobs if jobs is not None else default_jobs())
