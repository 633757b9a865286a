"""Analysis reports for a single poset, as JSON-ready dictionaries.

Big integers are written as decimal strings and permutations as
``"p i0 i1 ..."``.  Keys are sorted on output, so equal inputs give
byte-identical reports.
"""
from __future__ import annotations

import json

from .bounds import find_certificate, ratio_report
from .catalog import forbidden_configuration_match
from .errors import CapExceeded, InvariantViolation
from .groups import DEFAULT_AUT_CAP, DEFAULT_END_CAP, automorphism_group, endomorphism_count, endomorphism_floor
from .poset import Poset, rank_decomposition, width
from .structure import DictatedOrbitStructure, StructuredPoset, product_decomposition_check, union_placement_check

SCHEMA = 1


def perm_text(perm) -> str:
    return "p " + " ".join(map(str, perm))


def _blocks(S: StructuredPoset, blocks) -> list[list[int]]:
    return sorted(sorted(S.labels[i] for i in b) for b in blocks)


def _iou_entry(u: StructuredPoset) -> dict:
    entry = {
        "elements": list(u.labels),
        "blocks": _blocks(u, u.structure.blocks),
        "aut_order": str(u.group.order),
        "singleton": u.n == 1,
    }
    if u.n > 1:
        match = forbidden_configuration_match(u) if u.tight else None
        entry.update({
            "max_locked": u.max_locked,
            "tight": u.tight,
            "flexible": u.flexible,
            "forbidden": match,
            "certificate": None,
        })
        if u.tight and u.flexible and match is None:
            cert = find_certificate(u, max(u.width, 5), 0)
            entry["certificate"] = cert.to_json() if cert else None
    return entry


def _structure_section(S: StructuredPoset) -> dict:
    out = {
        "blocks": S.structure.as_lists(),
        "aut_order": str(S.group.order),
        "orbits": [sorted(o) for o in S.orbits],
        "without_slack": S.without_slack,
        "tight": S.tight,
        "iou": S.is_iou,
        "flexible": S.flexible,
        "forbidden": None,
        "certificate": None,
    }
    if S.tight and S.is_iou:
        out["forbidden"] = forbidden_configuration_match(S)
        if S.flexible and out["forbidden"] is None:
            cert = find_certificate(S, max(S.width, 5), 0)
            out["certificate"] = cert.to_json() if cert else None
    return out


def analyze(P: Poset, structure: DictatedOrbitStructure | None = None,
            cap_aut: int | None = DEFAULT_AUT_CAP, cap_end: int | None = DEFAULT_END_CAP) -> dict:
    """Full report for ``P``; raises InvariantViolation if a proven identity fails."""
    group = automorphism_group(P, cap_aut)
    if group.order != group.chain_order():
        raise InvariantViolation("search order and stabilizer-chain order disagree")
    N = StructuredPoset.natural(P)
    try:
        end, end_exact = endomorphism_count(P, cap_end), True
    except CapExceeded:
        end, end_exact = endomorphism_floor(P), False
    ratio = ratio_report(P, cap_end, cap_aut, natural=N)
    product_ok = product_decomposition_check(P)
    placement_ok = union_placement_check(N)
    floor = endomorphism_floor(P)
    report = {
        "schema": SCHEMA,
        "poset": {"n": P.n, "covers": [list(c) for c in P.covers]},
        "width": width(P),
        "height": P.height,
        "rank_sizes": [len(level) for level in rank_decomposition(P).levels],
        "aut": {"order": str(group.order), "generators": [perm_text(g) for g in group.generators]},
        "end": {"value": str(end), "bound": not end_exact},
        "end_floor": str(floor),
        "orbits": [sorted(o) for o in N.orbits],
        "orbit_graph": {"edges": [list(e) for e in N.orbit_graph.edges]},
        "ious": [_iou_entry(u) for u in N.ious()],
        "product_check": product_ok,
        "union_placement_check": placement_ok,
        "ratio": ratio.to_json(),
    }
    if structure is not None:
        report["structure"] = _structure_section(StructuredPoset(P, structure))
    problems = []
    if not product_ok:
        problems.append("automorphism count is not the product over unions")
    if not placement_ok:
        problems.append("union placement fails")
    if end_exact and end < floor:
        problems.append("endomorphism count below the height floor")
    if ratio.inequality_holds is False:
        problems.append("Aut/End ratio exceeds the product of union factors")
    if problems:
        raise InvariantViolation("; ".join(problems))
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_text(report: dict) -> str:
    lines = [
        f"elements: {report['poset']['n']}",
        f"width: {report['width']}  height: {report['height']}  ranks: {report['rank_sizes']}",
        f"|Aut|: {report['aut']['order']}",
        f"|End|: {'>= ' if report['end']['bound'] else ''}{report['end']['value']}",
        f"orbits: {len(report['orbits'])}",
    ]
    for u in report["ious"]:
        if u["singleton"]:
            continue
        flags = [k for k in ("max_locked", "tight", "flexible") if u.get(k)]
        extra = f" forbidden={u['forbidden']}" if u.get("forbidden") else ""
        lines.append(f"union {u['elements']}: |Aut|={u['aut_order']} {' '.join(flags)}{extra}")
    lines.append(f"product check: {report['product_check']}")
    r = report["ratio"]
    lines.append(f"ratio: {r['ratio']}  factor product: {r['factor_product']}  holds: {r['inequality_holds']}")
    return "\n".join(lines) + "\n"
