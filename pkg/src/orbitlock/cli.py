"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 internal invariant violation,
3 unreadable input, 4 a size cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .catalog import build_catalog
from .enumerator import enumerate_flexible_tight_ious, enumerate_posets
from .errors import CapExceeded, InvariantViolation, OrbitlockError, ParseError, UnknownSuite
from .groups import DEFAULT_AUT_CAP, DEFAULT_END_CAP, endomorphism_count_respecting
from .poset import dual, parse_pos, serialize_pos
from .report import SCHEMA, analyze, to_json, to_text
from .structure import parse_dos, serialize_dos
from .verify import SUITES, default_jobs, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INVARIANT, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3, 4


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def cmd_analyze(args) -> int:
    P = parse_pos(_read(args.path))
    if args.dual:
        P = dual(P)
    D = parse_dos(_read(args.structure), P) if args.structure else None
    report = analyze(P, D, cap_aut=args.cap_aut, cap_end=args.cap_end)
    sys.stdout.write(to_text(report) if args.text else to_json(report))
    return EXIT_OK


def cmd_verify(args) -> int:
    result = run_suite(args.suite, args.n_max, args.jobs)
    for line in result.lines():
        print(line)
    return EXIT_OK if result.ok else EXIT_FAIL


def _catalog_records(max_w: int) -> list[dict]:
    out = []
    for entry in build_catalog(max_w):
        S = entry.model
        aut = S.group.order
        end = endomorphism_count_respecting(S.poset, S.structure.blocks, cap=None) if S.n <= 16 else None
        out.append({
            "name": entry.name,
            "family": entry.family,
            "elements": S.n,
            "orbits": len(S.structure),
            "aut_order": str(aut),
            "end_order": None if end is None else str(end),
            "ratio": None if end is None else str(Fraction(aut, end)),
            "pos": serialize_pos(S.poset),
            "dos": serialize_dos(S.structure),
        })
    return out


def cmd_catalog(args) -> int:
    records = _catalog_records(args.max_w)
    if args.json:
        sys.stdout.write(json.dumps({"schema": SCHEMA, "entries": records}, sort_keys=True, indent=2) + "\n")
        return EXIT_OK
    chunks = []
    for r in records:
        head = (f"# {r['name']} ({r['family']}) elements={r['elements']} orbits={r['orbits']} "
                f"aut={r['aut_order']} end={r['end_order']}\n")
        chunks.append(head + r["pos"] + r["dos"])
    sys.stdout.write("---\n".join(chunks))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    first = True
    if args.ious:
        stream = ((S.poset, S.structure) for S in enumerate_flexible_tight_ious(args.n))
    else:
        stream = ((P, None) for P in enumerate_posets(args.n, args.max_width))
    for P, D in stream:
        if not first:
            sys.stdout.write("---\n")
        first = False
        sys.stdout.write(serialize_pos(P))
        if D is not None:
            sys.stdout.write(serialize_dos(D))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitlock", description="Automorphisms and orbit structure of finite posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="report on one poset")
    p.add_argument("path", help=".pos file")
    p.add_argument("--structure", metavar="FILE", help=".dos file with a dictated orbit structure")
    p.add_argument("--cap-aut", type=int, default=DEFAULT_AUT_CAP, metavar="N")
    p.add_argument("--cap-end", type=int, default=DEFAULT_END_CAP, metavar="N")
    p.add_argument("--dual", action="store_true", help="analyze the dual order")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--text", action="store_true", help="plain text summary")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", help=", ".join(sorted(SUITES)))
    p.add_argument("n_max", type=int)
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="dump the forbidden configurations")
    p.add_argument("max_w", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("enumerate", help="stream posets up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("--max-width", type=int)
    p.add_argument("--ious", action="store_true", help="flexible tight unions with their structures instead")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, UnknownSuite, OrbitlockError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
