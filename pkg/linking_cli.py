"""
Triple Linking — Command Line
=============================
Reproduces the linking-form, Lagrangian census and obstruction-search
computations for surgery framing matrices, printing JSON reports.

Usage:
  python linking_cli.py linking-form data/matrices/a2.txt
  python linking_cli.py census --builtin m0
  python linking_cli.py obstructed --v=-1,-1,1,1,0,0,0,0,0,0,-1,-1,-1,1,1,0,0,0,0,0
  python linking_cli.py verify-universal --mode rank
  python linking_cli.py grope --t 3 --g 1 --cy 1 --dz 1 --cz 0 --dy 0
  python linking_cli.py hantzsche --builtin lens_3_1
  python linking_cli.py scan --max-vectors 729

Exit codes:
  0  success / positive verdict
  1  well-formed negative verdict (not obstructed, no splitting, ...)
  2  input error
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from data.framings import FRAMINGS, framing_path
from triple_linking.arith import QmodZ
from triple_linking.census import census_frame, census_summary
from triple_linking.config import CONVENTIONS, DEFAULT_CONVENTION, DEFAULT_SEED, DEFAULT_THREADS, LOG_LEVEL
from triple_linking.errors import LinkingError, PreconditionError, VectorParseError
from triple_linking.isotropic import DualPair, Subspace, dual_pair_indices, enumerate_lagrangians
from triple_linking.linking import (
    check_hantzsche,
    is_nondegenerate,
    linking_form_from_framing,
    load_framing,
)
from triple_linking.search import (
    build_context,
    is_obstructed,
    scan_obstructed,
    universal_vanishing_report,
)
from triple_linking.tripleform import (
    GropeData,
    ObstructionVector,
    triple_linking_from_grope,
    triple_linking_representative,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2


class ReportEncoder(json.JSONEncoder):
    """Handle numpy, residue and subspace types in JSON reports."""
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (QmodZ, Fraction)):
            return str(o)
        if isinstance(o, Subspace):
            return [list(row) for row in o.basis]
        if isinstance(o, DualPair):
            return {"first": o.first, "second": o.second}
        return super().default(o)


# ─── Helpers ──────────────────────────────────────────────────

def emit(report: dict, fmt: str = "json"):
    if fmt == "json":
        print(json.dumps(report, cls=ReportEncoder, sort_keys=True, indent=2))
        return
    for key in sorted(report):
        print(f"{key}: {json.dumps(report[key], cls=ReportEncoder)}")


def framing_source(args, default: str | None = None) -> Path:
    if args.framing and args.builtin:
        raise PreconditionError("give either a framing file or --builtin, not both")
    if args.framing:
        return Path(args.framing)
    name = args.builtin or default
    if name is None:
        raise PreconditionError("a framing file or --builtin is required")
    return framing_path(name)


def load_form(args, default: str | None = None):
    framing = load_framing(framing_source(args, default))
    group, form = linking_form_from_framing(framing, args.convention)
    return framing, group, form


def read_vectors(path: str) -> list[list[int]]:
    """One comma-separated vector per line; blank and '#' lines skipped."""
    vectors = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            entries = [int(tok) for tok in line.strip("[]").split(",")]
        except ValueError:
            raise VectorParseError(f"bad vector line in {path}: {line!r}") from None
        if any(not -1 <= x <= 2 for x in entries):
            raise VectorParseError(f"entries must lie in -1..2 in {path}: {line!r}")
        vectors.append(entries)
    return vectors


# ─── Commands ─────────────────────────────────────────────────

def cmd_linking_form(args) -> int:
    framing, group, form = load_form(args)
    emit({
        "framing": framing.to_lists(),
        "convention": args.convention,
        "invariant_factors": list(group.invariant_factors),
        "order": group.order,
        "exponent": group.exponent,
        "gram": [list(row) for row in form.gram],
        "nondegenerate": is_nondegenerate(form),
    }, args.format)
    return EXIT_OK


def cmd_census(args) -> int:
    _, _, form = load_form(args)
    lagrangians = enumerate_lagrangians(form)
    pairs = dual_pair_indices(lagrangians)
    v = ObstructionVector.parse(args.v) if args.v else None
    frame = census_frame(lagrangians, pairs, v)
    report = census_summary(frame)
    if args.list:
        report["table"] = frame.to_dict("records")
    emit(report, args.format)
    return EXIT_OK


def cmd_obstructed(args) -> int:
    v = ObstructionVector.parse(args.v)
    _, _, form = load_form(args, default="m0")
    report = is_obstructed(v, build_context(form))
    emit(report.to_record(), args.format)
    return EXIT_OK if report.obstructed else EXIT_NEGATIVE


def cmd_verify_universal(args) -> int:
    if args.det_vectors:
        rows = read_vectors(args.det_vectors)
    else:
        _, _, form = load_form(args, default="m0")
        rows = build_context(form).rows()
    mode = "rank_reduced" if args.mode == "rank" else args.mode
    report = universal_vanishing_report(rows, mode, args.threads)
    emit(report.to_record(), args.format)
    return EXIT_OK if report.verdict else EXIT_NEGATIVE


def cmd_grope(args) -> int:
    data = GropeData(args.t, args.g, tuple(args.cy), tuple(args.dz), tuple(args.cz), tuple(args.dy))
    emit({
        "t": data.t,
        "g": data.g,
        "representative": triple_linking_representative(data),
        "value": triple_linking_from_grope(data),
    }, args.format)
    return EXIT_OK


HANTZSCHE_MESSAGES = {
    "no_square_order": "order {order} not a square: no embedding splitting",
    "splitting": "order {order}: splitting found",
    "no_splitting_found": "order {order} is a square but no dual pair of Lagrangians exists",
    "square_order_only": "order {order} is a square; splitting search not supported for this group",
}


def cmd_hantzsche(args) -> int:
    _, group, form = load_form(args)
    result = check_hantzsche(form)
    report = {
        "verdict": result.verdict,
        "order": result.order,
        "invariant_factors": list(group.invariant_factors),
        "splitting": result.splitting,
        "message": HANTZSCHE_MESSAGES[result.verdict].format(order=result.order),
    }
    emit(report, args.format)
    return EXIT_NEGATIVE if result.verdict in ("no_square_order", "no_splitting_found") else EXIT_OK


def cmd_scan(args) -> int:
    _, _, form = load_form(args, default="m0")
    ctx = build_context(form)
    candidates = None
    if args.candidates:
        candidates = [ObstructionVector(tuple(v)) for v in read_vectors(args.candidates)]
    found = scan_obstructed(ctx, args.max_vectors, args.max_seconds, args.strategy,
                            args.seed, args.start, candidates)
    emit({
        "strategy": "candidates" if candidates is not None else args.strategy,
        "count": len(found),
        "obstructed": [v.signed() for v in found],
    }, args.format)
    return EXIT_OK if found else EXIT_NEGATIVE


# ─── Main ─────────────────────────────────────────────────────

def _add_format_arg(p: argparse.ArgumentParser):
    # SUPPRESS keeps the top-level value unless the flag follows the subcommand
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)


def _add_framing_args(p: argparse.ArgumentParser):
    _add_format_arg(p)
    p.add_argument("framing", nargs="?", help="framing matrix file")
    p.add_argument("--builtin", choices=sorted(FRAMINGS), help="use a shipped framing matrix")
    p.add_argument("--convention", choices=CONVENTIONS, default=DEFAULT_CONVENTION)


def _int_list(p: argparse.ArgumentParser, name: str):
    p.add_argument(f"--{name}", nargs="*", type=int, default=[])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linking_cli", description="Torsion linking and triple linking engine",
                                     allow_abbrev=False)
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("linking-form", help="invariant factors and gram matrix of a framing")
    _add_framing_args(p)
    p.set_defaults(func=cmd_linking_form)

    p = sub.add_parser("census", help="Lagrangian and dual-pair counts")
    _add_framing_args(p)
    p.add_argument("--v", help="also evaluate this obstruction vector on every Lagrangian")
    p.add_argument("--list", action="store_true", help="include the per-Lagrangian table")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("obstructed", help="decide one obstruction vector")
    _add_framing_args(p)
    p.add_argument("--v", required=True, help="20 comma-separated trits")
    p.set_defaults(func=cmd_obstructed)

    p = sub.add_parser("verify-universal", help="does every vector vanish on some Lagrangian")
    _add_framing_args(p)
    p.add_argument("--mode", choices=("rank", "rank_reduced", "exhaustive"), default="rank")
    p.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    p.add_argument("--det-vectors", help="file of det vectors to test instead of a framing")
    p.set_defaults(func=cmd_verify_universal)

    p = sub.add_parser("grope", help="triple linking from grope intersection numbers")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    _add_format_arg(p)
    for name in ("cy", "dz", "cz", "dy"):
        _int_list(p, name)
    p.set_defaults(func=cmd_grope)

    p = sub.add_parser("hantzsche", help="square-order test and Lagrangian splitting")
    _add_framing_args(p)
    p.set_defaults(func=cmd_hantzsche)

    p = sub.add_parser("scan", help="search for obstructed vectors")
    _add_framing_args(p)
    p.add_argument("--strategy", choices=("sequential", "random"), default="sequential")
    p.add_argument("--max-vectors", type=int)
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--candidates", help="file of vectors to check, one per line")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else LOG_LEVEL, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (LinkingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
