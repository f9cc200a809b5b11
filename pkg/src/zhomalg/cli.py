"""Command-line interface: ``zhomalg <command> ...``.

Every command prints one JSON document (or a plain-text rendering of it with
``--format text``). Integers inside reports are decimal strings.

Exit status: 0 on success, 1 when a computation's precondition fails (or a
check suite finds a failure), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Callable, Optional, Sequence

from .batteries import SUITES, run_suite
from .errors import InputError, LiteralError, ZHomalgError
from .fgab import FgAbGroup, hom_group, parse_group, tensor
from .intlin import IntMatrix, smith_normal_form
from .robinson import paper_example_report, pi0_report
from .torfun import free_resolution, tor_table


class ParseFailure(Exception):
    """Raised while reading arguments; mapped to exit status 2."""


def _group(text: str) -> FgAbGroup:
    try:
        return parse_group(text)
    except LiteralError as exc:
        raise ParseFailure(str(exc)) from None


def _matrix(text: str) -> IntMatrix:
    try:
        return IntMatrix.from_json(text)
    except (LiteralError, InputError) as exc:
        raise ParseFailure(str(exc)) from None


def group_report(G: FgAbGroup) -> dict:
    c = G.canonical
    return {
        "literal": c.literal(),
        "invariant_factors": [str(d) for d in c.factors],
        "free_rank": str(c.free_rank),
    }


def cmd_snf(args) -> dict:
    A = _matrix(args.matrix)
    s = smith_normal_form(A)
    return {
        "rows": str(A.rows),
        "cols": str(A.cols),
        "rank": str(s.rank),
        "diagonal": [str(d) for d in s.diagonal],
        "U": s.U.to_json(),
        "D": s.D.to_json(),
        "V": s.V.to_json(),
    }


def cmd_classify(args) -> dict:
    return group_report(_group(args.group))


def cmd_tensor(args) -> dict:
    A, B = _group(args.A), _group(args.B)
    return {"A": A.literal(), "B": B.literal(), "result": group_report(tensor(A, B).group)}


def cmd_hom(args) -> dict:
    A, B = _group(args.A), _group(args.B)
    return {"A": A.literal(), "B": B.literal(), "result": group_report(hom_group(A, B).group)}


def cmd_tor(args) -> dict:
    A, B = _group(args.A), _group(args.B)
    if args.nmax < 0:
        raise InputError("nmax must be non-negative")
    return tor_table(A, B, args.nmax)


def cmd_resolve(args) -> dict:
    G = _group(args.group)
    r = free_resolution(G, args.style, args.pad)
    return {
        "group": G.literal(),
        "style": args.style,
        "ranks": [str(n) for n in r.ranks],
        "boundaries": [d.to_json() for d in r.boundaries],
        "augmentation": r.augmentation.matrix.to_json(),
        "exact": r.is_exact(),
    }


def cmd_pi0(args) -> dict:
    A, B = _group(args.A), _group(args.B)
    return pi0_report(A, B, args.rank)


def cmd_robinson_demo(args) -> dict:
    return paper_example_report()


def cmd_check(args) -> dict:
    return run_suite(args.suite, args.seed).to_json()


SCHEMA_FILES = {
    "snf": "snf.json",
    "classify": "classify.json",
    "tensor": "binary.json",
    "hom": "binary.json",
    "tor": "tor.json",
    "resolve": "resolve.json",
    "pi0": "pi0.json",
    "robinson-demo": "robinson-demo.json",
    "check": "check.json",
}


def load_schema(command: str) -> dict:
    """The JSON schema shipped for a command's report."""
    text = resources.files("zhomalg").joinpath("schemas", SCHEMA_FILES[command]).read_text()
    return json.loads(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zhomalg", description="Exact homological algebra over the integers.")
    parser.add_argument("--format", choices=("json", "text"), default="json", help="output format (default: json)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        return p

    p = add("snf", cmd_snf, "Smith normal form of a JSON integer matrix")
    p.add_argument("matrix", help='e.g. \'[["2","4"],["6","8"]]\'')
    p = add("classify", cmd_classify, "invariant factors of a group literal")
    p.add_argument("group")
    for name, fn, text in (("tensor", cmd_tensor, "A (x) B"), ("hom", cmd_hom, "Hom(A, B)")):
        p = add(name, fn, text)
        p.add_argument("A")
        p.add_argument("B")
    p = add("tor", cmd_tor, "Tor_n(A, B) for n = 0..nmax")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("nmax", nargs="?", type=int, default=2)
    p = add("resolve", cmd_resolve, "a free resolution of a group")
    p.add_argument("group")
    p.add_argument("--style", choices=("minimal", "padded", "presentation"), default="minimal")
    p.add_argument("--pad", type=int, default=1, help="extra free summands for --style padded")
    p = add("pi0", cmd_pi0, "path components of the truncated torsion category")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("--rank", type=int, default=2, help="truncation rank (default: 2)")
    add("robinson-demo", cmd_robinson_demo, "the Z/4 (x) Z/6 component computation, step by step")
    p = add("check", cmd_check, "run a named property battery")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    return parser


def render_text(report, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k, v in report.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (str, int, bool)) or x is None for x in (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            elif isinstance(v, dict):
                lines.append(f"{pad}{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()))
            elif isinstance(v, list):
                lines.append(f"{pad}{k}: [{', '.join(str(x) for x in v)}]")
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{report}")
    return "\n".join(lines)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.fn(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ZHomalgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))
    if args.command == "check" and not report["pass"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())
