"""Command-line front end.

Every subcommand reads JSON input files and writes plain text (or JSON) to
stdout.  Exit status: 0 on success, 1 on bad input, 2 when the oracle reports
a failed check.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .bdiagram import (
    compare_framed,
    compare_unframed,
    evaluate,
    format_table,
    framed_to_json,
    jumping_rates,
    morphism_matrix,
)
from .eggers import build_tree, export_tree
from .exactnum import ExtRat, format_fraction, parse_fraction
from .mdcurve import md_diagram, relative_multiplicities
from .oracle import crosscheck, random_corpus
from .puiseux import conjugacy_warnings, curve_to_json, format_series, load_curve
from .simplicial import bcone_diagram, pair_from_json


def _warn(curve) -> None:
    for msg in conjugacy_warnings(curve):
        print(f"warning: {msg}", file=sys.stderr)


def _cmd_compute(args) -> int:
    curve = load_curve(args.curve)
    _warn(curve)
    f = md_diagram(curve)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(framed_to_json(f), fh, indent=2)
            fh.write("\n")
    if args.at is None:
        sys.stdout.write(format_table(f))
        return 0
    b = ExtRat(args.at)
    if b == 0:
        raise ValueError("b must be positive")
    out = [f"b = {b}", f"rank0 = {evaluate(f.deg0, b)}", f"rank1 = {evaluate(f.deg1, b)}"]
    for d in f.degrees:
        out.append(f"h{d.degree}^(inf,{b}) = {morphism_matrix(d, 'inf', b)}")
    if b >= 1:
        for d in f.degrees:
            out.append(f"h{d.degree}^({b},1) = {morphism_matrix(d, b, 1)}")
    print("\n".join(out))
    return 0


def _cmd_tree(args) -> int:
    curve = load_curve(args.curve)
    _warn(curve)
    sys.stdout.write(export_tree(build_tree(curve), "dot" if args.dot else "json"))
    return 0


def _cmd_jumps(args) -> int:
    curve = load_curve(args.curve)
    for t in sorted(jumping_rates(md_diagram(curve))):
        print(format_fraction(t))
    return 0


def _cmd_compare(args) -> int:
    fa = md_diagram(load_curve(args.a))
    fb = md_diagram(load_curve(args.b))
    if args.framed:
        print(f"framed: {'true' if compare_framed(fa, fb) else 'false'}")
    else:
        print(compare_unframed(fa, fb).value)
    return 0


def _cmd_multiplicities(args) -> int:
    report = relative_multiplicities(load_curve(args.curve))
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        sys.stdout.write(report.format())
    return 0


def _cmd_oracle(args) -> int:
    curves = []
    if args.curve:
        curves.append(load_curve(args.curve))
    if args.random:
        curves.extend(random_corpus(args.seed, args.random))
    if not curves:
        raise ValueError("give a curve file or --random K")
    reports = [crosscheck(c) for c in curves]
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        for r in reports:
            sys.stdout.write(r.format())
        n_ok = sum(r.all_passed for r in reports)
        print(f"{n_ok}/{len(reports)} curves passed")
    return 0 if all(r.all_passed for r in reports) else 2


def _cmd_cone(args) -> int:
    with open(args.complex, encoding="utf-8") as fh:
        pair = pair_from_json(json.load(fh))
    diag = bcone_diagram(pair, parse_fraction(args.b))
    if args.json:
        print(json.dumps(diag.to_json(), indent=2))
    else:
        sys.stdout.write(diag.format())
    return 0


def _cmd_normalize(args) -> int:
    curve = load_curve(args.curve)
    if args.text:
        for s in curve.branches:
            print(f"{s.branch_id}: {format_series(s)}")
    else:
        print(json.dumps(curve_to_json(curve), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdhom", description="Moderately discontinuous homology of plane curve germs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="framed MD homology diagram of a curve")
    p.add_argument("curve")
    p.add_argument("--at", metavar="B", help="ranks and morphisms at b (p/q or inf)")
    p.add_argument("--json", metavar="OUT", help="also write the framed diagram as JSON")
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("tree", help="Eggers-Wall tree")
    p.add_argument("curve")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true", help="(default)")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("jumps", help="jumping rates, one per line")
    p.add_argument("curve")
    p.set_defaults(func=_cmd_jumps)

    p = sub.add_parser("compare", help="compare the MD homology of two curves")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--framed", action="store_true", help="compare framed diagrams")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("multiplicities", help="relative multiplicities over tangent lines")
    p.add_argument("curve")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_multiplicities)

    p = sub.add_parser("oracle", help="cross-check the engine against brute-force oracles")
    p.add_argument("curve", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=0, metavar="K", help="also check K seeded random curves")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("cone", help="MD homology of the b-cone over a simplicial pair")
    p.add_argument("complex")
    p.add_argument("--b", required=True, metavar="P/Q")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cone)

    p = sub.add_parser("normalize", help="print a curve in canonical form")
    p.add_argument("curve")
    p.add_argument("--text", action="store_true", help="series text instead of term arrays")
    p.set_defaults(func=_cmd_normalize)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
