"""``singcurve`` command line.

Exit codes: 0 success or affirmative answer, 1 negative decision, 2 input
error, 3 precision failure, 4 internal disagreement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import __version__
from .curves import CurveSpec, curve_from_branches, load_curve, parse_parametrization
from .errors import InputError, InternalError, NotEquisingular, PrecisionExhausted, SingcurveError
from .resolution import truncation_cap

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_PRECISION, EXIT_INTERNAL = 0, 1, 2, 3, 4


def read_curve(arg: str, truncation: int) -> CurveSpec:
    """Curve from an inline expression, a parametrization, a JSON file or ``-``."""
    if arg == "-":
        text = sys.stdin.read()
    elif os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = arg
    text = text.strip()
    if text.startswith("{"):
        return load_curve(text, truncation)
    if "(t)" in text:
        parts = [p for p in text.split("|") if p.strip()]
        return curve_from_branches([parse_parametrization(p) for p in parts], truncation)
    return load_curve({"polynomial": text, "truncation": truncation})


def _emit(doc) -> None:
    if isinstance(doc, str):
        sys.stdout.write(doc if doc.endswith("\n") else doc + "\n")
    else:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _branch_report(spec: CurveSpec, truncation: int) -> dict:
    from .invariants import characteristic_exponents

    out = []
    for b in spec.branches:
        ch = characteristic_exponents(b, truncation)
        out.append({
            "label": b.id,
            "x": b.x.to_str(),
            "y": b.y.to_str(),
            "exact": b.exact,
            "truncation": None if b.exact else b.truncation_order,
            "multiplicity": b.multiplicity(),
            "characteristic": [ch.beta0, *ch.betas],
        })
    return {"branches": out}


def cmd_branches(args) -> int:
    spec = read_curve(args.curve, args.truncation)
    report = _branch_report(spec, args.truncation)
    if args.json:
        _emit(report)
        return EXIT_OK
    lines = []
    for b in report["branches"]:
        ch = b["characteristic"]
        lines.append(f"{b['label']}: x(t) = {b['x']}; y(t) = {b['y']}")
        lines.append(f"  multiplicity {b['multiplicity']}, characteristic ({ch[0]}; {', '.join(map(str, ch[1:])) or '-'})")
    _emit("\n".join(lines))
    return EXIT_OK


def cmd_diagram(args) -> int:
    from .enriques import to_dot, to_json
    from .invariants import diagram_of

    spec = read_curve(args.curve, args.truncation)
    d = diagram_of(spec, args.truncation)
    if args.dot == "-":
        _emit(to_dot(d))
        return EXIT_OK
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(d))
    if args.json:
        _emit(to_json(d))
        return EXIT_OK
    lines = [f"vertices: {len(d.vertices)}"]
    for v in sorted(d.vertices.values(), key=lambda v: (v.level, v.id)):
        lines.append(f"  {v.id}  mu={v.multiplicity}  branches={','.join(sorted(v.branches))}")
    lines.append(f"edges: {len(d.edges)}")
    for p, c, k in d.edge_list():
        lines.append(f"  {p} -> {c}  {k.short}")
    lines.append(f"code: {canonical_code_of(d)}")
    _emit("\n".join(lines))
    return EXIT_OK


def canonical_code_of(d) -> str:
    from .enriques import canonical_code

    return canonical_code(d)


def cmd_invariants(args) -> int:
    from .invariants import (
        characteristic_exponents,
        euclid_multiplicities,
        multiplicity_sequence,
        orders_of_polynomials,
        pairwise_intersections,
        semigroup_elements,
        semigroup_generators,
        semigroup_oracle_bound,
    )
    from .resolution import resolve

    spec = read_curve(args.curve, args.truncation)
    out, disagree = [], []
    for b in spec.branches:
        ch = characteristic_exponents(b, args.truncation)
        seq = multiplicity_sequence(b, args.truncation)
        euclid = euclid_multiplicities(ch)
        gens = semigroup_generators(ch)
        bound = semigroup_oracle_bound(gens, ch)
        sampled = orders_of_polynomials(b, bound)
        if seq != euclid:
            disagree.append(f"{b.id}: multiplicity sequence {seq} vs Euclid {euclid}")
        if sampled != semigroup_elements(gens, bound):
            disagree.append(f"{b.id}: semigroup <{gens}> disagrees with sampled orders below {bound}")
        out.append({
            "label": b.id,
            "characteristic": [ch.beta0, *ch.betas],
            "multiplicity_sequence": list(seq),
            "semigroup": list(gens),
        })
    pairs = []
    if len(spec.branches) > 1:
        table = pairwise_intersections(resolve(spec, args.truncation))
        ids = [b.id for b in spec.branches]
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                pairs.append({"branches": [a, b], "intersection": table[(a, b)]})
    _emit({"branches": out, "intersections": pairs})
    for msg in disagree:
        print(f"singcurve: internal disagreement: {msg}", file=sys.stderr)
    return EXIT_INTERNAL if disagree else EXIT_OK


def cmd_compare(args) -> int:
    from .invariants import equisingular_by_branches, equisingular_by_diagram

    a = read_curve(args.curve_a, args.truncation)
    b = read_curve(args.curve_b, args.truncation)
    by_diagram, mapping = equisingular_by_diagram(a, b, args.truncation)
    sigma = equisingular_by_branches(a, b, args.truncation)
    report = {
        "equisingular": by_diagram,
        "by_diagram": by_diagram,
        "by_branches": sigma is not None,
        "sigma": None if sigma is None else {a.branches[i].id: b.branches[j].id for i, j in enumerate(sigma)},
        "mapping": mapping,
    }
    _emit(report)
    if by_diagram != (sigma is not None):
        print("singcurve: the two equisingularity deciders disagree", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK if by_diagram else EXIT_NO


def cmd_noether(args) -> int:
    from .invariants import intersection_oracle_curves, noether_terms

    a = read_curve(args.curve_a, args.truncation)
    b = read_curve(args.curve_b, args.truncation)
    terms = noether_terms(a, b, args.truncation)
    total = sum(x * y for _, x, y in terms)
    oracle = intersection_oracle_curves(a, b)
    _emit({
        "points": [{"point": p, "mu_a": x, "mu_b": y, "product": x * y} for p, x, y in terms],
        "noether": total,
        "oracle": oracle,
    })
    if total != oracle:
        print(f"singcurve: Noether sum {total} differs from oracle {oracle}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_trace(args) -> int:
    from .trace import build_trace

    a = read_curve(args.curve_a, args.truncation)
    b = read_curve(args.curve_b, args.truncation)
    try:
        t = build_trace(a, b, args.truncation)
    except NotEquisingular as exc:
        _emit({"equisingular": False, "error": str(exc)})
        return EXIT_NO
    _emit(t.to_json())
    return EXIT_OK


def cmd_fuzz(args) -> int:
    from .fuzz import run_fuzz

    if args.count < 0:
        raise InputError("--count must be non-negative")
    report = run_fuzz(args.seed, args.count, inject_fault=args.inject_fault)
    _emit(report)
    return EXIT_OK if report["failed"] == 0 else EXIT_NO


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--truncation", type=_positive, default=32,
                        help="initial series truncation (doubled automatically)")
    common.add_argument("--max-truncation", type=_positive, default=None,
                        help="cap for automatic doubling (default: $SINGCURVE_MAX_TRUNCATION or 1024)")
    p = argparse.ArgumentParser(prog="singcurve", description="Plane curve singularities over Q.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("branches", parents=[common], help="Puiseux branches of a curve")
    s.add_argument("curve")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_branches)

    s = sub.add_parser("diagram", parents=[common], help="Enriques diagram")
    s.add_argument("curve")
    s.add_argument("--dot", metavar="PATH", help="write DOT to PATH ('-' for stdout)")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("invariants", parents=[common], help="characteristic, multiplicities, semigroups")
    s.add_argument("curve")
    s.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    s.set_defaults(func=cmd_invariants)

    for name, func, text in (("compare", cmd_compare, "decide equisingularity"),
                             ("noether", cmd_noether, "intersection multiplicity"),
                             ("trace", cmd_trace, "replay the equisingularity induction")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("curve_a")
        s.add_argument("curve_b")
        s.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
        s.set_defaults(func=func)

    s = sub.add_parser("fuzz", parents=[common], help="randomized differential testing")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_fuzz)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        with truncation_cap(args.max_truncation):
            return args.func(args)
    except InternalError as exc:
        print(f"singcurve: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except PrecisionExhausted as exc:
        print(f"singcurve: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except InputError as exc:
        print(f"singcurve: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotEquisingular as exc:
        print(f"singcurve: {exc}", file=sys.stderr)
        return EXIT_NO
    except SingcurveError as exc:
        print(f"singcurve: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"singcurve: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"singcurve: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
