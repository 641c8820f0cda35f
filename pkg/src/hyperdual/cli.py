"""``hyperdual`` command-line interface.

Exit codes: 0 ok, 1 usage error, 2 parse or validation error, 3 a theorem
check or oracle comparison failed.  ``iso`` exits 1 for non-isomorphic input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .census import SUITE_NAMES, CensusError, enumerate_hypermaps, run_checks, verify_multiplicativity, verify_properties
from .core import (
    HmapError,
    arrows_from_flags,
    canonical_form,
    count_summary,
    edge_flags,
    flags_from_arrows,
    parse_arrow_presentation,
    serialize_arrow_presentation,
)
from .duality import partial_dual, retrace_partial_dual
from .polynomial import poly_direct, poly_subset_formula
from .structure import NotABouquet, intersection_graph

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Invalid(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Invalid(f"{path}: {exc.strerror}") from None
    try:
        ap = parse_arrow_presentation(text)
    except HmapError as exc:
        raise _Invalid(f"{path}: {exc}") from None
    return ap, flags_from_arrows(ap)


def _default_jobs():
    try:
        return int(os.environ.get("HYPERDUAL_JOBS", "1"))
    except ValueError:
        return 1


def cmd_stats(args, out):
    _, fs = _read(args.file)
    s = count_summary(fs)
    if args.json:
        print(json.dumps(s.to_json(), sort_keys=True), file=out)
    else:
        print(s.render(), file=out)
    return EXIT_OK


def cmd_dual(args, out):
    ap, fs = _read(args.file)
    edges = [e for e in args.edges.split(",") if e] if args.edges else []
    unknown = set(edges) - set(edge_flags(fs))
    if unknown:
        raise _Invalid(f"unknown hyperedge id(s): {', '.join(sorted(unknown))}")
    dual = partial_dual(fs, edges)
    if args.oracle:
        traced = flags_from_arrows(retrace_partial_dual(ap, edges))
        if canonical_form(traced) != canonical_form(dual):
            print("oracle mismatch: retraced dual differs from flag-swap dual", file=sys.stderr)
            return EXIT_VIOLATION
    print(serialize_arrow_presentation(arrows_from_flags(dual, ap.name)), end="", file=out)
    return EXIT_OK


def cmd_poly(args, out):
    _, fs = _read(args.file)
    if args.method == "direct":
        p = poly_direct(fs, args.jobs)
    elif args.method == "formula":
        p = poly_subset_formula(fs, args.jobs)
    else:
        p = poly_direct(fs, args.jobs)
        q = poly_subset_formula(fs, args.jobs)
        if p != q:
            print(f"engine mismatch: direct {p} vs formula {q}", file=sys.stderr)
            return EXIT_VIOLATION
    if args.json:
        print(json.dumps(p.to_json()), file=out)
    else:
        print(p, file=out)
    return EXIT_OK


def cmd_igraph(args, out):
    _, fs = _read(args.file)
    try:
        ig = intersection_graph(fs)
    except NotABouquet as exc:
        raise _Invalid(str(exc)) from None
    if args.dot:
        print(ig.to_dot(), end="", file=out)
    else:
        print("vertices: " + " ".join(ig.vertices), file=out)
        for a, b in ig.edges:
            print(f"{a} -- {b}", file=out)
    return EXIT_OK


def cmd_check(args, out):
    _, fs = _read(args.file)
    failed = False
    rows = []
    for suite in SUITE_NAMES:
        if suite == "multiplicativity":
            rep = verify_multiplicativity([fs], pairs=1, max_flags=fs.flag_count)
            n, fails = rep.checks, rep.failures
        else:
            n, fails = run_checks(suite, fs)
        status = "n/a" if n == 0 else ("FAIL" if fails else "pass")
        failed |= bool(fails)
        rows.append((suite, n, status))
        for f in fails:
            rows.append((f"  {f.check} {f.detail}", "", f"expected {f.expected}, got {f.actual}"))
    width = max(len(r[0]) for r in rows)
    for name, n, status in rows:
        print(f"{name:<{width}}  {str(n):>6}  {status}", file=out)
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_iso(args, out):
    _, fs1 = _read(args.file1)
    _, fs2 = _read(args.file2)
    same = canonical_form(fs1) == canonical_form(fs2)
    print("isomorphic" if same else "not isomorphic", file=out)
    return EXIT_OK if same else 1


def cmd_census(args, out):
    try:
        instances = list(
            enumerate_hypermaps(
                args.max_flags,
                connected_only=not args.all_components,
                orientable_only=args.orientable,
                bouquets_only=args.bouquets,
                force=args.force,
            )
        )
        report = verify_properties(instances, args.suite, jobs=args.jobs, pairs=args.pairs)
    except CensusError as exc:
        raise _Invalid(str(exc)) from None
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.dumps() + "\n")
    if args.json:
        print(report.dumps(), file=out)
    else:
        status = "pass" if report.passed else "FAIL"
        print(
            f"suite={report.suite} instances={report.instances} checks={report.checks} "
            f"failures={len(report.failures)} {status}",
            file=out,
        )
        for f in report.failures[:20]:
            print(f"  [{f.suite}/{f.check}] {f.hmap} {f.detail}: expected {f.expected}, got {f.actual}", file=out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def build_parser():
    p = _Parser(prog="hyperdual", description="Ribbon hypermaps, partial duals and the partial-dual genus polynomial.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", help="counts, Euler characteristic, genus, orientability")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("dual", help="partial dual with respect to a set of hyperedges")
    s.add_argument("file")
    s.add_argument("--edges", default="", help="comma-separated hyperedge ids")
    s.add_argument("--oracle", action="store_true", help="cross-check against the arrow-retracing construction")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("poly", help="partial-dual genus polynomial")
    s.add_argument("file")
    s.add_argument("--method", choices=["direct", "formula", "both"], default="formula")
    s.add_argument("--json", action="store_true")
    s.add_argument("--jobs", type=int, default=_default_jobs())
    s.set_defaults(func=cmd_poly)

    s = sub.add_parser("igraph", help="intersection graph of a hyper-bouquet")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_igraph)

    s = sub.add_parser("check", help="run every applicable theorem check on one hypermap")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("iso", help="decide isomorphism of two hypermaps")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("census", help="verify theorem suites over all small hypermaps")
    s.add_argument("--max-flags", type=int, required=True)
    s.add_argument("--orientable", action="store_true")
    s.add_argument("--bouquets", action="store_true", help="only hypermaps with one hypervertex")
    s.add_argument("--all-components", action="store_true", help="include disconnected hypermaps")
    s.add_argument("--suite", choices=["all"] + SUITE_NAMES, default="all")
    s.add_argument("--jobs", type=int, default=_default_jobs())
    s.add_argument("--pairs", type=int, default=100, help="sampled pairs for the multiplicativity suite")
    s.add_argument("--out")
    s.add_argument("--json", action="store_true")
    s.add_argument("--force", action="store_true", help="allow more than 12 flags")
    s.set_defaults(func=cmd_census)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Invalid as exc:
        print(f"hyperdual: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
