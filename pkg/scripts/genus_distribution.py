"""Tabulate partial-dual genus polynomials over the census.

Prints, per flag count, how many classes there are, how many have a nonzero
constant term, and the most common polynomials.  ``--json`` dumps everything.
"""

import argparse
import json
from collections import Counter, defaultdict
from dataclasses import dataclass

from hyperdual.census import enumerate_hypermaps
from hyperdual.polynomial import constant_term, poly_subset_formula


@dataclass
class DistributionConfig:
    max_flags: int = 8
    orientable_only: bool = False
    bouquets_only: bool = False
    top: int = 5


def tabulate(cfg: DistributionConfig):
    by_flags = defaultdict(Counter)
    with_const = Counter()
    for fs in enumerate_hypermaps(cfg.max_flags, orientable_only=cfg.orientable_only, bouquets_only=cfg.bouquets_only):
        p = poly_subset_formula(fs)
        by_flags[fs.flag_count][str(p)] += 1
        with_const[fs.flag_count] += constant_term(p) != 0
    return by_flags, with_const


def main():
    ap = argparse.ArgumentParser(description="partial-dual genus polynomials over the census")
    ap.add_argument("--max-flags", type=int, default=8)
    ap.add_argument("--orientable", action="store_true")
    ap.add_argument("--bouquets", action="store_true")
    ap.add_argument("--top", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = DistributionConfig(args.max_flags, args.orientable, args.bouquets, args.top)
    table, with_const = tabulate(cfg)
    if args.json:
        print(json.dumps({n: dict(c) for n, c in sorted(table.items())}, indent=2, sort_keys=True))
        return 0
    for n, polys in sorted(table.items()):
        total = sum(polys.values())
        print(f"flags={n}: {total} classes, {with_const[n]} with nonzero constant term")
        for p, c in polys.most_common(cfg.top):
            print(f"  {c:>4}  {p}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
