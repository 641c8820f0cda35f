"""Run every verification suite over the census tiers and write a JSON summary.

    python3 scripts/run_census.py --max-flags 10 --out results/census.json
"""

import argparse
import dataclasses
import json
import time
from dataclasses import dataclass, field

from hyperdual.census import SUITE_NAMES, enumerate_hypermaps, verify_properties


@dataclass
class CensusConfig:
    max_flags: int = 8
    suites: list = field(default_factory=lambda: list(SUITE_NAMES))
    jobs: int = 1
    pairs: int = 100
    bouquet_max_flags: int = 10


def run(cfg: CensusConfig) -> dict:
    rows = []
    census = list(enumerate_hypermaps(cfg.max_flags))
    bouquets = list(enumerate_hypermaps(cfg.bouquet_max_flags, bouquets_only=True))
    for suite in cfg.suites:
        pool = bouquets if suite == "bouquet-constant-term" else census
        t0 = time.perf_counter()
        rep = verify_properties(pool, suite, jobs=cfg.jobs, pairs=cfg.pairs)
        rows.append(
            dict(
                suite=suite,
                instances=rep.instances,
                checks=rep.checks,
                failures=len(rep.failures),
                seconds=round(time.perf_counter() - t0, 3),
            )
        )
        print(f"{suite:<24} {rep.instances:>5} {rep.checks:>7} {len(rep.failures):>3} {rows[-1]['seconds']:>8.2f}s")
    return {"config": dataclasses.asdict(cfg), "suites": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-flags", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--pairs", type=int, default=100)
    ap.add_argument("--out")
    args = ap.parse_args()
    result = run(CensusConfig(max_flags=args.max_flags, jobs=args.jobs, pairs=args.pairs))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result, fh, indent=2)
    return 0 if all(r["failures"] == 0 for r in result["suites"]) else 3


if __name__ == "__main__":
    raise SystemExit(main())
