#!/usr/bin/env python3
"""Run the duality pipeline on every built-in case.

Prints the summary table and writes ``report.json`` and ``report.txt`` into
the output directory. Exit status is 1 if any case FAILs.
"""

import argparse
import logging
import sys
import time
from pathlib import Path

from k3dual import io
from k3dual.pipeline import SearchConfig, format_table, reverify, verify_all

log = logging.getLogger("reproduce")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--bound", type=int, default=None)
    ap.add_argument("--timeout", type=float, default=5.0)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    overrides = {"timeout": args.timeout}
    if args.bound:
        overrides["search_bound"] = args.bound
    cfg = SearchConfig.from_env(**overrides)

    start = time.monotonic()
    reports = verify_all(cfg)
    log.info("pipeline finished in %.2fs", time.monotonic() - start)

    # witnesses must survive a JSON round trip
    problems = {r.case: reverify(io.encode(r.as_dict())) for r in reports}
    for case, bad in problems.items():
        for msg in bad:
            log.error("%s: %s", case, msg)

    table = format_table(reports)
    sys.stdout.write(table)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "report.json").write_text(io.dumps({"reports": [r.as_dict() for r in reports]}), encoding="utf-8")
    (args.out / "report.txt").write_text(table, encoding="utf-8")
    print(f"\nwrote {args.out / 'report.json'} and {args.out / 'report.txt'}")
    failed = any(r.verdict == "FAIL" for r in reports) or any(problems.values())
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
