#!/usr/bin/env python3
"""Survey the minimum size of maximal squares at small orders.

For each order the exhaustive ascending-size search proves the least
filled-cell count of any maximal square, and for orders small enough to
census completely it also reports the full size histogram of canonical
maximal squares.  The general lower bound ceil(n^2 / 3) (two layers) is
printed next to each proven minimum; everything beyond that bound is a
computed value with no published reference, so runs of this script are
the provenance for the frozen numbers in the test suite.

Orders above 4 blow up quickly; use --budget to cap the node count and
--checkpoint-dir to make interrupted levels resumable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import ceil
from pathlib import Path

from mopls.search import min_maximal, verify_bound_exhaustive

# full census is cheap up to here; beyond it only the minimum is chased
CENSUS_LIMIT = 3


def survey_order(n: int, k: int, budget: int | None, checkpoint_dir: Path | None) -> dict:
    bound = ceil(n * n / 3) if k == 2 else 1
    started = time.time()
    if n <= CENSUS_LIMIT:
        report = verify_bound_exhaustive(n, k)
        row = {
            "n": n,
            "k": k,
            "min_size": report.min_size,
            "exact": True,
            "bound": bound,
            "nodes": report.nodes,
            "histogram": report.histogram,
            "minimum_count": len(report.minimum_witnesses),
            "tight_uniform_frequency": report.tight_uniform_frequency,
        }
    else:
        checkpoint = checkpoint_dir / f"min_{n}_{k}.json" if checkpoint_dir else None
        resume = checkpoint is not None and checkpoint.exists()
        result = min_maximal(n, k, budget=budget, checkpoint=checkpoint, resume=resume)
        row = {
            "n": n,
            "k": k,
            "min_size": result.min_size,
            "exact": result.exact,
            "bound": bound,
            "nodes": result.nodes,
            "no_maximal_below": result.no_maximal_below,
            "exhausted_budget": result.exhausted_budget,
        }
    row["seconds"] = round(time.time() - started, 2)
    return row


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--min-n", type=int, default=2)
    parser.add_argument("--max-n", type=int, default=4)
    parser.add_argument("--k", type=int, default=2, help="number of entry layers")
    parser.add_argument("--budget", type=int, help="node cap per order above the census limit")
    parser.add_argument("--checkpoint-dir", type=Path, help="directory for resumable level files")
    parser.add_argument("--out", type=Path, help="write the survey as JSON")
    args = parser.parse_args(argv)

    if args.checkpoint_dir:
        args.checkpoint_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    print(f"{'n':>3} {'min F':>6} {'bound':>6} {'exact':>6} {'nodes':>10} {'sec':>8}  notes")
    for n in range(args.min_n, args.max_n + 1):
        row = survey_order(n, args.k, args.budget, args.checkpoint_dir)
        rows.append(row)
        notes = []
        if "histogram" in row:
            notes.append(f"histogram {row['histogram']}")
            if row["tight_uniform_frequency"] is not None:
                notes.append(f"uniform-frequency minima: {row['tight_uniform_frequency']}")
        if row.get("exhausted_budget"):
            notes.append(f"budget hit, proven >= {row['no_maximal_below']}")
        print(
            f"{row['n']:>3} {str(row['min_size']):>6} {row['bound']:>6} "
            f"{str(row['exact']):>6} {row['nodes']:>10} {row['seconds']:>8.2f}  "
            + "; ".join(notes)
        )

    if args.out:
        doc = {"k": args.k, "budget": args.budget, "rows": rows}
        args.out.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
