#!/usr/bin/env python3
"""Regenerate every bundled figure dataset (CSV + meta + SVG) from configs/.

The two full-pipeline maps (fig8a, fig8b) integrate 1600 slow sweeps each and
dominate the runtime; use --only to regenerate a subset, e.g.
``python scripts/make_figures.py --only fig2``.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from ptchain.cli import main as ptchain_main

REPO = Path(__file__).resolve().parent.parent

# heatmap color column where the default would pick the wrong observable
Z_COLUMN = {"fig4": "omega"}


def run_one(config: Path, out_dir: Path, jobs: int) -> int:
    stem = out_dir / config.stem
    args = [
        "sweep", "--config", str(config), "--out", str(stem),
        "--format", "csv+svg", "--jobs", str(jobs),
    ]
    if config.stem in Z_COLUMN:
        args += ["--z", Z_COLUMN[config.stem]]
    return ptchain_main(args)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--configs", type=Path, default=REPO / "configs")
    parser.add_argument("--out", type=Path, default=REPO / "out" / "figures")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--only", default="", help="substring filter on config names")
    args = parser.parse_args()

    configs = sorted(p for p in args.configs.glob("*.json") if args.only in p.stem)
    if not configs:
        print(f"no configs matching {args.only!r} under {args.configs}", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for config in configs:
        start = time.perf_counter()
        code = run_one(config, args.out, args.jobs)
        print(f"{config.stem}: exit {code} in {time.perf_counter() - start:.1f}s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
