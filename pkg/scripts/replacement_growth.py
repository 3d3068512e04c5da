#!/usr/bin/env python3
"""Replacement growth sweep: how totals scale against n ln^2(n).

Runs seeded random instances at increasing sizes through both engines and
prints one table row per (size, seed).  The `ratio` column (replacements
divided by n ln^2 n) flattening out is the headline behavior.
"""

from __future__ import annotations

import argparse
import math

from sapmatch import gen_random, run_fast_sap, run_sap


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="64,128,256,512")
    parser.add_argument("--seeds", type=int, default=3)
    parser.add_argument("--degree", type=int, default=3)
    parser.add_argument("--csv", default=None)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    header = f"{'n':>6} {'seed':>4} {'engine':>6} {'repl':>8} {'edges':>8} {'ratio':>8}"
    print(header)
    rows = ["n,seed,engine,total_replacements,total_path_edges,ratio"]
    for n in sizes:
        for seed in range(args.seeds):
            instance = gen_random(n, n, args.degree, seed)
            for name, runner in (("naive", run_sap), ("fast", run_fast_sap)):
                _, log = runner(instance)
                ratio = log.total_replacements / (n * math.log(n) ** 2)
                print(
                    f"{n:>6} {seed:>4} {name:>6} {log.total_replacements:>8}"
                    f" {log.total_path_edges:>8} {ratio:>8.4f}"
                )
                rows.append(
                    f"{n},{seed},{name},{log.total_replacements},"
                    f"{log.total_path_edges},{ratio:.6f}"
                )
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write("\n".join(rows) + "\n")
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
