#!/usr/bin/env python3
"""Min-max load maintenance on the chain-of-blocks adversary.

For each L the script runs the exact min-max protocol on the adversarial
arrival order and reports the measured reassignments next to the forced
lower bound (L/4)(L/2-1)(L/2)/2 and the finite upper budget
32 n min(L ln^2 n, sqrt(n) ln n).
"""

from __future__ import annotations

import argparse
import math

from sapmatch import gen_minmax_adversary, run_minmax


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--loads", default="4,8,12",
                        help="comma-separated L values (multiples of 4)")
    args = parser.parse_args()

    print(f"{'L':>4} {'clients':>8} {'reassign':>9} {'forced>=':>9} {'budget<=':>12}")
    for part in args.loads.split(","):
        L = int(part)
        instance = gen_minmax_adversary(L)
        _, log, epochs = run_minmax(instance)
        n = instance.client_count
        forced = (L // 4) * (L // 2 - 1) * (L // 2) // 2
        budget = 32 * n * min(L * math.log(n) ** 2, math.sqrt(n) * math.log(n))
        assert epochs[-1].opt == L
        assert forced <= log.total_replacements <= budget
        print(
            f"{L:>4} {n:>8} {log.total_replacements:>9} {forced:>9} {budget:>12.0f}"
        )


if __name__ == "__main__":
    main()
