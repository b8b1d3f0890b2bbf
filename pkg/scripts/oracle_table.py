"""Brute-force optima on one-dimensional windows next to the closed forms.

    python scripts/oracle_table.py --ks 2 3 --ms 1 2 3 4
"""

from __future__ import annotations

import argparse
import time

from conway_mk.board import GameParams
from conway_mk.bounds import max_row_1d, row1_cap
from conway_mk.oracle import MAX_COUNT_AT, MAX_ROW, SearchConfig, bfs_optimum, default_depth


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ks", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--ms", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--extra-depth", type=int, default=0, help="rows beyond the default window")
    ap.add_argument("--budget", type=int, default=10**7)
    args = ap.parse_args(argv)

    print("k  m  objective     depth  oracle  formula  exhausted   states   secs")
    for k in args.ks:
        for m in args.ms:
            params = GameParams(m, k, 1)
            for obj, formula in ((MAX_ROW, max_row_1d(m, k)), (MAX_COUNT_AT, row1_cap(m, k))):
                depth = default_depth(params, obj) + args.extra_depth
                at = (1,) if obj == MAX_COUNT_AT else None
                t0 = time.perf_counter()
                r = bfs_optimum(SearchConfig(params, depth=depth, objective=obj, at=at, max_states=args.budget))
                secs = time.perf_counter() - t0
                print(
                    f"{k}  {m}  {obj:<12}  {depth:5d}  {r.value:6d}  {formula:7d}  "
                    f"{str(r.exhausted):>9}  {r.states:7d}  {secs:5.1f}"
                )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
