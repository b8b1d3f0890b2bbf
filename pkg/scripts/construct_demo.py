"""Build, replay and energy-check the constructions for a parameter set.

    python scripts/construct_demo.py --m 3 --k 2 --d 2 --trace-dir traces/
"""

from __future__ import annotations

import argparse
import pathlib

from conway_mk.board import GameParams, dump_trace, max_row_occupied
from conway_mk.bounds import bounds_report
from conway_mk.strategies import projection_plan, single_square_plan, verify_plan


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--trace-dir")
    args = ap.parse_args(argv)
    params = GameParams(args.m, args.k, args.d)

    rep = bounds_report(params)
    print(f"{params}: lower {rep.lower}, achieved {rep.achieved}, upper {rep.upper}"
          f"{' (strict)' if rep.strict_upper else ''}; projected counts {rep.projected_m}")

    status = 0
    for name, plan in (("row", projection_plan(params)), ("square", single_square_plan(params))):
        trace = plan.flatten()
        check = verify_plan(trace, energy_check=True)
        extra = f"top row {max_row_occupied(check.final)}" if check.final is not None else check.error
        print(f"  {name:6s} {len(trace):8d} moves  claim {trace.claim}  ok={check.ok}  "
              f"energy increases={check.energy_increases}  {extra}")
        status |= not check.ok
        if args.trace_dir:
            out = pathlib.Path(args.trace_dir)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"{name}_m{args.m}_k{args.k}_d{args.d}.jsonl"
            with open(path, "w", newline="\n") as fh:
                dump_trace(trace, fh)
            print(f"         written to {path}")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
