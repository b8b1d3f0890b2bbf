"""Dense scan of the projection construction against the upper bound.

Writes the m values where the construction falls short, and reports which
even Lucas numbers appear among them.

    python scripts/lucas_scan.py --m-to 100000 --workers 8 --out gap.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from conway_mk.bounds import scan_gap
from conway_mk.sequences import lucas


@dataclass
class ScanConfig:
    k: int = 2
    d: int = 2
    m_from: int = 2
    m_to: int = 10_000
    workers: int = 1
    out: str | None = None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--m-from", type=int, default=2)
    ap.add_argument("--m-to", type=int, default=10_000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out")
    cfg = ScanConfig(**vars(ap.parse_args(argv)))

    t0 = time.perf_counter()
    rows = scan_gap(cfg.k, cfg.d, range(cfg.m_from, cfg.m_to + 1), workers=cfg.workers)
    elapsed = time.perf_counter() - t0

    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["m", "upper", "achieved"])
    w.writerows(rows)
    if cfg.out:
        fh.close()

    misses = {m for m, _, _ in rows}
    print(f"# {len(rows)} misses in [{cfg.m_from}, {cfg.m_to}] ({elapsed:.1f}s)", file=sys.stderr)
    if cfg.k == 2:
        j = 1
        while lucas(2 * j) <= cfg.m_to:
            m = lucas(2 * j)
            if m >= cfg.m_from:
                print(f"# L({2 * j}) = {m}: {'miss' if m in misses else 'hit'}", file=sys.stderr)
            j += 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
