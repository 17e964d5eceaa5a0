"""Certify or refute every announcement rule over a grid of market sizes.

    python3 scripts/run_sweep.py --max-n 4 --max-l 7 --jobs 4
"""
import argparse
import time

from amipa.cli import sweep
from amipa.information import PolicyKind
from amipa.market import Regime
from amipa.report import format_record
from amipa.rules import Announcer


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-l", type=int, default=6)
    p.add_argument("--regime", default="injective", choices=[r.value for r in Regime])
    p.add_argument("--policy", default="rationalizable")
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()

    start = time.perf_counter()
    rows = sweep(range(2, args.max_n + 1), range(3, args.max_l + 1), list(Announcer),
                 PolicyKind(args.policy), Regime(args.regime), jobs=args.jobs)
    for rec in rows:
        print(format_record(rec))
    print(f"# {len(rows)} cells in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
