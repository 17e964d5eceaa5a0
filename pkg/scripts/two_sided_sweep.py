"""Exhaustive single-deviation search in the market with private firm types."""
import argparse

from amipa.report import format_record, two_sided_record
from amipa.twosided import verify_two_sided


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-size", type=int, default=5, help="largest |S| and L tried")
    args = p.parse_args()
    for S in range(args.n + 1, args.max_size + 1):
        for L in range(args.n + 1, args.max_size + 1):
            wit = verify_two_sided(args.n, S, L)
            verdict = "certified" if wit is None else "refuted"
            print(f"n={args.n} S={S} L={L} verdict={verdict}")
            if wit is not None:
                print("  " + format_record(two_sided_record(wit, S, L)))


if __name__ == "__main__":
    main()
