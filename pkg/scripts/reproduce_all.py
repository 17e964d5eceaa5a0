"""Run every worked example and print its records; exits nonzero on any mismatch."""
import sys

from amipa.cases import CASES, reproduce
from amipa.report import format_record


def main() -> int:
    bad = 0
    for case in CASES:
        result = reproduce(case)
        for rec in result.records:
            print(format_record(rec))
        print(format_record(result.summary()))
        bad += not result.ok
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
