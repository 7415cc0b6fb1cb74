"""Create a Markdown table from a verification report

Given the JSON report written by `voronoicells verify`, this script produces
a table of every comparison with its value, reference, tolerance and outcome,
for pasting into release notes or an issue.

"""

import argparse
from collections import namedtuple
import json
from pathlib import Path
from typing import Iterator, List

ReportRow = namedtuple("ReportRow", ["name", "value", "reference", "tolerance", "status"])


def get_rows(input_path: Path, failures_only: bool = False) -> Iterator[ReportRow]:
    with open(input_path) as f:
        report = json.load(f)
    for check in report["checks"]:
        if failures_only and check["passed"]:
            continue
        if check["exact"]:
            tolerance = "exact"
        else:
            tolerance = check["tolerance"] or ""
        yield ReportRow(
            name=check["name"],
            value=check["value"],
            reference=check["reference"],
            tolerance=tolerance,
            status="pass" if check["passed"] else "FAIL",
        )


def print_row(items: List[str], lens: List[int], buffer=" "):
    assert len(items) == len(lens)
    for i in range(len(items)):
        print("|", end="")
        print(buffer, end="")
        print(items[i].ljust(lens[i], " "), end="")
        print(buffer, end="")

    print("|")


def print_separator(lens: List[int]):
    items = list(map(lambda len: "-" * len, lens))
    print_row(items, lens, buffer="-")


def main():
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("input", type=Path, help="Path to a verification report")
    parser.add_argument(
        "--failures", action="store_true", help="Only list failed comparisons"
    )
    args = parser.parse_args()

    rows = list(get_rows(args.input, args.failures))
    header = list(ReportRow._fields)
    lens = [len(h) for h in header]
    for row in rows:
        lens = [max(n, len(item)) for n, item in zip(lens, row)]

    print_row(header, lens)
    print_separator(lens)
    for row in rows:
        print_row(list(row), lens)


if __name__ == "__main__":
    main()
