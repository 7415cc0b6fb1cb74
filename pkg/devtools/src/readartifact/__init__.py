"""Read voronoicells CSV artifacts and show their contents."""

import argparse
import csv
import io
import json

from mpmath import mp


def read_artifact(path: str):
    with open(path) as f:
        first, _, rest = f.read().partition("\n")
    if not first.startswith("# "):
        raise ValueError(f"{path} has no metadata line")
    rows = list(csv.reader(io.StringIO(rest)))
    return json.loads(first[2:]), rows[0], [row for row in rows[1:] if row]


def show_metadata(path: str) -> None:
    metadata, columns, rows = read_artifact(path)
    print(json.dumps(metadata, indent=2, sort_keys=True))
    print(f"Columns: {', '.join(columns)} ({len(rows)} rows)")


def compare(left: str, right: str, column: str) -> None:
    """Print the digits of agreement of one column of two artifacts, row by row"""
    _, left_columns, left_rows = read_artifact(left)
    _, right_columns, right_rows = read_artifact(right)
    i, j = left_columns.index(column), right_columns.index(column)
    if len(left_rows) != len(right_rows):
        raise ValueError(f"row counts differ: {len(left_rows)} vs {len(right_rows)}")

    with mp.workprec(512):
        for left_row, right_row in zip(left_rows, right_rows):
            x, y = mp.mpf(left_row[i]), mp.mpf(right_row[j])
            if x == y:
                digits = "all"
            else:
                digits = mp.nstr(-mp.log10(abs(x - y) / max(abs(x), abs(y))), 3)
            print(f"{left_row[0]}: {left_row[i]} vs {right_row[j]} ({digits} digits)")


def main() -> None:
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest="subparser_name", help="Subcommands")

    parser_show_metadata = subparsers.add_parser(
        "show-metadata", help="Show the run configuration and columns"
    )
    parser_show_metadata.add_argument("path", type=str, help="Path to CSV artifact")

    parser_compare = subparsers.add_parser(
        "compare", help="Compare a column of two artifacts, e.g. at two precisions"
    )
    parser_compare.add_argument("left", type=str, help="Path to CSV artifact")
    parser_compare.add_argument("right", type=str, help="Path to CSV artifact")
    parser_compare.add_argument("--column", default="value", help="Column to compare")

    args = parser.parse_args()

    if args.subparser_name == "show-metadata":
        show_metadata(args.path)
    elif args.subparser_name == "compare":
        compare(args.left, args.right, args.column)


if __name__ == "__main__":
    main()
