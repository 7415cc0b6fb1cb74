import csv
import io
import json
from pathlib import Path
from subprocess import CalledProcessError
from typing import Any, Dict, List, NamedTuple

from mpmath import mp
from pytest import fail


class CsvArtifact(NamedTuple):
    """A CSV table written by the CLI, split into its parts"""

    metadata: Dict[str, Any]
    columns: List[str]
    rows: List[List[str]]

    def column(self, name: str) -> List[str]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def parse_csv_artifact(text: str) -> CsvArtifact:
    """Parse CSV output whose first line is a "# {json}" metadata comment

    Raises a ValueError if the metadata line is missing.

    """

    first, _, rest = text.partition("\n")
    if not first.startswith("# "):
        raise ValueError("CSV artifact has no metadata line")
    metadata = json.loads(first[2:])
    reader = csv.reader(io.StringIO(rest))
    columns = next(reader)
    return CsvArtifact(metadata, columns, [row for row in reader if row])


def read_csv_artifact(path: Path) -> CsvArtifact:
    with open(path) as f:
        return parse_csv_artifact(f.read())


def read_json_artifact(path: Path) -> Dict[str, Any]:
    with open(path) as f:
        return json.load(f)


def digits_of_agreement(left, right) -> float:
    """Number of significant decimal digits on which two values agree"""
    left, right = mp.mpf(left), mp.mpf(right)
    if left == right:
        return float("inf")
    scale = max(abs(left), abs(right))
    return float(-mp.log10(abs(left - right) / scale))


def fail_with_subprocess_error(e: CalledProcessError):
    lines = [f"Command {e.cmd!r} exited with return code {e.returncode}"]

    if getattr(e, "stdout", None):
        out = (
            e.stdout if isinstance(e.stdout, str) else e.stdout.decode(errors="ignore")
        )
        if out:
            lines.append("=== STDOUT ===")
            lines.append(out.rstrip())

    if getattr(e, "stderr", None):
        err = (
            e.stderr if isinstance(e.stderr, str) else e.stderr.decode(errors="ignore")
        )
        if err:
            lines.append("=== STDERR ===")
            lines.append(err.rstrip())

    msg = "\n".join(lines)

    # Suppress the default Python stack trace output
    fail(msg, pytrace=False)
