#!/usr/bin/env python3

"""Release lints for voronoicells

A release is a tag vX.Y.Z on a clean checkout whose package versions and
changelog agree with the tag, and whose quick verification suite passes.

"""

import argparse
from pathlib import Path
import re
import subprocess
import sys
import tomllib
from typing import Callable, Iterator, List, NamedTuple, Optional

VERSIONED_PROJECTS = [
    Path("pyproject.toml"),
    Path("voronoicells") / "pyproject.toml",
]
PACKAGE_INIT = Path("voronoicells") / "src" / "voronoicells" / "__init__.py"
CHANGELOG = Path("CHANGELOG.md")

TAG_PATTERN = re.compile(r"^v(\d+\.\d+\.\d+)$")
CHANGELOG_HEADING = re.compile(r"^## v(\d+\.\d+\.\d+)$")


class Lint(NamedTuple):
    description: str
    passes: Callable[[str], bool]


def git_output(*args: str) -> str:
    return subprocess.check_output(["git", *args], universal_newlines=True).strip()


def tagged_version(rev: str = "HEAD") -> Optional[str]:
    for tag in git_output("tag", "--points-at", rev).splitlines():
        m = TAG_PATTERN.match(tag)
        if m is not None:
            return m.group(1)
    return None


def project_version(path: Path) -> str:
    with open(path, "rb") as f:
        return tomllib.load(f)["project"]["version"]


def package_version() -> Optional[str]:
    m = re.search(r'^__version__ = "(.+)"$', PACKAGE_INIT.read_text(), re.MULTILINE)
    return m.group(1) if m else None


def changelog_sections() -> Iterator[tuple[str, List[str]]]:
    """(version, lines) for each released section of the changelog"""
    version, lines = None, []
    for line in CHANGELOG.read_text().splitlines():
        if line.startswith("## "):
            if version is not None:
                yield version, lines
            m = CHANGELOG_HEADING.match(line)
            version, lines = (m.group(1) if m else None), []
        elif version is not None:
            lines.append(line)
    if version is not None:
        yield version, lines


def is_clean() -> bool:
    return git_output("status", "--porcelain") == ""


def is_lockfile_synced() -> bool:
    # uv sync rewrites uv.lock when a pyproject version was bumped without it
    subprocess.run(["uv", "sync"], check=True)
    return is_clean()


def is_quick_verify_passing() -> bool:
    result = subprocess.run(
        ["uv", "run", "voronoicells", "verify", "--quick", "-o", "/dev/null"]
    )
    return result.returncode == 0


LINTS = [
    Lint("checkout is unmodified", lambda _: is_clean()),
    *(
        Lint(f"{path} has the tagged version", lambda v, p=path: project_version(p) == v)
        for path in VERSIONED_PROJECTS
    ),
    Lint("voronoicells.__version__ is the tagged version", lambda v: package_version() == v),
    Lint(
        "CHANGELOG.md starts with the tagged version",
        lambda v: next(changelog_sections(), (None,))[0] == v,
    ),
    Lint("uv.lock is synced", lambda _: is_lockfile_synced()),
    Lint("quick verification suite passes", lambda _: is_quick_verify_passing()),
]


def lint(args: argparse.Namespace):
    version = tagged_version()
    if version is None:
        print("HEAD has no vX.Y.Z tag", file=sys.stderr)
        sys.exit(1)

    failed = 0
    for check in LINTS:
        ok = check.passes(version)
        failed += not ok
        print(f"{'ok' if ok else 'FAIL':4}  {check.description}")

    if failed:
        print(f"{failed} release lint(s) failed for v{version}", file=sys.stderr)
        sys.exit(1)


def notes(args: argparse.Namespace):
    version = args.version or tagged_version()
    for section_version, lines in changelog_sections():
        if section_version == version:
            print("\n".join(lines).strip())
            return
    print(f"CHANGELOG.md has no section for v{version}", file=sys.stderr)
    sys.exit(1)


def head(args: argparse.Namespace):
    version = tagged_version()
    if version is None:
        print("No currently tagged version number at HEAD", file=sys.stderr)
        sys.exit(1)
    print(version)


def main():
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(help="Subcommand")

    parser_lint = subparsers.add_parser("lint", help="Lint the release at HEAD")
    parser_lint.set_defaults(func=lint)

    parser_notes = subparsers.add_parser(
        "notes", help="Print the changelog section of a release"
    )
    parser_notes.add_argument("version", nargs="?", help="Version (default: HEAD's tag)")
    parser_notes.set_defaults(func=notes)

    parser_head = subparsers.add_parser("head", help="Show version for release at HEAD")
    parser_head.set_defaults(func=head)

    args = parser.parse_args()
    if "func" not in args:
        parser.print_help()
        sys.exit(1)

    args.func(args)


if __name__ == "__main__":
    main()
