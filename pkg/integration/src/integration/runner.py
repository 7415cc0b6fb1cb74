from pathlib import Path
import subprocess
import sys
from typing import Optional


def workspace_dir() -> Optional[Path]:
    """Get the project's root source directory

    Attempts to resolve the project's root directory, the local git workspace
    containing every workspace member, based on the assumption we're running
    in a .venv within that directory.

    """

    exe_parents = Path(sys.executable).parents
    if len(exe_parents) < 3:
        return None

    workspace = exe_parents[2]
    if not ((workspace / ".git").is_dir() or (workspace / ".sl").is_dir()):
        return None

    return workspace


class CliFunc:
    """A functional interface to the voronoicells CLI

    The CLI is run as `python -m voronoicells` with the supplied arguments in a
    subprocess, and the function returns the completed process.  Nonzero exit
    codes are represented by a thrown CalledProcessError.
    """

    def __init__(self, python: Path, cwd: Optional[Path] = None, env: Optional[dict] = None):
        self.python = python
        self.cwd = cwd
        self.env = env

    @classmethod
    def default(cls) -> "CliFunc":
        return CliFunc(Path(sys.executable), workspace_dir())

    def __call__(self, *args: str | Path) -> subprocess.CompletedProcess:
        result = subprocess.run(
            [str(self.python), "-m", "voronoicells"] + [str(a) for a in args],
            check=True,
            capture_output=True,
            text=True,
            universal_newlines=True,
            cwd=self.cwd,
            env=self.env,
        )
        return result
