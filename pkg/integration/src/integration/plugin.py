from collections import namedtuple
from pathlib import Path
import shutil
import subprocess
import tempfile

from mpmath import mp
import pytest

import integration
from integration.runner import CliFunc


@pytest.fixture(scope="session")
def cli() -> CliFunc:
    return CliFunc.default()


@pytest.fixture
def precision():
    """Run the test body at 256 bits, restoring mpmath's precision after"""
    with mp.workprec(256):
        yield 256


@pytest.fixture
def extraction_precision():
    with mp.workprec(512):
        yield 512


CachedRun = namedtuple("CachedRun", ["artifact", "exception"])


@pytest.fixture(scope="session")
def caching_run(cli):
    """Run a CLI subcommand once per argument list and reuse its artifact

    Failures are cached too, so every test sharing a broken run reports the
    same subprocess output.

    """
    session_dir = Path(tempfile.mkdtemp(prefix="voronoicells-"))
    runs: dict[tuple, CachedRun] = {}

    def _run(command: str, *extra_args) -> Path:
        key = (command, *map(str, extra_args))
        if key not in runs:
            artifact = session_dir / f"{len(runs):03d}-{command}.out"
            try:
                cli(command, "-o", artifact, *extra_args)
                runs[key] = CachedRun(artifact, None)
            except subprocess.CalledProcessError as e:
                runs[key] = CachedRun(artifact, e)

        run = runs[key]
        if run.exception is not None:
            integration.fail_with_subprocess_error(run.exception)
        return run.artifact

    yield _run

    shutil.rmtree(session_dir)


# Report CLI failures as plain test failures
#
# A CalledProcessError escaping a test is turned into a failure showing the
# subprocess's stdout and stderr instead of a Python traceback through the
# runner.


@pytest.hookimpl
def pytest_itemcollected(item):
    item.runtest_wrapped = item.runtest
    item.runtest = _runtest.__get__(item, item.__class__)


def _runtest(self):
    try:
        self.runtest_wrapped()
    except subprocess.CalledProcessError as e:
        integration.fail_with_subprocess_error(e)
