"""Test the verification suite's bookkeeping"""

from fractions import Fraction
import json

from mpmath import mp
from pytest import raises

from voronoicells import verify
from voronoicells.errors import ConvergenceError


def _broken(quick: bool):
    raise ConvergenceError("no convergence")
    yield


class TestResults:
    def test_exact(self):
        assert verify.exact_result("x", "anchor", Fraction(1, 2), Fraction(1, 2)).passed
        result = verify.exact_result("x", "anchor", 1, 2)
        assert not result.passed
        assert result.exact
        assert result.tolerance is None

    def test_approx(self, precision):
        result = verify.approx_result("x", "anchor", mp.mpf("1.0001"), mp.one, mp.mpf("1e-3"))
        assert result.passed
        assert not verify.approx_result(
            "x", "anchor", mp.mpf("1.01"), mp.one, mp.mpf("1e-3")
        ).passed

    def test_bound(self, precision):
        assert verify.bound_result("x", "anchor", mp.mpf(1), mp.mpf(2)).passed
        assert not verify.bound_result("x", "anchor", mp.mpf(1), mp.mpf(2), below=False).passed


class TestSuite:
    def test_registry(self):
        assert "diagonal_identity" in verify.CHECKS
        assert "trapping_probability" in verify.CHECKS
        for name, entry in verify.CHECKS.items():
            assert entry.name == name
            assert entry.anchor

    def test_unknown_check(self):
        with raises(KeyError):
            verify.run_checks(["no_such_check"])

    def test_result_names_are_prefixed(self):
        results = verify.run_checks(["trapping_probability"], quick=True)
        assert all(r.passed for r in results)
        assert "trapping_probability:Pi(1)" in {r.name for r in results}

    def test_failing_check_is_reported(self, monkeypatch):
        monkeypatch.setitem(verify.CHECKS, "broken", verify.Check("broken", "nothing", _broken))
        results = verify.run_checks(["broken"])
        report = verify.emit_report(results, {"command": "verify"})
        assert not report["passed"]
        assert report["failures"] == ["broken"]
        assert report["total"] == 1
        assert report["checks"][0]["message"] == "no convergence"
        assert report["config"] == {"command": "verify"}


class TestQuickSuite:
    def test_every_check_passes(self, cli):
        # a failing check makes the CLI exit 1, raising CalledProcessError
        report = json.loads(cli("verify", "--quick").stdout)
        assert report["passed"]
        assert report["failures"] == []
        assert {r["name"].split(":")[0] for r in report["checks"]} == set(verify.CHECKS)
        assert all(r["passed"] for r in report["checks"])
