"""Who tests the tests?

Makes sure the integration test library itself is correct.

"""

import json

import pytest

from integration import digits_of_agreement, parse_csv_artifact


def test_parse_csv_artifact():
    artifact = parse_csv_artifact('# {"config": {"command": "asym"}}\nomega,p\n-1,0\n1,1\n')
    assert artifact.metadata == {"config": {"command": "asym"}}
    assert artifact.columns == ["omega", "p"]
    assert artifact.column("p") == ["0", "1"]
    with pytest.raises(ValueError):
        parse_csv_artifact("omega,p\n-1,0\n")


def test_digits_of_agreement():
    assert digits_of_agreement("1.0001", "1.0") == pytest.approx(4, abs=0.01)
    assert digits_of_agreement("2", "2") == float("inf")


def test_report_markdown(tmp_path):
    reportmd = pytest.importorskip("reportmd")
    report = {
        "checks": [
            {
                "name": "trapping_probability:Pi(0)",
                "value": "1/2",
                "reference": "1/2",
                "tolerance": None,
                "exact": True,
                "passed": True,
            },
            {
                "name": "tree_law:normalization",
                "value": "0.99",
                "reference": "1.0",
                "tolerance": "1e-20",
                "exact": False,
                "passed": False,
            },
        ]
    }
    path = tmp_path / "report.json"
    path.write_text(json.dumps(report))

    rows = list(reportmd.get_rows(path))
    assert [row.status for row in rows] == ["pass", "FAIL"]
    assert rows[0].tolerance == "exact"
    assert [row.name for row in reportmd.get_rows(path, failures_only=True)] == [
        "tree_law:normalization"
    ]
