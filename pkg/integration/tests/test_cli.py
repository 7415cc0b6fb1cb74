"""Test the voronoicells command line interface"""

from fractions import Fraction
import os
import re
import subprocess

from mpmath import mp
from pytest import raises

from integration import digits_of_agreement, read_csv_artifact, read_json_artifact
from integration.runner import CliFunc
from voronoicells import mapgf, scaling, tables
from voronoicells.numeric import big


class TestUI:
    """Test the CLI's user interface"""

    def test_help(self, cli):
        assert "usage: voronoicells" in cli("--help").stdout

    def test_version(self, cli):
        version_pat = re.compile(r"^voronoicells \d+\.\d+\.\d+")
        assert version_pat.match(cli("--version").stdout) is not None

    def test_no_subcommand(self, cli):
        with raises(subprocess.CalledProcessError) as einfo:
            cli()

        assert einfo.value.returncode == 2
        assert "usage:" in einfo.value.stderr

    def test_malformed_grid(self, cli):
        with raises(subprocess.CalledProcessError) as einfo:
            cli("law", "--sigma-grid", "1:0:0.5")

        assert einfo.value.returncode == 2
        assert "ends before it starts" in einfo.value.stderr

    def test_bad_precision_environment(self, cli):
        env = dict(os.environ, VORONOICELLS_PRECISION="lots")
        bad_env_cli = CliFunc(cli.python, cli.cwd, env)
        with raises(subprocess.CalledProcessError) as einfo:
            bad_env_cli("asym", "--grid", "3")

        assert einfo.value.returncode == 1
        assert "voronoicells: error: VORONOICELLS_PRECISION" in einfo.value.stderr

    def test_stdout(self, cli):
        out = cli("asym", "--grid", "3").stdout
        assert out.startswith("# {")
        assert "omega,trapping_probability" in out


class TestArtifacts:
    """Test the tables written by each subcommand"""

    def test_asym(self, caching_run):
        artifact = read_csv_artifact(caching_run("asym", "--grid", "5"))
        assert artifact.metadata["config"]["command"] == "asym"
        assert artifact.column("omega") == ["-1", "-1/2", "0", "1/2", "1"]
        probabilities = [float(p) for p in artifact.column("trapping_probability")]
        assert probabilities[0] == 0
        assert probabilities[2] == 0.5
        assert probabilities[-1] == 1
        assert probabilities == sorted(probabilities)

    def test_law(self, caching_run):
        artifact = read_csv_artifact(caching_run("law", "--sigma-grid", "0,1,4"))
        values = [mp.mpf(v) for v in artifact.column("laplace_transform")]
        assert values[0] == 1
        assert values[0] > values[1] > values[2] > 0

    def test_coeffs(self, caching_run):
        doc = read_json_artifact(
            caching_run("coeffs", "-s", "1", "--order2", "8", "--format", "json")
        )
        assert doc["columns"] == ["n1_doubled", "n2_doubled", "numerator", "denominator"]
        expected = mapgf.coeff_table_json(1, 8)["entries"]
        assert doc["rows"] == [[str(x) for x in entry] for entry in expected]
        assert doc["config"]["orders"] == {"order2": 8}

    def test_scaling(self, caching_run):
        artifact = read_csv_artifact(
            caching_run("scaling", "-a", "1", "-b", "1", "--S-grid", "0.5,1")
        )
        assert artifact.metadata["a"] == "1"
        with mp.workprec(256):
            for S, value in zip(artifact.column("s"), artifact.column("value")):
                expected = scaling.eval_F_diag(big(Fraction(S)), 1)
                assert digits_of_agreement(value, expected) >= 25

    def test_tables(self, caching_run):
        doc = read_json_artifact(caching_run("tables"))
        loaded = tables.load_tables(doc["tables"])
        assert tables.tables_equal(loaded, tables.scaling_tables())

    def test_tree(self, caching_run):
        artifact = read_csv_artifact(caching_run("tree", "--V-grid", "0.5,2"))
        for density, exact in zip(
            artifact.column("density"), artifact.column("exact_density")
        ):
            assert digits_of_agreement(density, exact) >= 8

    def test_levy_tree(self, caching_run):
        artifact = read_csv_artifact(caching_run("tree", "--V-grid", "1", "--alpha", "1/4"))
        assert artifact.metadata["alpha"] == "1/4"
        assert digits_of_agreement(artifact.metadata["tail_exponent"], "1.25") >= 15

    def test_ilt_config_recorded(self, caching_run):
        artifact = read_csv_artifact(
            caching_run("law", "--V-grid", "1", "--ilt-method", "accelerated_fourier")
        )
        ilt = artifact.metadata["config"]["ilt"]
        assert ilt["method"] == "accelerated_fourier"
        assert ilt["node_count"] == 48
        density = float(artifact.column("density")[0])
        error = float(artifact.column("error")[0])
        assert density > 0
        assert error <= 1e-6 * density

    def test_jobs_do_not_change_output(self, caching_run):
        serial = read_csv_artifact(caching_run("law", "--sigma-grid", "0.5:2:0.5"))
        parallel = read_csv_artifact(
            caching_run("law", "--sigma-grid", "0.5:2:0.5", "--jobs", "2")
        )
        assert parallel.rows == serial.rows
        assert parallel.metadata["config"]["jobs"] == 2


class TestVerify:
    def test_quick_checks(self, caching_run):
        report = read_json_artifact(
            caching_run(
                "verify",
                "--quick",
                "--check",
                "table_symmetry",
                "--check",
                "trapping_probability",
                "--check",
                "critical_expansion",
            )
        )
        assert report["passed"]
        assert report["failures"] == []
        names = {check["name"] for check in report["checks"]}
        assert "table_symmetry" in names
        assert "trapping_probability:Pi(0)" in names
        assert all(check["anchor"] for check in report["checks"])
