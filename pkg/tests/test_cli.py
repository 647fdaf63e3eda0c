import json
import subprocess

import pytest
from numpy.testing import assert_allclose

from lommel import cli
from lommel.functions import continuation
from lommel.functions.core_complex import LogPoint
from lommel.utils.grid_writer import load_grid


def run_cli(cli_cmd, cli_env, *args):
    return subprocess.run(cli_cmd + list(args), capture_output=True, text=True, env=cli_env)


class TestEval:
    def test_terminating_lommel(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "S", "--mu", "1", "--nu", "2", "--zeta", "3,0")
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["value"] == [1.4444444444444444, 0]
        assert payload["method"] == "closed_form"

    def test_tiny_argument(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0", "--zeta", "1e-30")
        assert result.returncode == 0, result.stderr
        assert_allclose(json.loads(result.stdout)["value"], [1.0, 0.0], atol=1e-15)

    def test_branch_flag(self, cli_cmd, cli_env):
        # J_{1/2}(zeta e^{-2 pi i}) = -J_{1/2}(zeta)
        base = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0.5", "--zeta", "2")
        moved = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0.5", "--zeta", "2", "--branch", "2")
        assert moved.returncode == 0, moved.stderr
        assert_allclose(json.loads(moved.stdout)["value"], [-v for v in json.loads(base.stdout)["value"]],
                        rtol=1e-13, atol=1e-15)

    def test_branch_matches_continuation(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "S", "--mu", "0.3", "--nu", "0.1", "--zeta", "2,0",
                         "--branch", "1")
        assert result.returncode == 0, result.stderr
        re, im = json.loads(result.stdout)["value"]
        expected = continuation.continue_S(0.3, 0.1, 1, LogPoint.from_zeta(2)).value
        assert_allclose(complex(re, im), expected, rtol=1e-8)

    def test_missing_parameter_is_usage_error(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "S", "--nu", "2", "--zeta", "3")
        assert result.returncode == cli.EXIT_USAGE
        assert "--mu" in result.stderr

    def test_unknown_flag_is_usage_error(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0", "--zeta", "1", "--bogus")
        assert result.returncode == cli.EXIT_USAGE

    def test_bad_complex_is_usage_error(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "abc", "--zeta", "1")
        assert result.returncode == cli.EXIT_USAGE

    def test_domain_error(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0", "--zeta", "0")
        assert result.returncode == cli.EXIT_ERROR
        assert json.loads(result.stdout)["error"] == "domain"

    def test_pole_error(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "gegenbauerA", "--n", "2", "--nu", "-3", "--zeta", "1")
        assert result.returncode == cli.EXIT_ERROR
        assert json.loads(result.stdout)["error"] == "pole"

    def test_csv_grid(self, cli_cmd, cli_env, tmp_path):
        target = tmp_path / "grid.csv"
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0", "--zeta", "1",
                         "--csv", str(target), "--grid", "1,3,5")
        assert result.returncode == 0, result.stderr
        assert json.loads(result.stdout)["rows"] == 5
        rows = load_grid(str(target))
        assert [row["re_z"] for row in rows] == [1.0, 1.5, 2.0, 2.5, 3.0]
        assert_allclose(rows[0]["re_f"], 0.7651976865579666, rtol=1e-15)

    def test_csv_needs_grid(self, cli_cmd, cli_env, tmp_path):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0", "--zeta", "1",
                         "--csv", str(tmp_path / "grid.csv"))
        assert result.returncode == cli.EXIT_USAGE

    def test_csv_missing_directory(self, cli_cmd, cli_env, tmp_path):
        result = run_cli(cli_cmd, cli_env, "eval", "--fn", "J", "--nu", "0", "--zeta", "1",
                         "--csv", str(tmp_path / "absent" / "grid.csv"), "--grid", "1,2,2")
        assert result.returncode == cli.EXIT_ERROR
        assert json.loads(result.stdout)["error"] == "io"


class TestVerify:
    def test_passing_suite(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "verify", "--suite", "parity", "--samples", "5", "--seed", "2")
        assert result.returncode == cli.EXIT_OK, result.stdout
        payload = json.loads(result.stdout)
        assert payload["suite"] == "parity"
        assert payload["pass"] == 5

    def test_failing_threshold(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "verify", "--suite", "parity", "--samples", "2", "--tol", "-1")
        assert result.returncode == cli.EXIT_FAILED
        assert json.loads(result.stdout)["fail"] == 2

    def test_unknown_suite(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "verify", "--suite", "nope")
        assert result.returncode == cli.EXIT_USAGE

    def test_config_error(self, cli_cmd, cli_env):
        cli_env["LOMMEL_LOG_LEVEL"] = "LOUD"
        result = run_cli(cli_cmd, cli_env, "verify", "--suite", "parity", "--samples", "1")
        assert result.returncode == cli.EXIT_ERROR
        assert json.loads(result.stdout)["error"] == "config"


class TestClassify:
    def test_subnormal(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "classify", "--L", "2", "--M", "0.5", "--nu", "2", "--forcing", "1:1")
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["verdict"] == "subnormal"
        assert payload["terms"][0]["p"] == 1
        assert payload["terms"][0]["coeffs"] == [[1, 0], [-4, 0]]
        assert payload["solution_string"] == "f(z) = 1*exp(0*z) + 1*exp(-1*z)"

    def test_nonzero_ab(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "classify", "--A", "1", "--nu", "2", "--forcing", "1:1")
        payload = json.loads(result.stdout)
        assert payload["verdict"] == "not_subnormal"
        assert payload["reason"] == "nonzero_ab"

    def test_zero_m_is_usage_error(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "classify", "--M", "0")
        assert result.returncode == cli.EXIT_USAGE


class TestProbe:
    def test_subnormal_is_bounded(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "probe", "--L", "2", "--M", "0.5", "--nu", "2", "--forcing", "1:1",
                         "--n-max", "4")
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["bounded"] is True
        assert payload["branch"] == "C_zero"
        assert [sample["n"] for sample in payload["samples"]] == [1, 2, 3, 4]

    def test_n_max_too_small(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "probe", "--n-max", "2")
        assert result.returncode == cli.EXIT_USAGE


class TestTable:
    def test_case_two(self, cli_cmd, cli_env):
        result = run_cli(cli_cmd, cli_env, "table1", "--case", "2", "--p", "1")
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["K"] == 2.25
        assert payload["K_exact"] == "9/4"
        assert all(row["residual"] < 1e-8 for row in payload["residual_at"])

    @pytest.mark.parametrize("args", [["--case", "5", "--p", "0"], ["--case", "1", "--p", "-1"]])
    def test_bad_arguments(self, cli_cmd, cli_env, args):
        result = run_cli(cli_cmd, cli_env, "table1", *args)
        assert result.returncode == cli.EXIT_USAGE
