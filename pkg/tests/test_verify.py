import math

import pytest

from lommel import verify
from lommel.verify import Suite, SuiteRunner


class TestSuiteRunner:
    def test_record_counts_and_worst(self):
        runner = SuiteRunner(Suite.PARITY, samples=3, seed=0, tol=1e-6)
        runner.record("a", 1e-9)
        runner.record("b", 1e-3)
        runner.record("c", 1e-7)
        report = runner.report()
        assert (report.passed, report.failed) == (2, 1)
        assert report.worst.case == "b"

    def test_nan_counts_as_failure(self):
        runner = SuiteRunner(Suite.PARITY, samples=1, seed=0)
        runner.record("nan", float("nan"))
        report = runner.report()
        assert report.failed == 1
        assert math.isinf(report.worst.error)

    def test_default_tolerance(self):
        assert SuiteRunner(Suite.ODE, samples=1, seed=0).tol == verify.DEFAULT_TOLERANCES[Suite.ODE]

    def test_relative_error(self):
        assert verify.relative_error(1.0 + 1e-10, 1.0) == pytest.approx(1e-10, rel=1e-5)
        assert verify.relative_error(0, 0) == 0


class TestRunSuite:
    def test_parity_passes(self):
        report = verify.run_suite(Suite.PARITY, samples=10, seed=3)
        assert report.passed == 10
        assert report.failed == 0

    def test_fixed_seed_is_deterministic(self):
        first = verify.run_suite(Suite.TERMINATING, samples=5, seed=7).to_json_dict()
        second = verify.run_suite(Suite.TERMINATING, samples=5, seed=7).to_json_dict()
        assert first == second

    def test_negative_tolerance_fails_everything(self):
        report = verify.run_suite(Suite.PARITY, samples=4, seed=1, tol=-1.0)
        assert report.passed == 0
        assert report.failed == 4

    def test_json_keys(self):
        payload = verify.run_suite(Suite.PARITY, samples=2, seed=0).to_json_dict()
        assert set(payload) == {"suite", "pass", "fail", "worst"}
        assert set(payload["worst"]) == {"case", "error"}

    def test_all_nests_reports(self):
        report = verify.run_suite(Suite.ALL, samples=1, seed=0, tol=-1.0)
        assert [child.suite for child in report.suites] == [str(suite) for suite in verify.SUITES]
        assert report.failed == sum(child.failed for child in report.suites)
        assert report.passed == 0

    def test_samples_must_be_positive(self):
        with pytest.raises(ValueError):
            verify.run_suite(Suite.PARITY, samples=0)

    def test_relations_cover_fixed_grid(self):
        report = verify.run_suite(Suite.RELATIONS, samples=1, seed=0, tol=-1.0)
        # 6 Schlafli, 8 Neumann and 6 Gegenbauer per grid point, 2 per sample
        grid_checks = len(verify.IDENTITY_GRID) * (8 + 6)
        assert report.failed == 6 + grid_checks + 2
