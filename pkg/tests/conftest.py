import os
import sys

import mpmath
import pytest

from lommel.functions.core_complex import LogPoint

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(autouse=True)
def restore_precision():
    """Kernels raise mpmath precision in context managers; make sure none leaks."""
    dps = mpmath.mp.dps
    yield
    assert mpmath.mp.dps == dps
    mpmath.mp.dps = dps


@pytest.fixture
def cli_env():
    """Environment for running `python -m lommel.cli` from the project root."""
    env = os.environ.copy()
    existing = env.get("PYTHONPATH", "")
    env["PYTHONPATH"] = os.pathsep.join(filter(None, [PROJECT_ROOT, existing]))
    env.pop("LOMMEL_LOG_LEVEL", None)
    return env


@pytest.fixture
def cli_cmd():
    return [sys.executable, "-m", "lommel.cli"]


def point(zeta: complex, turns: int = 0) -> LogPoint:
    """Principal LogPoint of zeta, moved `turns` half-turns up the surface."""
    w = LogPoint.from_zeta(zeta)
    return LogPoint(base=w.base, turns=turns)
