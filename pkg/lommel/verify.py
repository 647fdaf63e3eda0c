"""
Verification suites: identities of every function family checked on random samples.

Each suite draws its cases from numpy.random.default_rng(seed), so a fixed seed
gives a byte-identical report.
"""
import cmath
import logging
import math
from lommel.utils._compat import StrEnum
from typing import Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from lommel import ode_engine
from lommel.functions import bessel, continuation, lommel, special_polys
from lommel.functions.core_complex import LogPoint, branch_shift, log_gamma, logpoint_pow
from lommel.functions.lommel import LommelParams, Regime
from lommel.utils.errors import DegenerateError, LommelError
from lommel.utils.series import extended_precision

logger = logging.getLogger(__name__)


class Suite(StrEnum):
    ODE = "ode"
    RECURRENCE = "recurrence"
    CONTINUATION = "continuation"
    PARITY = "parity"
    TERMINATING = "terminating"
    RELATIONS = "relations"
    ASYMPTOTIC = "asymptotic"
    ALL = "all"


DEFAULT_TOLERANCES = {
    Suite.ODE: 1e-6,
    Suite.RECURRENCE: 1e-8,
    Suite.CONTINUATION: 1e-7,
    Suite.PARITY: 1e-10,
    Suite.TERMINATING: 1e-8,
    Suite.RELATIONS: 1e-8,
    Suite.ASYMPTOTIC: 1e-6,
}

ASYMPTOTIC_RADII = (20.0, 22.0, 25.0)
IDENTITY_GRID = (0.7, 1.3, 2.1, 3.7, 8.5)
GENERIC_MARGIN = 1e-3


class WorstCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: str
    error: float


class SuiteReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    passed: int
    failed: int
    worst: Optional[WorstCase] = None
    suites: List["SuiteReport"] = []

    def to_json_dict(self) -> dict:
        payload = {
            "suite": self.suite,
            "pass": self.passed,
            "fail": self.failed,
            "worst": {"case": self.worst.case, "error": self.worst.error} if self.worst else None,
        }
        if self.suites:
            payload["suites"] = [report.to_json_dict() for report in self.suites]
        return payload


def relative_error(value: complex, reference: complex) -> float:
    value, reference = complex(value), complex(reference)
    return abs(value - reference) / max(abs(reference), 1e-300)


class SuiteRunner:
    """Collects pass/fail counts and the worst case for one suite."""

    def __init__(self, suite: Suite, samples: int, seed: int, tol: Optional[float] = None):
        """
        Args:
            suite: Suite being run
            samples: Number of random cases to draw
            seed: Seed of the case generator
            tol: Pass threshold; the suite default when None
        """
        self.suite = suite
        self.samples = samples
        self.rng = np.random.default_rng(seed)
        self.tol = tol if tol is not None else DEFAULT_TOLERANCES[suite]
        self.passed = 0
        self.failed = 0
        self.worst: Optional[WorstCase] = None

    def record(self, case: str, error: float) -> None:
        if not math.isfinite(error) or error > self.tol:
            self.failed += 1
            logger.warning(f"{self.suite}: {case} failed with error {error:.3e}")
        else:
            self.passed += 1
        if not math.isfinite(error):
            error = float("inf")
        if self.worst is None or error > self.worst.error:
            self.worst = WorstCase(case=case, error=error)

    def record_call(self, case: str, check: Callable[[], float]) -> None:
        try:
            self.record(case, check())
        except (LommelError, OverflowError) as e:
            logger.warning(f"{self.suite}: {case} raised {type(e).__name__}: {e}")
            self.record(case, float("inf"))

    def report(self) -> SuiteReport:
        return SuiteReport(suite=str(self.suite), passed=self.passed, failed=self.failed, worst=self.worst)

    def uniform(self, low: float, high: float) -> float:
        return float(self.rng.uniform(low, high))

    def annulus_point(self, r_min: float = 0.5, r_max: float = 10.0) -> LogPoint:
        """Principal LogPoint with |zeta| in [r_min, r_max] and arg in (-pi, pi)."""
        radius = self.uniform(r_min, r_max)
        angle = self.uniform(-0.95 * math.pi, 0.95 * math.pi)
        return LogPoint(base=complex(math.log(radius), angle))

    def generic_params(self) -> LommelParams:
        """(mu, nu) at least GENERIC_MARGIN away from every regime boundary and integer nu."""
        while True:
            mu = complex(self.uniform(-2, 2), self.uniform(-0.5, 0.5))
            nu = complex(self.uniform(-2, 2), self.uniform(-0.5, 0.5))
            params = LommelParams(mu=mu, nu=nu)
            info = params.classify()
            near_integer = abs(nu.imag) < GENERIC_MARGIN and abs(nu.real - round(nu.real)) < GENERIC_MARGIN
            if info.regime == Regime.GENERIC and info.boundary_distance > GENERIC_MARGIN and not near_integer:
                return params


def _label(**fields) -> str:
    parts = []
    for key, value in fields.items():
        if isinstance(value, complex):
            value = f"{value.real:.6g}{value.imag:+.6g}j"
        elif isinstance(value, float):
            value = f"{value:.6g}"
        parts.append(f"{key}={value}")
    return " ".join(parts)


def run_ode_suite(runner: SuiteRunner) -> None:
    """General solutions in the GENERIC regime satisfy the periodic ODE."""
    for _ in range(runner.samples):
        params = runner.generic_params()
        modulus_l = runner.uniform(0.5, 2.0)
        spec = ode_engine.OdeSpec(
            L=cmath.rect(modulus_l, runner.uniform(-1.0, 1.0)),
            M=complex(runner.uniform(0.5, 1.5), runner.uniform(-0.3, 0.3)),
            N=complex(runner.uniform(-1, 1), runner.uniform(-0.5, 0.5)),
            nu=params.nu,
            forcing=[ode_engine.Forcing(sigma=complex(runner.uniform(-2, 2), runner.uniform(-2, 2)), mu=params.mu)],
        )
        sol = ode_engine.SolutionSpec(
            A=complex(runner.uniform(-2, 2), runner.uniform(-2, 2)),
            B=complex(runner.uniform(-2, 2), runner.uniform(-2, 2)),
            spec=spec,
        )
        z = complex(runner.uniform(-2, 2), runner.uniform(-1, 1) * math.pi / abs(spec.M))
        runner.record_call(
            _label(mu=params.mu, nu=params.nu, z=z), lambda: ode_engine.ode_residual(sol, z)
        )


def run_recurrence_suite(runner: SuiteRunner) -> None:
    """S_{mu+2,nu} = zeta^{mu+1} - [(mu+1)^2 - nu^2] S_{mu,nu}."""
    for _ in range(runner.samples):
        params = runner.generic_params()
        w = runner.annulus_point()
        shifted = LommelParams(mu=params.mu + 2, nu=params.nu)

        def check() -> float:
            stepped = lommel.lommel_recurrence_step(params, lommel.lommel_S(params, w), w)
            return relative_error(stepped.value, lommel.lommel_S(shifted, w).value)

        runner.record_call(_label(mu=params.mu, nu=params.nu, w=w.w), check)


def _singular_cases(runner: SuiteRunner) -> List[tuple]:
    cases = []
    for p in (0, 1, 2):
        nu = complex(runner.uniform(0.1, 0.9), 0.0)
        cases.append((nu - 2 * p - 1, nu))
        for nu_int in (0, -1, -2):
            cases.append((complex(nu_int - 2 * p - 1), complex(nu_int)))
    return cases


def run_continuation_suite(runner: SuiteRunner) -> None:
    """The continuation formulas agree with direct evaluation on the shifted sheet."""
    draws = [(runner.generic_params(), int(runner.rng.choice([-3, -2, -1, 1, 2, 3]))) for _ in range(runner.samples)]
    singular = [(LommelParams(mu=mu, nu=nu), int(runner.rng.choice([-2, -1, 1, 2]))) for mu, nu in _singular_cases(runner)]
    for params, m in draws + singular:
        w = runner.annulus_point(0.5, 8.0)

        def check() -> float:
            continued = continuation.continue_S(params.mu, params.nu, m, w)
            direct = lommel.lommel_S(params, branch_shift(w, m))
            return relative_error(continued.value, direct.value)

        try:
            runner.record(_label(mu=params.mu, nu=params.nu, m=m, w=w.w), check())
        except DegenerateError as e:
            logger.info(f"continuation: skipped degenerate draw ({e})")
        except (LommelError, OverflowError) as e:
            logger.warning(f"continuation: {params} raised {e}")
            runner.record(_label(mu=params.mu, nu=params.nu, m=m), float("inf"))


def run_parity_suite(runner: SuiteRunner) -> None:
    """S_{mu,nu} is even in nu."""
    for _ in range(runner.samples):
        params = runner.generic_params()
        w = runner.annulus_point()
        flipped = LommelParams(mu=params.mu, nu=-params.nu)
        runner.record_call(
            _label(mu=params.mu, nu=params.nu, w=w.w),
            lambda: relative_error(lommel.lommel_S(params, w).value, lommel.lommel_S(flipped, w).value),
        )


def run_terminating_suite(runner: SuiteRunner) -> None:
    """The terminating closed form equals the general series assembly."""
    for _ in range(runner.samples):
        nu = complex(runner.uniform(-0.45, 2.0), runner.uniform(-0.5, 0.5))
        p = int(runner.rng.integers(0, 6))
        params = LommelParams(mu=nu + 2 * p + 1, nu=nu)
        w = runner.annulus_point(0.5, 10.0)

        def check() -> float:
            closed = lommel.terminating_lommel(params).evaluate(w)
            with extended_precision():
                info = params.classify()
                assembled = lommel._S_generic_series(params.mu, params.nu, w, info)
                return relative_error(closed.value, complex(assembled.value))

        runner.record_call(_label(nu=nu, p=p, w=w.w), check)


def run_relations_suite(runner: SuiteRunner) -> None:
    """Neumann/Schlafli, Neumann and Gegenbauer against S, Struve/Lommel and the J_{-nu} form of S."""
    for n in range(1, 7):
        w = runner.annulus_point(0.5, 5.0)

        def schlafli_check() -> float:
            zeta = cmath.exp(w.w)
            lhs = 0.5 * n * special_polys.schlafli_s(n, w).value
            rhs = zeta * special_polys.neumann_o(n, w).value - math.cos(n * math.pi / 2) ** 2
            return relative_error(lhs, rhs)

        runner.record_call(_label(relation="schlafli", n=n, w=w.w), schlafli_check)
    for zeta in IDENTITY_GRID:
        w = LogPoint.from_zeta(zeta)
        for n in range(8):
            # O_{2p} = S_{1,2p}/zeta, O_{2p+1} = (2p+1) S_{0,2p+1}/zeta
            def neumann_check() -> float:
                odd = n % 2
                scale = n if odd else 1
                expected = scale * lommel.lommel_S(LommelParams(mu=1 - odd, nu=n), w).value / zeta
                return relative_error(special_polys.neumann_o(n, w).value, expected)

            runner.record_call(_label(relation="neumann", n=n, zeta=zeta), neumann_check)
        nu = complex(runner.uniform(0.2, 2.0), runner.uniform(-0.3, 0.3))
        for n in range(6):
            # A_{n,nu} = 2^{nu+odd} Gamma(nu+p+odd)/p! (nu+n) zeta^{nu-1} S_{1-nu-odd,nu+n}, n = 2p+odd
            def gegenbauer_check() -> float:
                p, odd = divmod(n, 2)
                weight = cmath.exp((nu + odd) * math.log(2) + log_gamma(nu + p + odd)) / math.factorial(p)
                s = lommel.lommel_S(LommelParams(mu=1 - nu - odd, nu=nu + n), w).value
                expected = weight * (nu + n) * logpoint_pow(w, nu - 1) * s
                return relative_error(special_polys.gegenbauer_a(n, nu, w).value, expected)

            runner.record_call(_label(relation="gegenbauer", n=n, nu=nu, zeta=zeta), gegenbauer_check)
    for _ in range(runner.samples):
        nu = complex(runner.uniform(-0.4, 2.0), runner.uniform(-0.3, 0.3))
        w = runner.annulus_point(0.5, 12.0)

        def struve_check() -> float:
            with extended_precision(lommel._digits(w)):
                series = special_polys._struve_series(nu, w)
                relation = special_polys._sigma(nu) * lommel._S(nu, nu, w).value + bessel._y_series(nu, w).value
                return relative_error(complex(series.value), complex(relation))

        runner.record_call(_label(relation="struve", nu=nu, w=w.w), struve_check)
        params = runner.generic_params()

        def j_minus_nu_check() -> float:
            return relative_error(
                lommel.lommel_S_via_j_minus_nu(params, w).value, lommel.lommel_S(params, w).value
            )

        runner.record_call(_label(relation="j_minus_nu", mu=params.mu, nu=params.nu, w=w.w), j_minus_nu_check)


def run_asymptotic_suite(runner: SuiteRunner) -> None:
    """Series assembly and asymptotic expansion agree where both apply."""
    for _ in range(runner.samples):
        params = runner.generic_params()
        radius = float(runner.rng.choice(ASYMPTOTIC_RADII))
        w = LogPoint(base=complex(math.log(radius), runner.uniform(-math.pi / 2, math.pi / 2)))

        def check() -> float:
            asymptotic = lommel.lommel_S_asymptotic(params, w)
            with extended_precision():
                info = params.classify()
                series = lommel._S_generic_series(params.mu, params.nu, w, info)
                return relative_error(asymptotic.value, complex(series.value))

        runner.record_call(_label(mu=params.mu, nu=params.nu, w=w.w), check)


SUITES: Dict[Suite, Callable[[SuiteRunner], None]] = {
    Suite.ODE: run_ode_suite,
    Suite.RECURRENCE: run_recurrence_suite,
    Suite.CONTINUATION: run_continuation_suite,
    Suite.PARITY: run_parity_suite,
    Suite.TERMINATING: run_terminating_suite,
    Suite.RELATIONS: run_relations_suite,
    Suite.ASYMPTOTIC: run_asymptotic_suite,
}


def run_suite(suite: Suite, samples: int = 50, seed: int = 0, tol: Optional[float] = None) -> SuiteReport:
    """
    Run one verification suite, or every suite for Suite.ALL.

    Args:
        suite: Which suite to run
        samples: Number of random cases per suite
        seed: Seed for numpy.random.default_rng
        tol: Override of the suite's default pass threshold

    Returns:
        SuiteReport: Pass/fail counts and the worst case
    """
    suite = Suite(suite)
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if suite == Suite.ALL:
        reports = [run_suite(name, samples, seed, tol) for name in SUITES]
        worst = [r.worst for r in reports if r.worst is not None]
        return SuiteReport(
            suite=str(Suite.ALL),
            passed=sum(r.passed for r in reports),
            failed=sum(r.failed for r in reports),
            worst=max(worst, key=lambda case: case.error) if worst else None,
            suites=reports,
        )
    logger.info(f"Running {suite} suite with {samples} samples (seed {seed})")
    runner = SuiteRunner(suite, samples, seed, tol)
    SUITES[suite](runner)
    report = runner.report()
    logger.info(f"{suite} suite finished: {report.passed} passed, {report.failed} failed")
    return report
