"""
The periodic-ODE layer.

f'' + 2N f' + [L^2 M^2 e^{2Mz} + (N^2 - nu^2 M^2)] f = sum_j sigma_j L^{mu_j+1} M^2 e^{[M(mu_j+1) - N] z}

is reduced to the non-homogeneous Bessel equation by zeta = L e^{Mz}. Its
general solution is assembled from J, Y and Lommel functions, certified by
finite-difference residuals, classified for subnormality and probed for growth.
"""
import cmath
import logging
import math
from lommel.utils._compat import StrEnum
from fractions import Fraction
from typing import Callable, Dict, List, Literal, Optional, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, field_validator

from lommel.functions import bessel, lommel
from lommel.functions.bessel import HankelKind
from lommel.functions.core_complex import Eval, LogPoint, Method
from lommel.functions.lommel import LommelParams, Regime, TerminatingLommel
from lommel.functions.special_polys import gegenbauer_a, neumann_o, schlafli_s, struve_k_half_integer, struve_sigma
from lommel.utils.differencing import derivatives
from lommel.utils.errors import DomainError, HypothesisError, LommelError
from lommel.utils.formatting import format_coefficient
from lommel.utils.series import MpEval, combine, exact, extended_precision

logger = logging.getLogger(__name__)

CLASSIFY_TOL = 1e-10
C_ZERO_TOL = 1e-14
# probe stops once |M| r_n / sqrt(2) = log|zeta_n / L| passes this
PROBE_LOG_LIMIT = 700.0
RESIDUAL_STEP = 1e-2
RESIDUAL_PHASE = 0.05


class Forcing(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma: complex
    mu: complex


class OdeSpec(BaseModel):
    """Parameters of the periodic ODE; L and M must be nonzero."""

    model_config = ConfigDict(frozen=True)

    L: complex
    M: complex
    N: complex = 0
    nu: complex = 0
    forcing: List[Forcing] = []

    @field_validator('L', 'M')
    @classmethod
    def _nonzero(cls, value: complex) -> complex:
        if value == 0:
            raise ValueError("L and M must be nonzero")
        return value


class SolutionSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: complex = 0
    B: complex = 0
    spec: OdeSpec

    @property
    def C(self) -> complex:
        return (self.A - 1j * self.B) / 2

    @property
    def D(self) -> complex:
        return (self.A + 1j * self.B) / 2


class ForcingTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    coefficient: complex
    rate: complex


class LommelTransform(BaseModel):
    """
    f'' + damping f' + [potential_scale e^{potential_rate z} + constant] f
        = sum coefficient e^{rate z}
    """

    model_config = ConfigDict(frozen=True)

    alpha: complex
    beta: complex
    gamma: complex
    m: complex
    nu: complex
    damping: complex
    potential_scale: complex
    potential_rate: complex
    constant: complex
    forcing: List[ForcingTerm]


class Verdict(StrEnum):
    SUBNORMAL = "subnormal"
    NOT_SUBNORMAL = "not_subnormal"


class SubnormalVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    terms: List[TerminatingLommel] = []
    reason: Optional[Literal['nonzero_ab', 'nonterminating_index']] = None
    index: Optional[int] = None

    def exponential_terms(self, spec: OdeSpec) -> List[Tuple[complex, complex]]:
        """
        (coefficient, rate) pairs with f(z) = sum coefficient e^{rate z}.

        Raises:
            ValueError: If the verdict is not subnormal
        """
        if self.verdict != Verdict.SUBNORMAL:
            raise ValueError("only subnormal solutions are finite exponential sums")
        log_l = cmath.log(spec.L)
        active = [f for f in spec.forcing if f.sigma != 0]
        merged: Dict[Tuple[float, float], List[complex]] = {}
        for forcing, term in zip(active, self.terms):
            for k, c in enumerate(term.coefficients[: term.p + 1]):
                power = term.mu - 1 - 2 * k
                coefficient = forcing.sigma * (-1) ** k * c * cmath.exp(power * log_l)
                rate = spec.M * power - spec.N
                key = (round(rate.real, 12), round(rate.imag, 12))
                if key in merged:
                    merged[key][0] += coefficient
                else:
                    merged[key] = [coefficient, rate]
        pairs = [(c, r) for c, r in merged.values() if abs(c) > 1e-300]
        return sorted(pairs, key=lambda pair: (-pair[1].real, -pair[1].imag))

    def solution_string(self, spec: OdeSpec) -> str:
        if self.verdict != Verdict.SUBNORMAL:
            return ""
        pieces = [f"{format_coefficient(c)}*exp({format_coefficient(r)}*z)" for c, r in self.exponential_terms(spec)]
        return "f(z) = " + (" + ".join(pieces) if pieces else "0")


class ProbeSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    r_n: float
    z_n: complex
    log_modulus: Optional[float] = None
    loglog_over_r: Optional[float] = None
    growth_over_r: Optional[float] = None
    error: Optional[str] = None


class ProbeReport(BaseModel):
    """Raw growth data along the probe sequence; the flags are heuristics, not proofs."""

    model_config = ConfigDict(frozen=True)

    samples: List[ProbeSample]
    tail: Optional[float]
    expected_if_unbounded: float
    bounded: bool
    unbounded_signature: bool
    achieved_n: int
    branch: Literal['C_nonzero', 'C_zero']


class QuantizationCase(BaseModel):
    """One row of the special cases f'' + (e^z - K) f = sigma 2^{mu-1} e^{(mu+1)z/2}."""

    model_config = ConfigDict(frozen=True)

    case_id: int
    p: int
    sigma: complex
    mu: float
    nu: float
    K_exact: str
    description: str

    @property
    def K(self) -> Fraction:
        return Fraction(self.K_exact)

    def solution_spec(self) -> SolutionSpec:
        spec = OdeSpec(L=2, M=0.5, N=0, nu=self.nu, forcing=[Forcing(sigma=self.sigma, mu=self.mu)])
        return SolutionSpec(A=0, B=0, spec=spec)

    def mp_value(self, z: complex) -> mpmath.mpc:
        """Closed form built from the Neumann, Schlafli and Struve backends."""
        w = LogPoint(base=math.log(2) + complex(z) / 2)
        sigma = mpmath.mpc(self.sigma)
        zeta = w.mp_zeta()
        p = self.p
        if self.case_id == 1:
            return sigma * zeta * mpmath.mpc(neumann_o(2 * p, w).value)
        if self.case_id == 2:
            return sigma * zeta * mpmath.mpc(neumann_o(2 * p + 1, w).value) / (2 * p + 1)
        if self.case_id == 3:
            return sigma * mpmath.mpc(schlafli_s(2 * p + 2, w).value) / (4 * (p + 1))
        scale = mpmath.power(2, p - mpmath.mpf(1) / 2) * mpmath.sqrt(mpmath.pi) * mpmath.factorial(p)
        return sigma * scale * mpmath.mpc(struve_k_half_integer(p, w).value)

    def evaluate(self, z: complex) -> Eval:
        with extended_precision():
            return Eval.from_mp(exact(self.mp_value(z), Method.CLOSED_FORM))

    def gegenbauer_value(self, z: complex) -> Eval:
        """
        Case 1 through the Gegenbauer polynomial: sigma e^{z/2} A_{2p,0}(2e^{z/2}).

        Raises:
            DomainError: For other cases, or p = 0 where A_{0,0} = O_0 lacks the factor 2
        """
        if self.case_id != 1 or self.p == 0:
            raise DomainError("the Gegenbauer form applies to case 1 with p >= 1")
        w = LogPoint(base=math.log(2) + complex(z) / 2)
        polynomial = gegenbauer_a(2 * self.p, 0, w)
        factor = self.sigma * cmath.exp(complex(z) / 2)
        return Eval(
            value=factor * polynomial.value,
            abs_err_est=abs(factor) * polynomial.abs_err_est,
            terms_used=polynomial.terms_used,
            method=Method.CLOSED_FORM,
        )


def transform_coefficients(
    alpha: complex, beta: complex, gamma: complex, m: complex, nu: complex, forcing: List[Forcing]
) -> LommelTransform:
    """
    General Lommel transformation zeta = alpha x^beta, y = x^gamma u(x), x = e^{mz}.

    Args:
        alpha, beta, gamma, m: Transformation parameters
        nu: Bessel order
        forcing: (sigma, mu) terms of the Bessel-side right-hand side

    Returns:
        LommelTransform: Coefficients of the resulting constant-coefficient ODE in z
    """
    alpha, beta, gamma, m, nu = (complex(x) for x in (alpha, beta, gamma, m, nu))
    log_alpha = cmath.log(alpha)
    terms = [
        ForcingTerm(
            coefficient=m * m * f.sigma * cmath.exp((f.mu + 1) * log_alpha) * beta * beta,
            rate=m * (beta * (f.mu + 1) - gamma),
        )
        for f in forcing
    ]
    return LommelTransform(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        m=m,
        nu=nu,
        damping=2 * gamma * m,
        potential_scale=m * m * alpha * alpha * beta * beta,
        potential_rate=2 * m * beta,
        constant=m * m * (gamma * gamma - nu * nu * beta * beta),
        forcing=terms,
    )


def lommel_transform(spec: OdeSpec) -> LommelTransform:
    """The (alpha, beta, gamma, m) = (L, M, N, 1) identification."""
    return transform_coefficients(spec.L, spec.M, spec.N, 1, spec.nu, spec.forcing)


class SolutionEvaluator:
    """
    z -> e^{-Nz} [A J_nu + B Y_nu + sum sigma_j S_{mu_j,nu}](L e^{Mz}).

    The inner argument is the LogPoint w = log L + M z, so the evaluator is
    single-valued in z whichever branch of log L is fixed.
    """

    def __init__(self, solution: SolutionSpec):
        self.solution = solution
        self._log_l = cmath.log(solution.spec.L)

    def point(self, z: complex) -> LogPoint:
        return LogPoint(base=self._log_l + self.solution.spec.M * complex(z))

    def _assemble(self, z: complex, hankel: bool) -> MpEval:
        sol = self.solution
        spec = sol.spec
        w = self.point(z)
        parts = []
        if hankel:
            if sol.C != 0:
                parts.append((sol.C, bessel._hankel(HankelKind.FIRST, spec.nu, w)))
            if sol.D != 0:
                parts.append((sol.D, bessel._hankel(HankelKind.SECOND, spec.nu, w)))
        else:
            if sol.A != 0:
                parts.append((sol.A, bessel._j(spec.nu, w)))
            if sol.B != 0:
                parts.append((sol.B, bessel._y(spec.nu, w)))
        for f in spec.forcing:
            if f.sigma != 0:
                parts.append((f.sigma, lommel._S(f.mu, spec.nu, w)))
        if not parts:
            return exact(0, Method.CLOSED_FORM)
        damping = mpmath.exp(-mpmath.mpc(spec.N) * mpmath.mpc(z))
        return combine(parts, parts[0][1].method).scaled(damping)

    def mp_value(self, z: complex) -> mpmath.mpc:
        with extended_precision():
            return self._assemble(z, hankel=False).value

    def __call__(self, z: complex) -> Eval:
        with extended_precision():
            return Eval.from_mp(self._assemble(z, hankel=False))

    def hankel_form(self, z: complex) -> Eval:
        """The same solution assembled as C H^(1) + D H^(2) + forcing."""
        with extended_precision():
            return Eval.from_mp(self._assemble(z, hankel=True))

    def log_modulus(self, z: complex) -> float:
        """log|f(z)| computed without ever forming f in double precision."""
        with extended_precision():
            value = self._assemble(z, hankel=False).value
            if value == 0:
                return -math.inf
            return float(mpmath.log(abs(value)))


def general_solution(sol: SolutionSpec) -> SolutionEvaluator:
    return SolutionEvaluator(sol)


def struve_solution(nu: complex, L: complex = 1, M: complex = 1) -> SolutionSpec:
    """H_nu(L e^{Mz}) = Y_nu + sigma S_{nu,nu} as a SolutionSpec."""
    spec = OdeSpec(L=L, M=M, N=0, nu=nu, forcing=[Forcing(sigma=struve_sigma(nu), mu=nu)])
    return SolutionSpec(A=0, B=1, spec=spec)


def _residual_step(spec: OdeSpec, z: complex) -> float:
    zeta_modulus = abs(spec.L) * math.exp(min((spec.M * complex(z)).real, 50.0))
    frequency = max(1.0, abs(spec.M) * zeta_modulus, abs(spec.N), abs(spec.nu * spec.M))
    return min(RESIDUAL_STEP, RESIDUAL_PHASE / frequency)


def ode_residual(
    sol: SolutionSpec, z: complex, value_fn: Optional[Callable[[complex], mpmath.mpc]] = None
) -> float:
    """
    Relative residual of the periodic ODE at z.

    Derivatives come from sixth-order central differences in z with one
    Richardson level. The scale is the largest term magnitude.

    Args:
        sol: Solution whose ODE is checked
        z: Point
        value_fn: Extended-precision function to check instead of the assembled solution

    Returns:
        float: |residual| / max term magnitude
    """
    spec = sol.spec
    fn = value_fn if value_fn is not None else general_solution(sol).mp_value
    z = complex(z)
    with extended_precision():
        f, df, d2f = derivatives(lambda dz: fn(z + dz), _residual_step(spec, z))
        L, M, N, nu = (mpmath.mpc(x) for x in (spec.L, spec.M, spec.N, spec.nu))
        zm = mpmath.mpc(z)
        log_l = mpmath.log(L)
        potential = L * L * M * M * mpmath.exp(2 * M * zm) * f
        constant = (N * N - nu * nu * M * M) * f
        damping = 2 * N * df
        rhs = mpmath.mpc(0)
        for forcing in spec.forcing:
            mu = mpmath.mpc(forcing.mu)
            rhs += mpmath.mpc(forcing.sigma) * mpmath.exp((mu + 1) * log_l + (M * (mu + 1) - N) * zm) * M * M
        residual = d2f + damping + potential + constant - rhs
        scale = max(abs(d2f), abs(damping), abs(potential), abs(constant), abs(rhs), mpmath.mpf(1e-300))
        return float(abs(residual) / scale)


def classify_subnormal(sol: SolutionSpec) -> SubnormalVerdict:
    """
    Decide subnormality symbolically.

    The solution is subnormal iff A = B = 0 and every forcing term with
    nonzero sigma has mu_j + nu or mu_j - nu equal to an odd positive integer.

    Raises:
        HypothesisError: If two forcing terms share Re(mu_j)
    """
    spec = sol.spec
    re_mus = sorted(f.mu.real for f in spec.forcing)
    for first, second in zip(re_mus, re_mus[1:]):
        if abs(second - first) < CLASSIFY_TOL:
            raise HypothesisError(f"forcing exponents must have distinct real parts, got Re(mu) = {first} twice")
    if sol.A != 0 or sol.B != 0:
        return SubnormalVerdict(verdict=Verdict.NOT_SUBNORMAL, reason='nonzero_ab')
    terms = []
    for index, f in enumerate(spec.forcing, start=1):
        if f.sigma == 0:
            continue
        params = LommelParams(mu=f.mu, nu=spec.nu)
        info = params.classify()
        logger.debug(f"forcing {index}: mu={f.mu}, nu={spec.nu} is {info.regime}")
        if info.regime != Regime.TERMINATING:
            return SubnormalVerdict(verdict=Verdict.NOT_SUBNORMAL, reason='nonterminating_index', index=index)
        terms.append(lommel.terminating_lommel(params))
    return SubnormalVerdict(verdict=Verdict.SUBNORMAL, terms=terms)


def _probe_radius(spec: OdeSpec, n: int, c_nonzero: bool) -> float:
    a = cmath.phase(spec.L)
    offset = -math.pi / 4 if c_nonzero else math.pi / 4
    return math.sqrt(2) / abs(spec.M) * (2 * n * math.pi + offset - a)


def lommel_modulus_estimate(mu: complex, L: complex, M: complex, n: int, c_nonzero: bool = True) -> float:
    """
    Leading-order |S_{mu,nu}| (principal branch) at the n-th probe point.

    |zeta_n|^{Re mu - 1} e^{epsilon (pi/4) Im mu}, epsilon = +1 on the C != 0 branch.
    """
    mu = complex(mu)
    spec = OdeSpec(L=L, M=M)
    r = _probe_radius(spec, n, c_nonzero)
    log_zeta = math.log(abs(L)) + abs(M) * r / math.sqrt(2)
    epsilon = 1 if c_nonzero else -1
    return math.exp((mu.real - 1) * log_zeta + epsilon * math.pi / 4 * mu.imag)


def growth_probe(sol: SolutionSpec, n_max: int = 8) -> ProbeReport:
    """
    Sample log log|f(z_n)| / r_n along the sequence that pushes arg(zeta_n) to -+pi/4.

    Args:
        sol: Solution to probe
        n_max: Last index sampled (at least 3)

    Returns:
        ProbeReport: Per-sample data, the tail value and heuristic flags
    """
    if n_max < 3:
        raise ValueError(f"growth_probe needs n_max >= 3, got {n_max}")
    spec = sol.spec
    evaluator = general_solution(sol)
    c_nonzero = abs(sol.C) > C_ZERO_TOL
    theta = math.pi / 4 - cmath.phase(spec.M)
    expected = abs(spec.M) / math.sqrt(2)
    samples = []
    achieved = 0
    for n in range(1, n_max + 1):
        r = _probe_radius(spec, n, c_nonzero)
        if abs(spec.M) * r / math.sqrt(2) > PROBE_LOG_LIMIT:
            logger.warning(f"growth probe stopped at n={n - 1}: |zeta_n| leaves the exponent range")
            break
        z = cmath.rect(r, theta)
        achieved = n
        try:
            log_mod = evaluator.log_modulus(z)
        except (LommelError, OverflowError) as e:
            logger.warning(f"growth probe sample n={n} failed: {e}")
            samples.append(ProbeSample(n=n, r_n=r, z_n=z, error=str(e)))
            continue
        loglog = math.log(log_mod) / r if log_mod > 0 and math.isfinite(log_mod) else None
        growth = log_mod / r if math.isfinite(log_mod) else None
        samples.append(
            ProbeSample(n=n, r_n=r, z_n=z, log_modulus=log_mod if math.isfinite(log_mod) else None,
                        loglog_over_r=loglog, growth_over_r=growth)
        )
    tails = [s.loglog_over_r for s in samples if s.loglog_over_r is not None]
    tail = tails[-1] if tails else None
    bounded = tail is None or tail < 0.5 * expected
    return ProbeReport(
        samples=samples,
        tail=tail,
        expected_if_unbounded=expected,
        bounded=bounded,
        unbounded_signature=not bounded,
        achieved_n=achieved,
        branch='C_nonzero' if c_nonzero else 'C_zero',
    )


_CASES = {
    1: (lambda p: (1.0, 2.0 * p), lambda p: Fraction(p * p), "mu=1, nu=2p: 2 sigma e^{z/2} O_{2p}(2e^{z/2})"),
    2: (lambda p: (0.0, 2.0 * p + 1), lambda p: Fraction((2 * p + 1) ** 2, 4),
        "mu=0, nu=2p+1: 2 sigma/(2p+1) e^{z/2} O_{2p+1}(2e^{z/2})"),
    3: (lambda p: (-1.0, 2.0 * p + 2), lambda p: Fraction((p + 1) ** 2),
        "mu=-1, nu=2p+2: sigma/(4(p+1)) S_{2p+2}(2e^{z/2})"),
    4: (lambda p: (p + 0.5, p + 0.5), lambda p: Fraction((2 * p + 1) ** 2, 16),
        "mu=nu=p+1/2: sigma 2^{p-1/2} sqrt(pi) p! K_{p+1/2}(2e^{z/2})"),
}


def quantization_case(case_id: int, p: int, sigma: complex = 1) -> QuantizationCase:
    """
    Parameters and closed-form solution of f'' + (e^z - K) f = sigma 2^{mu-1} e^{(mu+1)z/2}.

    Args:
        case_id: 1..4
        p: Nonnegative integer
        sigma: Forcing amplitude

    Raises:
        ValueError: For an unknown case or negative p
    """
    if case_id not in _CASES:
        raise ValueError(f"case_id must be 1..4, got {case_id}")
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    params, k_value, description = _CASES[case_id]
    mu, nu = params(p)
    return QuantizationCase(
        case_id=case_id, p=p, sigma=complex(sigma), mu=mu, nu=nu, K_exact=str(k_value(p)), description=description
    )
