import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import solve_ivp

from lommel import ode_engine
from lommel.functions import lommel, special_polys
from lommel.functions.core_complex import LogPoint
from lommel.functions.lommel import LommelParams
from lommel.ode_engine import Forcing, OdeSpec, SolutionSpec, Verdict
from lommel.utils.errors import DomainError, HypothesisError

SAMPLE_Z = [complex(-1.0, 0.3), complex(-0.2, -0.7), complex(0.0, 0.0), complex(0.6, 1.1), complex(1.2, -0.4)]


def quantization_solution(mu, nu, sigma=1) -> SolutionSpec:
    """f'' + (e^z - nu^2/4) f = sigma 2^{mu-1} e^{(mu+1)z/2}."""
    return SolutionSpec(spec=OdeSpec(L=2, M=0.5, N=0, nu=nu, forcing=[Forcing(sigma=sigma, mu=mu)]))


@pytest.fixture
def generic_solution():
    spec = OdeSpec(
        L=complex(1.2, 0.3),
        M=complex(0.8, 0.1),
        N=complex(0.2, -0.1),
        nu=complex(0.35, 0.1),
        forcing=[Forcing(sigma=complex(1, -0.5), mu=complex(0.4, 0.2)), Forcing(sigma=0.7, mu=-0.9)],
    )
    return SolutionSpec(A=complex(0.5, 0.2), B=complex(-0.3, 0.4), spec=spec)


class TestOdeSpec:
    def test_l_and_m_nonzero(self):
        with pytest.raises(ValueError):
            OdeSpec(L=0, M=1)
        with pytest.raises(ValueError):
            OdeSpec(L=1, M=0)

    def test_hankel_coefficients(self):
        sol = SolutionSpec(A=1, B=2, spec=OdeSpec(L=1, M=1))
        assert_allclose([sol.C, sol.D], [(1 - 2j) / 2, (1 + 2j) / 2])

    def test_transform(self):
        spec = OdeSpec(L=2, M=0.5, N=0, nu=2, forcing=[Forcing(sigma=1, mu=1)])
        transform = ode_engine.lommel_transform(spec)
        assert_allclose(
            [transform.damping, transform.potential_scale, transform.potential_rate, transform.constant],
            [0, 1, 1, -1],
            atol=1e-15,
        )
        assert_allclose([transform.forcing[0].coefficient, transform.forcing[0].rate], [1, 1], rtol=1e-15)

    def test_general_transform(self):
        transform = ode_engine.transform_coefficients(1, 2, 0.5, 1, 0.3, [])
        assert_allclose(transform.damping, 1.0)
        assert_allclose(transform.potential_rate, 4.0)
        assert_allclose(transform.constant, 0.25 - 0.09 * 4)


class TestSolution:
    def test_residual_of_general_solution(self, generic_solution):
        for z in SAMPLE_Z:
            assert ode_engine.ode_residual(generic_solution, z) < 1e-8

    def test_matches_numerical_integration(self, generic_solution):
        spec = generic_solution.spec
        L, M, N, nu = spec.L, spec.M, spec.N, spec.nu

        def rhs(t, y):
            potential = L * L * M * M * cmath.exp(2 * M * t) + N * N - nu * nu * M * M
            forcing = sum(
                f.sigma * cmath.exp((f.mu + 1) * cmath.log(L)) * M * M * cmath.exp((M * (f.mu + 1) - N) * t)
                for f in spec.forcing
            )
            return [y[1], forcing - 2 * N * y[1] - potential * y[0]]

        evaluator = ode_engine.general_solution(generic_solution)
        h = 1e-4
        start = [evaluator(0).value, (evaluator(h).value - evaluator(-h).value) / (2 * h)]
        solution = solve_ivp(rhs, (0.0, 1.0), np.array(start, dtype=complex), method='DOP853', rtol=1e-11, atol=1e-13)
        assert solution.success
        assert_allclose(solution.y[0, -1], evaluator(1.0).value, rtol=1e-6)

    def test_hankel_form_agrees(self, generic_solution):
        evaluator = ode_engine.general_solution(generic_solution)
        z = complex(0.4, -0.3)
        assert_allclose(evaluator.hankel_form(z).value, evaluator(z).value, rtol=1e-11)

    def test_log_modulus(self, generic_solution):
        evaluator = ode_engine.general_solution(generic_solution)
        z = complex(0.4, -0.3)
        assert_allclose(evaluator.log_modulus(z), math.log(abs(evaluator(z).value)), rtol=1e-12)

    def test_homogeneous_zero_solution(self):
        evaluator = ode_engine.general_solution(SolutionSpec(spec=OdeSpec(L=1, M=1)))
        assert evaluator(0.5).value == 0
        assert evaluator.log_modulus(0.5) == -math.inf

    def test_struve_solution(self):
        sol = ode_engine.struve_solution(0.3)
        z = complex(0.7, 0.4)
        expected = special_polys.struve_h(0.3, LogPoint(base=z)).value
        assert_allclose(ode_engine.general_solution(sol)(z).value, expected, rtol=1e-12)
        assert ode_engine.ode_residual(sol, z) < 1e-8

    def test_closed_form_example_integer_order(self):
        # f = 1 + e^{-z} solves f'' + (e^z - 1) f = e^z
        sol = quantization_solution(1, 2)
        evaluator = ode_engine.general_solution(sol)
        for z in SAMPLE_Z:
            assert_allclose(evaluator(z).value, 1 + cmath.exp(-z), rtol=1e-10)
            assert ode_engine.ode_residual(sol, z) < 1e-9

    def test_closed_form_example_odd_order(self):
        # f = e^{-z/2}/2 + e^{-3z/2} solves f'' + (e^z - 9/4) f = 1/2 e^{z/2}
        sol = quantization_solution(0, 3)
        evaluator = ode_engine.general_solution(sol)
        for z in SAMPLE_Z:
            assert_allclose(evaluator(z).value, cmath.exp(-z / 2) / 2 + cmath.exp(-3 * z / 2), rtol=1e-10)
            assert ode_engine.ode_residual(sol, z) < 1e-9

    def test_closed_form_example_schlafli(self):
        # mu = -1, nu = 2: f = e^{-z}/4
        sol = quantization_solution(-1, 2)
        evaluator = ode_engine.general_solution(sol)
        for z in SAMPLE_Z:
            assert_allclose(evaluator(z).value, cmath.exp(-z) / 4, rtol=1e-10)

    def test_closed_form_example_half_integer(self):
        # mu = nu = 1/2: f = e^{-z/4} / sqrt(2)
        sol = quantization_solution(0.5, 0.5)
        evaluator = ode_engine.general_solution(sol)
        for z in SAMPLE_Z:
            assert_allclose(evaluator(z).value, cmath.exp(-z / 4) / math.sqrt(2), rtol=1e-10)
            assert ode_engine.ode_residual(sol, z) < 1e-9

    def test_closed_form_example_schlafli_second_order(self):
        # mu = -1, nu = 4: f = e^{-z}/4 + 3 e^{-2z}/4
        sol = quantization_solution(-1, 4)
        evaluator = ode_engine.general_solution(sol)
        case = ode_engine.quantization_case(3, 1)
        for z in SAMPLE_Z:
            expected = cmath.exp(-z) / 4 + 3 * cmath.exp(-2 * z) / 4
            assert_allclose(evaluator(z).value, expected, rtol=1e-10)
            assert_allclose(case.evaluate(z).value, expected, rtol=1e-12)
            assert ode_engine.ode_residual(sol, z) < 1e-9

    def test_closed_form_example_three_halves(self):
        # mu = nu = 3/2: f = sqrt(2) e^{z/4} (1 + 1/(2 e^z)), K = 9/16
        sol = quantization_solution(1.5, 1.5)
        evaluator = ode_engine.general_solution(sol)
        case = ode_engine.quantization_case(4, 1)
        assert case.K == Fraction(9, 16)
        for z in SAMPLE_Z:
            expected = math.sqrt(2) * cmath.exp(z / 4) * (1 + 1 / (2 * cmath.exp(z)))
            assert_allclose(evaluator(z).value, expected, rtol=1e-10)
            assert_allclose(case.evaluate(z).value, expected, rtol=1e-12)
            assert ode_engine.ode_residual(sol, z) < 1e-9


class TestClassify:
    def test_subnormal(self):
        sol = quantization_solution(1, 2)
        verdict = ode_engine.classify_subnormal(sol)
        assert verdict.verdict == Verdict.SUBNORMAL
        assert verdict.reason is None
        assert_allclose(verdict.terms[0].coefficients, [1, -4])

    def test_nonzero_ab(self):
        sol = SolutionSpec(A=1, spec=quantization_solution(1, 2).spec)
        verdict = ode_engine.classify_subnormal(sol)
        assert verdict.verdict == Verdict.NOT_SUBNORMAL
        assert verdict.reason == 'nonzero_ab'

    def test_nonterminating_index(self):
        spec = OdeSpec(L=2, M=0.5, nu=0.1, forcing=[Forcing(sigma=1, mu=3.1), Forcing(sigma=1, mu=0.3)])
        verdict = ode_engine.classify_subnormal(SolutionSpec(spec=spec))
        assert verdict.reason == 'nonterminating_index'
        assert verdict.index == 2

    def test_duplicate_real_parts(self):
        spec = OdeSpec(L=1, M=1, forcing=[Forcing(sigma=1, mu=complex(1, 0.5)), Forcing(sigma=2, mu=complex(1, -2))])
        with pytest.raises(HypothesisError):
            ode_engine.classify_subnormal(SolutionSpec(spec=spec))

    def test_empty_forcing(self):
        verdict = ode_engine.classify_subnormal(SolutionSpec(spec=OdeSpec(L=1, M=1)))
        assert verdict.verdict == Verdict.SUBNORMAL
        assert verdict.terms == []
        assert verdict.solution_string(OdeSpec(L=1, M=1)) == "f(z) = 0"

    def test_exponential_terms(self):
        sol = quantization_solution(0, 3)
        verdict = ode_engine.classify_subnormal(sol)
        pairs = verdict.exponential_terms(sol.spec)
        assert_allclose([c for c, _ in pairs], [0.5, 1.0], rtol=1e-14)
        assert_allclose([r for _, r in pairs], [-0.5, -1.5], rtol=1e-14)
        assert verdict.solution_string(sol.spec) == "f(z) = 0.5*exp(-0.5*z) + 1*exp(-1.5*z)"

    def test_exponential_terms_need_subnormal(self):
        sol = SolutionSpec(A=1, spec=OdeSpec(L=1, M=1))
        with pytest.raises(ValueError):
            ode_engine.classify_subnormal(sol).exponential_terms(sol.spec)

    def test_generated_corpus(self):
        rng = np.random.default_rng(11)
        for i in range(200):
            nu = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            p = int(rng.integers(0, 5))
            mu = nu + 2 * p + 1
            terminating = i % 2 == 0
            if not terminating:
                mu += 1e-3
            spec = OdeSpec(L=complex(rng.uniform(0.5, 2)), M=complex(rng.uniform(0.5, 2)), nu=nu,
                           forcing=[Forcing(sigma=1, mu=mu)])
            verdict = ode_engine.classify_subnormal(SolutionSpec(spec=spec))
            assert (verdict.verdict == Verdict.SUBNORMAL) == terminating


class TestGrowthProbe:
    def test_hankel_bearing_solution(self):
        sol = SolutionSpec(A=1, spec=OdeSpec(L=1, M=0.5))
        report = ode_engine.growth_probe(sol, n_max=8)
        assert report.branch == 'C_nonzero'
        assert report.achieved_n == 8
        assert_allclose(report.expected_if_unbounded, 0.5 / math.sqrt(2))
        assert abs(report.tail - report.expected_if_unbounded) < 0.1 * report.expected_if_unbounded
        assert report.unbounded_signature

    def test_struve_composition(self):
        report = ode_engine.growth_probe(ode_engine.struve_solution(0.3, L=1, M=1), n_max=8)
        assert abs(report.tail - 1 / math.sqrt(2)) < 0.1 / math.sqrt(2)

    def test_subnormal_solution_is_bounded(self):
        report = ode_engine.growth_probe(quantization_solution(1, 2), n_max=8)
        assert report.branch == 'C_zero'
        assert report.bounded
        assert not report.unbounded_signature

    def test_needs_three_samples(self):
        with pytest.raises(ValueError):
            ode_engine.growth_probe(quantization_solution(1, 2), n_max=2)

    def test_modulus_estimate(self):
        mu, nu = complex(0.5, 0.3), 0.2
        n = 1
        log_r = 2 * n * math.pi - math.pi / 4
        value = lommel.lommel_S(LommelParams(mu=mu, nu=nu), LogPoint(base=complex(log_r, -math.pi / 4))).value
        estimate = ode_engine.lommel_modulus_estimate(mu, 1, 1, n, c_nonzero=True)
        assert_allclose(abs(value), estimate, rtol=1e-3)


class TestQuantization:
    @pytest.mark.parametrize("case_id", [1, 2, 3, 4])
    @pytest.mark.parametrize("p", [0, 1, 2, 3])
    def test_eigenvalue_and_residual(self, case_id, p):
        case = ode_engine.quantization_case(case_id, p)
        expected_k = {
            1: Fraction(p * p),
            2: Fraction((2 * p + 1) ** 2, 4),
            3: Fraction((p + 1) ** 2),
            4: Fraction((2 * p + 1) ** 2, 16),
        }[case_id]
        assert case.K == expected_k
        assert case.K == Fraction(case.nu).limit_denominator(64) ** 2 / 4
        sol = case.solution_spec()
        evaluator = ode_engine.general_solution(sol)
        for z in SAMPLE_Z[:3]:
            assert_allclose(case.evaluate(z).value, evaluator(z).value, rtol=1e-10)
            assert ode_engine.ode_residual(sol, z, value_fn=case.mp_value) < 1e-8

    def test_example_case_two(self):
        case = ode_engine.quantization_case(2, 1)
        assert case.K_exact == "9/4"
        z = complex(0.3, -0.2)
        assert_allclose(case.evaluate(z).value, cmath.exp(-z / 2) / 2 + cmath.exp(-3 * z / 2), rtol=1e-12)

    def test_case_one_at_p_zero(self):
        case = ode_engine.quantization_case(1, 0, sigma=2)
        assert case.K_exact == "0"
        z = complex(0.5, 0.1)
        # 2 sigma e^{z/2} O_0(2 e^{z/2}) = sigma
        assert_allclose(case.evaluate(z).value, 2, rtol=1e-14)

    def test_gegenbauer_form(self):
        case = ode_engine.quantization_case(1, 2)
        z = complex(0.2, 0.6)
        assert_allclose(case.gegenbauer_value(z).value, case.evaluate(z).value, rtol=1e-12)

    def test_gegenbauer_error_estimate(self):
        case = ode_engine.quantization_case(1, 2, sigma=complex(1, 2))
        z = complex(0.2, 0.6)
        polynomial = special_polys.gegenbauer_a(4, 0, LogPoint(base=math.log(2) + z / 2))
        result = case.gegenbauer_value(z)
        expected = abs(complex(1, 2) * cmath.exp(z / 2)) * polynomial.abs_err_est
        assert_allclose(result.abs_err_est, expected, rtol=1e-12)
        assert 0 < result.abs_err_est < 1e-12 * abs(result.value)
        assert result.terms_used == polynomial.terms_used

    def test_gegenbauer_form_rejects_other_cases(self):
        z = complex(0.2, 0.6)
        with pytest.raises(DomainError):
            ode_engine.quantization_case(1, 0).gegenbauer_value(z)
        with pytest.raises(DomainError):
            ode_engine.quantization_case(2, 1).gegenbauer_value(z)

    @pytest.mark.parametrize("case_id, p", [(0, 1), (5, 1), (1, -1)])
    def test_bad_arguments(self, case_id, p):
        with pytest.raises(ValueError):
            ode_engine.quantization_case(case_id, p)
