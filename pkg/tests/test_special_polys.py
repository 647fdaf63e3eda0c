import math

import mpmath
import pytest
from numpy.testing import assert_allclose

from conftest import point
from lommel.functions import lommel, special_polys
from lommel.functions.core_complex import Method
from lommel.functions.lommel import LommelParams
from lommel.utils.errors import PoleError

IDENTITY_GRID = [0.7, 1.3, 2.1, 3.7, 8.5]


def mp_ref(fn, *args) -> complex:
    with mpmath.workdps(40):
        return complex(fn(*args))


class TestNeumann:
    def test_low_orders(self):
        zeta = complex(1.3, 0.4)
        w = point(zeta)
        assert_allclose(special_polys.neumann_o(0, w).value, 1 / zeta, rtol=1e-15)
        assert_allclose(special_polys.neumann_o(1, w).value, 1 / zeta ** 2, rtol=1e-15)
        assert_allclose(special_polys.neumann_o(2, w).value, 1 / zeta + 4 / zeta ** 3, rtol=1e-15)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            special_polys.neumann_o(-1, point(1))

    @pytest.mark.parametrize("zeta", IDENTITY_GRID)
    @pytest.mark.parametrize("n", range(8))
    def test_lommel_relation(self, n, zeta):
        # O_{2p} = S_{1,2p}/zeta and O_{2p+1} = (2p+1) S_{0,2p+1}/zeta
        w = point(zeta)
        odd = n % 2
        scale = n if odd else 1
        expected = scale * lommel.lommel_S(LommelParams(mu=1 - odd, nu=n), w).value / zeta
        assert_allclose(special_polys.neumann_o(n, w).value, expected, rtol=1e-8)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_schlafli_relation(self, n):
        zeta = complex(1.7, -0.6)
        w = point(zeta)
        lhs = 0.5 * n * special_polys.schlafli_s(n, w).value
        rhs = zeta * special_polys.neumann_o(n, w).value - math.cos(n * math.pi / 2) ** 2
        assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-15)


class TestSchlafli:
    def test_first_orders(self):
        zeta = 2.5
        w = point(zeta)
        assert special_polys.schlafli_s(0, w).value == 0
        assert_allclose(special_polys.schlafli_s(1, w).value, 2 / zeta, rtol=1e-15)
        assert_allclose(special_polys.schlafli_s(2, w).value, 4 / zeta ** 2, rtol=1e-15)


class TestGegenbauer:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_order_zero_is_twice_neumann(self, n):
        w = point(complex(1.4, 0.3))
        assert_allclose(
            special_polys.gegenbauer_a(n, 0, w).value, 2 * special_polys.neumann_o(n, w).value, rtol=1e-14
        )

    def test_first_degree(self):
        nu, zeta = 0.5, 2.0
        expected = math.gamma(nu + 2) * 2 ** (nu + 1) / zeta ** 2
        assert_allclose(special_polys.gegenbauer_a(1, nu, point(zeta)).value, expected, rtol=1e-14)

    def test_pole(self):
        with pytest.raises(PoleError):
            special_polys.gegenbauer_a(2, -3, point(1))

    @pytest.mark.parametrize("zeta", IDENTITY_GRID)
    @pytest.mark.parametrize("nu", [0.3, 1.5, complex(0.4, 0.2)])
    @pytest.mark.parametrize("n", range(6))
    def test_lommel_relation(self, n, nu, zeta):
        p, odd = divmod(n, 2)
        w = point(zeta)
        with mpmath.workdps(30):
            weight = complex(mpmath.power(2, nu + odd) * mpmath.gamma(nu + p + odd) / mpmath.factorial(p))
        params = LommelParams(mu=1 - nu - odd, nu=nu + n)
        expected = weight * (nu + n) * zeta ** (nu - 1) * lommel.lommel_S(params, w).value
        assert_allclose(special_polys.gegenbauer_a(n, nu, w).value, expected, rtol=1e-8)


class TestStruve:
    def test_sigma(self):
        assert_allclose(special_polys.struve_sigma(0), 2 / math.pi, rtol=1e-15)

    @pytest.mark.parametrize("nu, zeta", [(0, 1.0), (0.3, complex(2, 1)), (complex(1.2, 0.3), complex(4, -2))])
    def test_h_matches_mpmath(self, nu, zeta):
        result = special_polys.struve_h(nu, point(zeta))
        assert_allclose(result.value, mp_ref(mpmath.struveh, nu, zeta), rtol=1e-12)
        assert result.method == Method.SERIES

    def test_h_large_argument(self):
        result = special_polys.struve_h(0.3, point(25))
        assert_allclose(result.value, mp_ref(mpmath.struveh, 0.3, 25), rtol=1e-10)

    def test_h_minus_half_is_bessel(self):
        zeta = 1.9
        expected = math.sqrt(2 / (math.pi * zeta)) * math.sin(zeta)
        assert_allclose(special_polys.struve_h(-0.5, point(zeta)).value, expected, rtol=1e-14)

    def test_h_half_closed_form(self):
        zeta = 2.0
        expected = math.sqrt(2 / (math.pi * zeta)) * (1 - math.cos(zeta))
        assert_allclose(special_polys.struve_h(0.5, point(zeta)).value, expected, rtol=1e-14)

    def test_k_half_integer(self):
        # K_{3/2}(2) = 1.5 / sqrt(pi)
        expected = 1.5 / math.sqrt(math.pi)
        assert_allclose(special_polys.struve_k_half_integer(1, point(2)).value, expected, rtol=1e-14)
        assert_allclose(special_polys.struve_k(1.5, point(2)).value, expected, rtol=1e-12)

    def test_k_large_argument(self):
        zeta = complex(30, 4)
        expected = mp_ref(mpmath.struveh, 0.3, zeta) - mp_ref(mpmath.bessely, 0.3, zeta)
        assert_allclose(special_polys.struve_k(0.3, point(zeta)).value, expected, rtol=1e-8)

    @pytest.mark.parametrize("p", range(4))
    def test_k_half_integer_matches_lommel_form(self, p):
        nu = p + 0.5
        w = point(complex(2.5, 0.5))
        finite_sum = special_polys.struve_k_half_integer(p, w).value
        via_lommel = special_polys.struve_sigma(nu) * lommel.lommel_S(LommelParams(mu=nu, nu=nu), w).value
        assert_allclose(finite_sum, via_lommel, rtol=1e-12)
        assert_allclose(finite_sum, special_polys.struve_k(nu, w).value, rtol=1e-10)

    def test_k_half_integer_rejects_negative_p(self):
        with pytest.raises(ValueError):
            special_polys.struve_k_half_integer(-1, point(1))
