"""
Analytic continuation of S_{mu,nu} across sheets: zeta -> zeta * e^{-m pi i}.

The generic case carries S over with the P_m, Q_m Chebyshev combinations and
the two Hankel functions. Singular parameters use dedicated formulas for
non-integer nu, for nu = 0 and for nu = -n.
"""
import logging
from lommel.utils._compat import StrEnum
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict

from lommel.functions import bessel, lommel
from lommel.functions.bessel import HankelKind
from lommel.functions.chebyshev import mp_u
from lommel.functions.core_complex import Eval, LogPoint, Method, nearest_integer
from lommel.utils.errors import DegenerateError
from lommel.utils.series import MpEval, combine, exact, extended_precision

logger = logging.getLogger(__name__)

DEGENERATE_TOL = 1e-10
CONTINUE_DEGENERATE_TOL = 1e-6


class SingularCase(StrEnum):
    NU_GENERIC = "nu_generic"
    NU_ZERO = "nu_zero"


class PQPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int
    P: complex
    Q: complex
    K_plus: complex


class PolySplit(BaseModel):
    """hat: odd-degree part; bar: poly - delta_m * hat with delta_m = 1 + (-1)^{m-1}."""

    model_config = ConfigDict(frozen=True)

    hat: List[complex]
    bar: List[complex]
    delta_m: int


def chebyshev_u(m: int, nu: complex) -> complex:
    """
    U_{m-1}(cos(nu pi)) for any integer m.

    Non-integer nu uses sin(m nu pi) / sin(nu pi); integer nu uses the limit
    m (-1)^{k(m-1)}; |sin(nu pi)| < 1e-4 falls back to the three-term recurrence.
    """
    with extended_precision():
        return complex(mp_u(m - 1, nu))


def _mp_pq(m: int, mu, nu, tol: float) -> Tuple[mpmath.mpc, mpmath.mpc, mpmath.mpc]:
    mu, nu = mpmath.mpc(mu), mpmath.mpc(nu)
    d_plus = 1 + mpmath.exp(-(mu + nu) * mpmath.pi * 1j)
    d_minus = 1 + mpmath.exp(-(mu - nu) * mpmath.pi * 1j)
    if min(abs(d_plus), abs(d_minus)) < tol:
        raise DegenerateError(f"continuation denominator vanishes for mu={mu}, nu={nu}")
    den = d_plus * d_minus
    e = mpmath.exp(-mu * mpmath.pi * 1j)
    p = (mp_u(m - 1, nu) + e * mp_u(m, nu) + (-1) ** ((m + 1) % 2) * e ** (m + 1)) / den
    q = (mp_u(m - 2, nu) + e * mp_u(m - 1, nu) + (-1) ** (m % 2) * e ** m) / den
    k_plus = (
        lommel._K(mu, nu)
        * 1j
        * (1 + mpmath.exp((nu - mu) * mpmath.pi * 1j))
        * mpmath.cos((mu + nu) * mpmath.pi / 2)
    )
    return p, q, k_plus


def continuation_pq(m: int, mu: complex, nu: complex, tol: float = DEGENERATE_TOL) -> PQPair:
    """
    Closed-form continuation coefficients P_m, Q_m and the constant K_+.

    Raises:
        DegenerateError: If 1 + e^{-(mu +- nu) pi i} is below tol in modulus
    """
    with extended_precision():
        p, q, k_plus = _mp_pq(m, mu, nu, tol)
        return PQPair(m=m, P=complex(p), Q=complex(q), K_plus=complex(k_plus))


def continuation_pq_recursive(m: int, mu: complex, nu: complex) -> Tuple[complex, complex]:
    """P_m, Q_m from the finite sums (m > 0) and the reflection formula (m < 0)."""
    with extended_precision():
        e = mpmath.exp(-mpmath.mpc(mu) * mpmath.pi * 1j)
        if m == 0:
            return 0j, 0j
        size = abs(m)
        p = sum((-1) ** j * e ** j * mp_u(size - j - 1, nu) for j in range(size + 1))
        q = sum((-1) ** j * e ** j * mp_u(size - j - 2, nu) for j in range(size))
        if m > 0:
            return complex(p), complex(q)
        sign = (-1) ** ((m + 1) % 2)
        p_neg = sign * e ** m * (p * mp_u(m, nu) - q * mp_u(m - 1, nu))
        q_neg = sign * e ** m * (p * mp_u(m - 1, nu) + q * mp_u(-m, nu))
        return complex(p_neg), complex(q_neg)


def _continue_generic(mu, nu, m: int, w: LogPoint, s_value: Optional[MpEval] = None, tol: float = CONTINUE_DEGENERATE_TOL) -> MpEval:
    p, q, k_plus = _mp_pq(m, mu, nu, tol)
    s = s_value if s_value is not None else lommel._S(mu, nu, w)
    h1 = bessel._hankel(HankelKind.FIRST, nu, w)
    h2 = bessel._hankel(HankelKind.SECOND, nu, w)
    e = mpmath.exp(-mpmath.mpc(mu) * mpmath.pi * 1j)
    twist = mpmath.exp(-mpmath.mpc(nu) * mpmath.pi * 1j)
    return combine(
        [((-1) ** (m % 2) * e ** m, s), (k_plus * p, h1), (k_plus * twist * q, h2)],
        Method.CONTINUATION,
    )


def _k_prime(nu, m: int) -> Tuple[mpmath.mpc, mpmath.mpc]:
    nu = mpmath.mpc(nu)
    lead = mpmath.pi * mpmath.power(2, nu - 2) * 1j * mpmath.exp(-m * nu * mpmath.pi * 1j) * mpmath.gamma(nu)
    u = mp_u(m - 1, nu)
    return (
        lead * (u * mpmath.exp((m + 1) * nu * mpmath.pi * 1j) - m),
        lead * (u * mpmath.exp((m - 1) * nu * mpmath.pi * 1j) - m),
    )


def singular_k_coeffs(case: SingularCase, nu: complex, m: int) -> Tuple[complex, complex]:
    """
    Constants multiplying the Hankel terms in the singular continuation.

    Args:
        case: NU_GENERIC (non-integer nu) or NU_ZERO
        nu: Order; ignored for NU_ZERO
        m: Number of half-turns
    """
    case = SingularCase(case)
    with extended_precision():
        if case == SingularCase.NU_ZERO:
            kp, km = lommel._k_double(m)
        else:
            kp, km = _k_prime(nu, m)
        return complex(kp), complex(km)


def poly_branch_split(poly: Sequence[complex], m: int) -> PolySplit:
    """
    Split polynomial coefficients (ascending) for the m-step continuation.

    Args:
        poly: Coefficients, constant term first
        m: Number of half-turns

    Returns:
        PolySplit: The odd part, poly - delta_m * odd part and delta_m in {0, 2};
            bar evaluated at zeta equals poly at zeta e^{-m pi i}
    """
    coeffs = np.asarray(poly, dtype=complex)
    hat = coeffs.copy()
    hat[0::2] = 0
    delta = 1 + (-1) ** ((m - 1) % 2)
    return PolySplit(hat=list(hat), bar=list(coeffs - delta * hat), delta_m=delta)


def _mp_poly(coeffs: Sequence[complex], zeta) -> mpmath.mpc:
    return mpmath.polyval([mpmath.mpc(c) for c in reversed(list(coeffs))], zeta)


def _continue_negative_integer(n: int, p: int, m: int, w: LogPoint, s_value: Optional[MpEval]) -> MpEval:
    s_total = s_value if s_value is not None else lommel._S_ladder(-n, p, w)
    zeta = w.mp_zeta()
    abc = lommel.abc_polys(n)
    split_a, split_b, split_c = (poly_branch_split(poly, m) for poly in (abc.A, abc.B, abc.C))
    delta = 1 + (-1) ** ((m - 1) % 2)
    s0 = lommel._S_minus1_0(w)
    ds0 = lommel._zeta_dS_minus1_0(w)
    kp, km = lommel._k_double(m)
    h0_1 = bessel._hankel(HankelKind.FIRST, 0, w)
    h0_2 = bessel._hankel(HankelKind.SECOND, 0, w)
    h1_1 = bessel._hankel(HankelKind.FIRST, 1, w)
    h1_2 = bessel._hankel(HankelKind.SECOND, 1, w)
    b_bar = _mp_poly(split_b.bar, zeta)
    c_bar = zeta * _mp_poly(split_c.bar, zeta)
    prefactor = (
        (-1) ** (((m + 1) * n + p) % 2)
        / (mpmath.power(2, 2 * p + n) * mpmath.factorial(n) * mpmath.factorial(p) * mpmath.rf(1 + n, p))
        * mpmath.exp(-n * w.mp_w())
    )
    parts = [
        ((-1) ** ((m * n) % 2), s_total),
        (-delta * prefactor, exact(_mp_poly(split_a.hat, zeta), Method.CLOSED_FORM)),
        (-delta * prefactor * _mp_poly(split_b.hat, zeta), s0),
        (-delta * prefactor * _mp_poly(split_c.hat, zeta), ds0),
        (prefactor * b_bar * kp, h0_1),
        (prefactor * b_bar * km, h0_2),
        (-prefactor * c_bar * kp, h1_1),
        (-prefactor * c_bar * km, h1_2),
    ]
    return combine(parts, Method.CONTINUATION)


def _continue_singular(nu, p: int, m: int, w: LogPoint, s_value: Optional[MpEval] = None) -> MpEval:
    """S_{nu-2p-1,nu}(zeta e^{-m pi i}) from values at zeta."""
    n = nearest_integer(complex(nu), lommel.REGIME_TOL)
    if n is not None and 1 <= n <= p:
        return _continue_singular(-n, p - n, m, w, s_value)
    if m == 0:
        return s_value if s_value is not None else lommel._S_ladder(nu, p, w)
    if n is not None and n < 0:
        return _continue_negative_integer(-n, p, m, w, s_value)
    if n == 0:
        s = s_value if s_value is not None else lommel._S_ladder(0, p, w)
        kp, km = lommel._k_double(m)
        c = (-1) ** (p % 2) / (mpmath.power(2, 2 * p) * mpmath.factorial(p) ** 2)
        h1 = bessel._hankel(HankelKind.FIRST, 0, w)
        h2 = bessel._hankel(HankelKind.SECOND, 0, w)
        return combine([(1, s), (c * kp, h1), (c * km, h2)], Method.CONTINUATION)
    nu_mp = mpmath.mpc(nu)
    s = s_value if s_value is not None else lommel._S_ladder(nu, p, w)
    kp, km = _k_prime(nu, m)
    c = (-1) ** (p % 2) / (mpmath.power(2, 2 * p) * mpmath.factorial(p) * mpmath.rf(1 - nu_mp, p))
    h1 = bessel._hankel(HankelKind.FIRST, nu, w)
    h2 = bessel._hankel(HankelKind.SECOND, nu, w)
    return combine(
        [(mpmath.exp(-m * nu_mp * mpmath.pi * 1j), s), (c * kp, h1), (c * km, h2)],
        Method.CONTINUATION,
    )


def _continue_S(mu, nu, m: int, w: LogPoint) -> MpEval:
    if m == 0:
        return lommel._S(mu, nu, w)
    info = lommel.LommelParams(mu=complex(mu), nu=complex(nu)).classify()
    if info.regime == lommel.Regime.TERMINATING:
        s = lommel._S(mu, nu, w)
        return s.scaled(mpmath.exp(-m * mpmath.mpc(info.nu_eff) * mpmath.pi * 1j)).with_method(Method.CONTINUATION)
    if info.regime == lommel.Regime.SINGULAR:
        return _continue_singular(info.nu_eff, info.p, m, w)
    return _continue_generic(mu, nu, m, w)


def continue_S(mu: complex, nu: complex, m: int, w: LogPoint) -> Eval:
    """
    S_{mu,nu}(zeta e^{-m pi i}) expressed through values at zeta.

    Args:
        mu: First Lommel parameter
        nu: Order
        m: Number of clockwise half-turns
        w: The unshifted point

    Raises:
        DegenerateError: If a continuation denominator is below 1e-6 in the generic regime
    """
    with extended_precision(lommel._digits(w)):
        return Eval.from_mp(_continue_S(mu, nu, m, w))


def continue_S_singular(nu: complex, p: int, m: int, w: LogPoint) -> Eval:
    """S_{nu-2p-1,nu}(zeta e^{-m pi i}) for the singular subscripts, through values at zeta."""
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    with extended_precision(lommel._digits(w)):
        return Eval.from_mp(_continue_singular(nu, p, m, w))


def continue_struve_h(nu: complex, m: int, w: LogPoint) -> Eval:
    """H_nu(zeta e^{-m pi i}) = (-1)^m e^{-m nu pi i} H_nu(zeta)."""
    from lommel.functions import special_polys

    with extended_precision():
        h = special_polys._struve_h(nu, w)
        factor = (-1) ** (m % 2) * mpmath.exp(-m * mpmath.mpc(nu) * mpmath.pi * 1j)
        return Eval.from_mp(h.scaled(factor).with_method(Method.CONTINUATION))


def struve_k_continuation_one_step(nu: complex, w: LogPoint) -> Eval:
    """K_nu(zeta e^{-pi i}) = -e^{-nu pi i} K_nu(zeta) + 2i cos(nu pi) H^(1)_nu(zeta)."""
    from lommel.functions import special_polys

    with extended_precision(lommel._digits(w)):
        nu_mp = mpmath.mpc(nu)
        h = special_polys._struve_h(nu, w)
        y = bessel._y(nu, w)
        h1 = bessel._hankel(HankelKind.FIRST, nu, w)
        twist = -mpmath.exp(-nu_mp * mpmath.pi * 1j)
        return Eval.from_mp(
            combine(
                [(twist, h), (-twist, y), (2j * mpmath.cos(nu_mp * mpmath.pi), h1)],
                Method.CONTINUATION,
            )
        )
