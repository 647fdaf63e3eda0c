"""
Bessel functions J, Y and the Hankel functions on any sheet of the logarithm.

Small |zeta| uses the power series, which is written in terms of w = log zeta
and is therefore valid on every sheet. Large |zeta| reduces w to the principal
half-plane, applies the Hankel asymptotic expansions there and carries the
result back with the Chebyshev continuation coefficients.
"""
import logging
import math
from lommel.utils._compat import StrEnum
from typing import Tuple

import mpmath

from lommel.functions.chebyshev import mp_u
from lommel.functions.core_complex import Eval, LogPoint, Method, nearest_integer
from lommel.utils.errors import DomainError
from lommel.utils.series import (
    MpEval,
    combine,
    exact,
    extended_precision,
    magnitude_digits,
    sum_series,
    working_eps,
)

logger = logging.getLogger(__name__)

SWITCH_RADIUS_MIN = 18.0
INTEGER_ORDER_TOL = 1e-8


class HankelKind(StrEnum):
    FIRST = "first"
    SECOND = "second"


def switch_radius(nu) -> float:
    """Radius beyond which the Hankel asymptotic expansion replaces the power series."""
    return max(SWITCH_RADIUS_MIN, abs(complex(nu)) ** 2 / 2)


def _is_large(nu, w: LogPoint) -> bool:
    return w.log_modulus > math.log(switch_radius(nu))


def _precision_for(w: LogPoint) -> int:
    return magnitude_digits(math.exp(min(w.log_modulus, 50.0)))


def _j_series(nu, w: LogPoint) -> MpEval:
    """J_nu(zeta) = (zeta/2)^nu sum_k (-zeta^2/4)^k / (k! Gamma(nu+k+1))."""
    order = complex(nu)
    if order.imag == 0 and order.real < 0 and order.real == int(order.real):
        # J_{-n} = (-1)^n J_n; the recurrence below would divide by zero
        n = int(-order.real)
        return _j_series(n, w).scaled((-1) ** (n % 2))
    nu = mpmath.mpc(nu)
    wm = w.mp_w()
    q = -mpmath.exp(2 * wm) / 4

    def terms():
        t = mpmath.rgamma(nu + 1)
        k = 0
        while True:
            yield t
            k += 1
            t = t * q / (k * (nu + k))

    total = sum_series(terms(), Method.SERIES, label=f"J series nu={nu}")
    return total.scaled(mpmath.exp(nu * (wm - mpmath.ln2)))


def _y_integer(n: int, w: LogPoint) -> MpEval:
    """Y_n for integer n from the logarithmic series; Y_{-n} = (-1)^n Y_n."""
    if n < 0:
        return _y_integer(-n, w).scaled((-1) ** (n % 2))
    wm = w.mp_w()
    half_log = wm - mpmath.ln2
    q = -mpmath.exp(2 * wm) / 4
    j_n = _j_series(n, w)
    # finite sum over k < n of (n-k-1)!/k! (zeta/2)^{2k-n}
    finite = mpmath.mpc(0)
    for k in range(n):
        finite += mpmath.factorial(n - k - 1) / mpmath.factorial(k) * mpmath.exp((2 * k - n) * half_log)
    euler = mpmath.euler

    def terms():
        power = 1 / mpmath.factorial(n)
        h_k = mpmath.mpf(0)
        h_nk = sum(mpmath.mpf(1) / j for j in range(1, n + 1))
        k = 0
        while True:
            yield (h_k + h_nk - 2 * euler) * power
            k += 1
            power = power * q / (k * (n + k))
            h_k += mpmath.mpf(1) / k
            h_nk += mpmath.mpf(1) / (n + k)

    log_sum = sum_series(terms(), Method.SERIES, label=f"Y log series n={n}")
    return combine(
        [
            (2 * half_log / mpmath.pi, j_n),
            (-1 / mpmath.pi, exact(finite, Method.SERIES, terms=n)),
            (-mpmath.exp(n * half_log) / mpmath.pi, log_sum),
        ],
        Method.SERIES,
    )


def _y_series(nu, w: LogPoint) -> MpEval:
    n = nearest_integer(nu, INTEGER_ORDER_TOL)
    if n is not None:
        result = _y_integer(n, w)
        offset = abs(complex(nu) - n)
        if offset:
            return result.inflate(offset * mpmath.pi * (abs(result.value) + abs(_j_series(n, w).value)))
        return result
    nu_mp = mpmath.mpc(nu)
    j_pos = _j_series(nu, w)
    j_neg = _j_series(-nu_mp, w)
    s = mpmath.sin(nu_mp * mpmath.pi)
    c = mpmath.cos(nu_mp * mpmath.pi)
    return combine([(c / s, j_pos), (-1 / s, j_neg)], Method.SERIES)


def _hankel_asymptotic(kind: HankelKind, nu, w: LogPoint) -> MpEval:
    """Hankel expansion with optimal truncation, valid in the extended sector of its kind."""
    nu = mpmath.mpc(nu)
    wm = w.mp_w()
    zeta = mpmath.exp(wm)
    sign = 1 if kind == HankelKind.FIRST else -1
    phase = sign * 1j * (zeta - nu * mpmath.pi / 2 - mpmath.pi / 4)
    prefactor = mpmath.exp((mpmath.ln2 - mpmath.log(mpmath.pi) - wm) / 2 + phase)
    x = 1 / (sign * 2j * zeta)
    eps = working_eps()
    total = mpmath.mpc(0)
    t = mpmath.mpc(1)
    k = 0
    while True:
        total += t
        nxt = t * (mpmath.mpf(1) / 2 - nu + k) * (mpmath.mpf(1) / 2 + nu + k) / (k + 1) * x
        k += 1
        if nxt == 0 or abs(nxt) < eps * abs(total):
            err = abs(nxt)
            break
        if abs(nxt) >= abs(t):
            err = abs(t)
            break
        t = nxt
    return MpEval(total * prefactor, err * abs(prefactor), k, Method.ASYMPTOTIC)


def _principal_pair(nu, w0: LogPoint) -> Tuple[MpEval, MpEval]:
    return _hankel_asymptotic(HankelKind.FIRST, nu, w0), _hankel_asymptotic(HankelKind.SECOND, nu, w0)


def mp_hankel_coeffs(m: int, nu) -> Tuple[mpmath.mpc, mpmath.mpc, mpmath.mpc, mpmath.mpc]:
    """(a, b, c, d) with H1(zeta e^{m pi i}) = a H1 + b H2 and H2(zeta e^{m pi i}) = c H1 + d H2."""
    nu_mp = mpmath.mpc(nu)
    e = mpmath.exp(nu_mp * mpmath.pi * 1j)
    u_prev = mp_u(m - 1, nu)
    return mp_u(-m, nu), -u_prev / e, e * u_prev, mp_u(m, nu)


def hankel_continuation_coeffs(m: int, nu: complex) -> Tuple[complex, complex, complex, complex]:
    """
    Coefficients that move both Hankel functions m half-turns counter-clockwise.

    Args:
        m: Number of half-turns, zeta -> zeta * e^{m pi i}
        nu: Order

    Returns:
        tuple: (a, b, c, d) as Python complex numbers
    """
    with extended_precision():
        return tuple(complex(c) for c in mp_hankel_coeffs(m, nu))


def _j(nu, w: LogPoint) -> MpEval:
    if not _is_large(nu, w):
        with extended_precision(_precision_for(w)):
            return _j_series(nu, w)
    w0, k = w.reduce()
    h1, h2 = _principal_pair(nu, w0)
    method = Method.ASYMPTOTIC if k == 0 else Method.CONTINUATION
    half = mpmath.exp(k * mpmath.mpc(nu) * mpmath.pi * 1j) / 2
    return combine([(half, h1), (half, h2)], method)


def _hankel_series(kind: HankelKind, nu, w: LogPoint) -> MpEval:
    with extended_precision(_precision_for(w)):
        j = _j_series(nu, w)
        y = _y_series(nu, w)
        sign = 1j if kind == HankelKind.FIRST else -1j
        return combine([(1, j), (sign, y)], Method.SERIES)


def _hankel(kind: HankelKind, nu, w: LogPoint) -> MpEval:
    if not _is_large(nu, w):
        return _hankel_series(kind, nu, w)
    w0, k = w.reduce()
    if k == 0:
        return _hankel_asymptotic(kind, nu, w0)
    h1, h2 = _principal_pair(nu, w0)
    a, b, c, d = mp_hankel_coeffs(k, nu)
    if kind == HankelKind.FIRST:
        return combine([(a, h1), (b, h2)], Method.CONTINUATION)
    return combine([(c, h1), (d, h2)], Method.CONTINUATION)


def _y(nu, w: LogPoint) -> MpEval:
    if not _is_large(nu, w):
        with extended_precision(_precision_for(w)):
            return _y_series(nu, w)
    h1 = _hankel(HankelKind.FIRST, nu, w)
    h2 = _hankel(HankelKind.SECOND, nu, w)
    return combine([(-0.5j, h1), (0.5j, h2)], h1.method)


def _in_sector(kind: HankelKind, w: LogPoint) -> bool:
    arg = w.arg
    if kind == HankelKind.FIRST:
        return -math.pi < arg < 2 * math.pi
    return -2 * math.pi < arg < math.pi


def bessel_j(nu: complex, w: LogPoint) -> Eval:
    """
    Bessel function of the first kind J_nu(zeta), zeta = exp(w).

    Args:
        nu: Complex order
        w: Argument as a LogPoint; the sheet matters for non-integer nu

    Returns:
        Eval: Value with error estimate
    """
    with extended_precision():
        return Eval.from_mp(_j(nu, w))


def bessel_y(nu: complex, w: LogPoint) -> Eval:
    """
    Bessel function of the second kind Y_nu(zeta), zeta = exp(w).

    Integer orders, and orders within 1e-8 of an integer, use the logarithmic
    series at the exact integer with the offset charged to the error estimate.
    """
    with extended_precision():
        return Eval.from_mp(_y(nu, w))


def hankel(kind: HankelKind, nu: complex, w: LogPoint, asymptotic: bool | None = None) -> Eval:
    """
    Hankel function H^(1) or H^(2) of order nu.

    Args:
        kind: HankelKind.FIRST or HankelKind.SECOND
        nu: Complex order
        w: Argument as a LogPoint
        asymptotic: True forces the asymptotic expansion at w itself, False forces
            J +- iY from the series, None picks by |zeta|

    Raises:
        DomainError: If the asymptotic expansion is forced outside its sector
    """
    kind = HankelKind(kind)
    with extended_precision():
        if asymptotic:
            if not _in_sector(kind, w):
                raise DomainError(f"Hankel {kind} expansion invalid at arg(zeta) = {w.arg}")
            return Eval.from_mp(_hankel_asymptotic(kind, nu, w))
        if asymptotic is False:
            return Eval.from_mp(_hankel_series(kind, nu, w))
        return Eval.from_mp(_hankel(kind, nu, w))


def hankel_order01_derivative(kind: HankelKind, w: LogPoint) -> Eval:
    """d/dzeta H_0(zeta) = -H_1(zeta)."""
    kind = HankelKind(kind)
    with extended_precision():
        return Eval.from_mp(_hankel(kind, 1, w).scaled(-1))


def bessel_derivative(family: str, nu: complex, w: LogPoint) -> Eval:
    """
    zeta-derivative of J, Y, H1 or H2 via C'_nu = (C_{nu-1} - C_{nu+1}) / 2.

    Args:
        family: One of "J", "Y", "H1", "H2"
        nu: Order
        w: Argument
    """
    kernels = {
        "J": _j,
        "Y": _y,
        "H1": lambda order, point: _hankel(HankelKind.FIRST, order, point),
        "H2": lambda order, point: _hankel(HankelKind.SECOND, order, point),
    }
    if family not in kernels:
        raise ValueError(f"unknown Bessel family {family!r}")
    kernel = kernels[family]
    with extended_precision():
        nu_mp = mpmath.mpc(nu)
        lower = kernel(nu_mp - 1, w)
        upper = kernel(nu_mp + 1, w)
        return Eval.from_mp(combine([(0.5, lower), (-0.5, upper)], lower.method))
