"""
Neumann, Gegenbauer and Schlafli polynomials and the Struve functions H and K.

These are the closed forms that terminating Lommel functions reduce to.
"""
import logging

import mpmath

from lommel.functions import bessel, lommel
from lommel.functions.core_complex import Eval, LogPoint, Method, nearest_integer
from lommel.utils.errors import PoleError
from lommel.utils.series import MpEval, combine, exact, extended_precision, sum_series

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12


def _half_power(w: LogPoint, k: int) -> mpmath.mpc:
    """(zeta/2)^k."""
    return mpmath.exp(k * (w.mp_w() - mpmath.ln2))


def neumann_o(n: int, w: LogPoint) -> Eval:
    """
    Neumann polynomial O_n(zeta).

    O_0 = 1/zeta; for n >= 1 the sum runs over m = n, n-2, ... >= 0 of
    n Gamma((n+m)/2) / (4 Gamma((n-m)/2 + 1)) (zeta/2)^{-m-1}.
    """
    if n < 0:
        raise ValueError(f"neumann_o needs n >= 0, got {n}")
    with extended_precision():
        if n == 0:
            return Eval.from_mp(exact(mpmath.exp(-w.mp_w()), Method.CLOSED_FORM, terms=1))
        total = mpmath.mpc(0)
        terms = 0
        for m in range(n % 2, n + 1, 2):
            weight = n * mpmath.gamma(mpmath.mpf(n + m) / 2) / (4 * mpmath.gamma(mpmath.mpf(n - m) / 2 + 1))
            total += weight * _half_power(w, -m - 1)
            terms += 1
        return Eval.from_mp(exact(total, Method.CLOSED_FORM, terms=terms))


def gegenbauer_a(n: int, nu: complex, w: LogPoint) -> Eval:
    """
    Gegenbauer polynomial A_{n,nu}(zeta).

    2^{nu+n} (nu+n) / zeta^{n+1} * sum_{m <= n/2} Gamma(nu+n-m) / m! (zeta/2)^{2m};
    the m = 0 term uses (nu+n) Gamma(nu+n) = Gamma(nu+n+1).

    Raises:
        PoleError: If a Gamma argument is a nonpositive integer
    """
    if n < 0:
        raise ValueError(f"gegenbauer_a needs n >= 0, got {n}")
    with extended_precision():
        nu = mpmath.mpc(nu)
        total = mpmath.mpc(0)
        for m in range(n // 2 + 1):
            arg = nu + n + 1 if m == 0 else nu + n - m
            pole = nearest_integer(complex(arg), POLE_TOL)
            if pole is not None and pole <= 0:
                raise PoleError(f"gegenbauer_a: Gamma pole at {pole} (n={n}, nu={nu})")
            gamma = mpmath.gamma(arg) if m == 0 else (nu + n) * mpmath.gamma(arg)
            total += gamma / mpmath.factorial(m) * _half_power(w, 2 * m)
        scale = mpmath.power(2, nu + n) * mpmath.exp(-(n + 1) * w.mp_w())
        return Eval.from_mp(exact(total * scale, Method.CLOSED_FORM, terms=n // 2 + 1))


def schlafli_s(n: int, w: LogPoint) -> Eval:
    """
    Schlafli polynomial S_n(zeta); S_0 = 0.

    Even n = 2p: sum_{m=1}^{p} (p+m-1)!/(p-m)! (zeta/2)^{-2m}.
    Odd n = 2p+1: sum_{m=0}^{p} (p+m)!/(p-m)! (zeta/2)^{-2m-1}.
    """
    if n < 0:
        raise ValueError(f"schlafli_s needs n >= 0, got {n}")
    with extended_precision():
        p = n // 2
        total = mpmath.mpc(0)
        if n % 2 == 0:
            for m in range(1, p + 1):
                total += mpmath.factorial(p + m - 1) / mpmath.factorial(p - m) * _half_power(w, -2 * m)
        else:
            for m in range(p + 1):
                total += mpmath.factorial(p + m) / mpmath.factorial(p - m) * _half_power(w, -2 * m - 1)
        return Eval.from_mp(exact(total, Method.CLOSED_FORM, terms=p + 1))


def _sigma(nu) -> mpmath.mpc:
    nu = mpmath.mpc(nu)
    return mpmath.power(2, 1 - nu) * mpmath.rgamma(nu + mpmath.mpf(1) / 2) / mpmath.sqrt(mpmath.pi)


def struve_sigma(nu: complex) -> complex:
    """2^{1-nu} / (sqrt(pi) Gamma(nu + 1/2)), the weight of S_{nu,nu} in H_nu."""
    with extended_precision():
        return complex(_sigma(nu))


def _struve_series(nu, w: LogPoint) -> MpEval:
    nu = mpmath.mpc(nu)
    half = mpmath.mpf(1) / 2
    q = -mpmath.exp(2 * w.mp_w()) / 4

    def terms():
        t = mpmath.rgamma(1 + half) * mpmath.rgamma(nu + 1 + half)
        k = 0
        while True:
            yield t
            t = t * q / ((k + 1 + half) * (k + nu + 1 + half))
            k += 1

    total = sum_series(terms(), Method.SERIES, label=f"Struve series nu={nu}")
    return total.scaled(mpmath.exp((nu + 1) * (w.mp_w() - mpmath.ln2)))


def _struve_h(nu, w: LogPoint) -> MpEval:
    order = complex(nu)
    n = nearest_integer(-order - 0.5, POLE_TOL)
    if n is not None and n >= 0:
        # H_{-n-1/2} = (-1)^n J_{n+1/2}
        return bessel._j(n + 0.5, w).scaled((-1) ** (n % 2))
    if not bessel._is_large(nu, w):
        with extended_precision(lommel._digits(w)):
            return _struve_series(nu, w)
    y = bessel._y(nu, w)
    s = lommel._S(nu, nu, w)
    return combine([(1, y), (_sigma(nu), s)], s.method)


def struve_h(nu: complex, w: LogPoint) -> Eval:
    """
    Struve function H_nu(zeta).

    Power series up to the Bessel switch radius, otherwise
    H = Y + sigma S_{nu,nu}; nu = -n-1/2 reduces to a Bessel function.
    """
    with extended_precision():
        return Eval.from_mp(_struve_h(nu, w))


def struve_k(nu: complex, w: LogPoint) -> Eval:
    """K_nu = H_nu - Y_nu; beyond the switch radius K_nu = sigma S_{nu,nu} directly."""
    if bessel._is_large(nu, w):
        with extended_precision():
            return Eval.from_mp(lommel._S(nu, nu, w).scaled(_sigma(nu)))
    with extended_precision(lommel._digits(w)):
        h = _struve_h(nu, w)
        y = bessel._y(nu, w)
        return Eval.from_mp(combine([(1, h), (-1, y)], h.method))


def struve_k_half_integer(p: int, w: LogPoint) -> Eval:
    """
    K_{p+1/2}(zeta) as a finite sum in 1/zeta^2.

    K_{p+1/2}(zeta) = (zeta/2)^{p-1/2} / sqrt(pi) * sum_{k=0}^{p} (2k)! / (k! (p-k)!) zeta^{-2k}

    Raises:
        ValueError: If p < 0
    """
    if p < 0:
        raise ValueError(f"struve_k_half_integer needs p >= 0, got {p}")
    with extended_precision():
        inverse_square = mpmath.exp(-2 * w.mp_w())
        total = mpmath.mpc(0)
        for k in range(p, -1, -1):
            total = total * inverse_square + mpmath.factorial(2 * k) / (
                mpmath.factorial(k) * mpmath.factorial(p - k)
            )
        prefactor = mpmath.exp((p - mpmath.mpf(1) / 2) * (w.mp_w() - mpmath.ln2)) / mpmath.sqrt(mpmath.pi)
        return Eval.from_mp(exact(prefactor * total, Method.CLOSED_FORM, terms=p + 1))
