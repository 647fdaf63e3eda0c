"""
Lommel functions s_{mu,nu} and S_{mu,nu}.

S is evaluated by regime: the terminating closed form whenever mu -+ nu is an
odd positive integer, a series assembly below ASYMPTOTIC_RADIUS and the
asymptotic expansion above it. Off the principal sheet at large |zeta| the
value is carried over from the principal sheet by the continuation module.
"""
import functools
import logging
import math
from lommel.utils._compat import StrEnum
from typing import Callable, List, Optional, Tuple

import mpmath
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict

from lommel.functions import bessel
from lommel.functions.core_complex import Eval, LogPoint, Method, mp_pow, nearest_integer
from lommel.utils import config
from lommel.utils.differencing import derivatives
from lommel.utils.errors import DomainError, NonconvergenceError, NotTerminatingError, SingularParamsError
from lommel.utils.series import (
    DOUBLE_EPS,
    MpEval,
    combine,
    exact,
    extended_precision,
    magnitude_digits,
    sum_series,
    working_eps,
)

logger = logging.getLogger(__name__)

REGIME_TOL = 1e-10
BOUNDARY_BAND = 1e-6
DENOMINATOR_TOL = 1e-10
ASYMPTOTIC_RADIUS = 30.0
RESIDUAL_STEP = 1e-3


class Regime(StrEnum):
    GENERIC = "generic"
    TERMINATING = "terminating"
    SINGULAR = "singular"


class RegimeInfo(BaseModel):
    """
    Classification of a parameter pair.

    For TERMINATING, mu - nu_eff = 2p + 1; for SINGULAR, mu = nu_eff - 2p - 1.
    nu_eff is nu or -nu, whichever realizes the condition (S is even in nu).
    """

    model_config = ConfigDict(frozen=True)

    regime: Regime
    p: Optional[int] = None
    nu_eff: complex
    boundary_distance: float


def _nearest_odd(d: complex) -> Tuple[int, float]:
    odd = 2 * round((d.real - 1) / 2) + 1
    return odd, abs(d - odd)


class LommelParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: complex
    nu: complex

    def classify(self) -> RegimeInfo:
        """
        Classify (mu, nu) with tolerance 1e-10.

        TERMINATING wins whenever either mu - nu or mu + nu is an odd positive
        integer; otherwise an odd negative integer makes the pair SINGULAR.
        """
        hits = []
        distance = math.inf
        for sign in (1, -1):
            odd, dist = _nearest_odd(self.mu - sign * self.nu)
            distance = min(distance, dist)
            if dist < REGIME_TOL:
                hits.append((odd, sign * self.nu))
        positive = [hit for hit in hits if hit[0] > 0]
        if positive:
            odd, nu_eff = min(positive, key=lambda hit: hit[0])
            return RegimeInfo(regime=Regime.TERMINATING, p=(odd - 1) // 2, nu_eff=nu_eff, boundary_distance=distance)
        negative = [hit for hit in hits if hit[0] < 0]
        if negative:
            odd, nu_eff = max(negative, key=lambda hit: hit[0])
            return RegimeInfo(regime=Regime.SINGULAR, p=(-odd - 1) // 2, nu_eff=nu_eff, boundary_distance=distance)
        return RegimeInfo(regime=Regime.GENERIC, nu_eff=self.nu, boundary_distance=distance)


class TerminatingLommel(BaseModel):
    """S_{mu,nu} = zeta^{mu-1} sum_{k<=p} (-1)^k c_k zeta^{-2k} with c_{p+1} = 0."""

    model_config = ConfigDict(frozen=True)

    mu: complex
    nu: complex
    p: int
    coefficients: List[complex]

    def evaluate(self, w: LogPoint) -> Eval:
        with extended_precision():
            return Eval.from_mp(_S_closed(self.mu, self.nu, self.p, w))


class ABCPolys(BaseModel):
    """Coefficients (ascending powers of zeta) of A_n, B_n, C_n."""

    model_config = ConfigDict(frozen=True)

    n: int
    A: List[float]
    B: List[float]
    C: List[float]


def _large(w: LogPoint) -> bool:
    return w.log_modulus >= math.log(ASYMPTOTIC_RADIUS)


def _digits(w: LogPoint) -> int:
    return magnitude_digits(math.exp(min(w.log_modulus, 50.0)))


def _mp_coeffs(mu, nu, count: int) -> List[mpmath.mpc]:
    """c_0..c_{count-1} with c_k = c_{k-1} [(mu - 2k + 1)^2 - nu^2]."""
    mu, nu = mpmath.mpc(mu), mpmath.mpc(nu)
    coeffs = [mpmath.mpc(1)]
    for k in range(1, count):
        coeffs.append(coeffs[-1] * ((mu - 2 * k + 1) ** 2 - nu ** 2))
    return coeffs


def _S_closed(mu, nu, p: int, w: LogPoint) -> MpEval:
    wm = w.mp_w()
    mu_mp = mpmath.mpc(mu)
    total = mpmath.mpc(0)
    for k, c in enumerate(_mp_coeffs(mu, nu, p + 1)):
        total += (-1) ** k * c * mpmath.exp((mu_mp - 1 - 2 * k) * wm)
    return exact(total, Method.CLOSED_FORM, terms=p + 1)


def _small_s(mu, nu, w: LogPoint) -> MpEval:
    mu, nu = mpmath.mpc(mu), mpmath.mpc(nu)
    wm = w.mp_w()
    q = -mpmath.exp(2 * wm)

    def denominator(k: int) -> mpmath.mpc:
        den = (mu + 2 * k + 1) ** 2 - nu ** 2
        if abs(den) < DENOMINATOR_TOL:
            raise SingularParamsError(f"s_{{mu,nu}} undefined: mu + {2 * k + 1} = +-nu")
        return den

    def terms():
        t = mpmath.exp((mu + 1) * wm) / denominator(0)
        k = 0
        while True:
            yield t
            k += 1
            t = t * q / denominator(k)

    return sum_series(terms(), Method.SERIES, label=f"s series mu={mu} nu={nu}")


def _gamma_checked(z) -> mpmath.mpc:
    n = nearest_integer(complex(z), REGIME_TOL)
    if n is not None and n <= 0:
        raise SingularParamsError(f"Gamma pole at {n} in the Lommel constant")
    return mpmath.gamma(z)


def _K(mu, nu) -> mpmath.mpc:
    mu, nu = mpmath.mpc(mu), mpmath.mpc(nu)
    return mpmath.power(2, mu - 1) * _gamma_checked((mu - nu + 1) / 2) * _gamma_checked((mu + nu + 1) / 2)


def _S_generic_series(mu, nu, w: LogPoint, info: RegimeInfo) -> MpEval:
    with extended_precision(_digits(w)):
        s = _small_s(mu, nu, w)
        k = _K(mu, nu)
        j = bessel._j_series(nu, w)
        y = bessel._y_series(nu, w)
        a = (mpmath.mpc(mu) - nu) * mpmath.pi / 2
        result = combine([(1, s), (k * mpmath.sin(a), j), (-k * mpmath.cos(a), y)], Method.SERIES)
    if info.boundary_distance < BOUNDARY_BAND:
        logger.warning(f"mu={mu}, nu={nu} is {info.boundary_distance:.2e} from a regime boundary")
        result = result.inflate(DOUBLE_EPS * abs(result.value) / info.boundary_distance)
    return result


def _S_asymptotic(mu, nu, w: LogPoint, p: Optional[int] = None, log_derivative: bool = False) -> MpEval:
    """
    sum_k (-1)^k c_k zeta^{mu-1-2k}, truncated at p or optimally.

    With log_derivative the terms are those of zeta * S'.
    """
    if abs(w.arg) >= math.pi:
        raise DomainError(f"asymptotic expansion needs |arg zeta| < pi, got {w.arg}")
    mu, nu = mpmath.mpc(mu), mpmath.mpc(nu)
    wm = w.mp_w()
    eps = working_eps()
    cap = config.get_term_cap()

    def term(k: int, c) -> mpmath.mpc:
        exponent = mu - 1 - 2 * k
        value = (-1) ** k * c * mpmath.exp(exponent * wm)
        return value * exponent if log_derivative else value

    total = mpmath.mpc(0)
    c = mpmath.mpc(1)
    k = 0
    current = term(0, c)
    while True:
        total += current
        k += 1
        c = c * ((mu - 2 * k + 1) ** 2 - nu ** 2)
        nxt = term(k, c)
        if p is not None and k > p:
            err = abs(nxt)
            break
        if c == 0:
            err = mpmath.mpf(0)
            break
        if p is None and (abs(nxt) >= abs(current) or abs(nxt) < eps * abs(total)):
            err = abs(nxt)
            break
        if k >= cap:
            raise NonconvergenceError(f"asymptotic Lommel sum: no convergence within {cap} terms")
        current = nxt
    return MpEval(total, err, k, Method.ASYMPTOTIC)


def _S(mu, nu, w: LogPoint) -> MpEval:
    """Full dispatcher for S_{mu,nu} at any point of the Riemann surface."""
    info = LommelParams(mu=complex(mu), nu=complex(nu)).classify()
    if info.regime == Regime.TERMINATING:
        return _S_closed(mu, nu, info.p, w)
    if not _large(w):
        if info.regime == Regime.GENERIC:
            return _S_generic_series(mu, nu, w, info)
        return _S_ladder(info.nu_eff, info.p, w)
    w0, k = w.reduce()
    base = _S_asymptotic(mu, nu, w0)
    if k == 0:
        return base
    # continuation builds on this module's kernels
    from lommel.functions import continuation

    if info.regime == Regime.GENERIC:
        return continuation._continue_generic(mu, nu, -k, w0, s_value=base)
    return continuation._continue_singular(info.nu_eff, info.p, -k, w0, s_value=base)


def _S_nu_minus1(nu, w: LogPoint) -> MpEval:
    """S_{nu-1,nu} from J, Y and a digamma-weighted series; nu not in {0, -1, -2, ...}."""
    n = nearest_integer(complex(nu), REGIME_TOL)
    if n is not None and n <= 0:
        raise DomainError(f"S_{{nu-1,nu}} formula needs nu outside 0, -1, -2, ...; got {nu}")
    if _large(w):
        return _S(complex(nu) - 1, nu, w)
    if n is not None:
        nu = n
    with extended_precision(_digits(w)):
        nu_mp = mpmath.mpc(nu)
        wm = w.mp_w()
        q = -mpmath.exp(2 * wm) / 4
        two_log2 = 2 * mpmath.ln2

        def terms():
            base = mpmath.rgamma(nu_mp + 1)
            psi_nu = mpmath.psi(0, nu_mp + 1)
            psi_m = -mpmath.euler
            m = 0
            while True:
                yield base * (two_log2 + psi_nu + psi_m)
                psi_nu += 1 / (nu_mp + m + 1)
                psi_m += mpmath.mpf(1) / (m + 1)
                m += 1
                base = base * q / (m * (nu_mp + m))

        tail = sum_series(terms(), Method.SERIES, label=f"S_nu-1,nu digamma series nu={nu}")
        gamma_nu = mpmath.gamma(nu_mp)
        j = bessel._j_series(nu, w)
        y = bessel._y_series(nu, w)
        return combine(
            [
                (gamma_nu * mpmath.power(2, nu_mp - 1) * wm, j),
                (-gamma_nu * mpmath.power(2, nu_mp - 2) * mpmath.pi, y),
                (-gamma_nu * mpmath.exp(nu_mp * wm) / 4, tail),
            ],
            Method.SERIES,
        )


def _b_weight(log_term, trigamma) -> mpmath.mpc:
    return log_term ** 2 - trigamma / 2 + mpmath.pi ** 2 / 4


def _minus1_0_series(w: LogPoint, log_derivative: bool) -> MpEval:
    with extended_precision(_digits(w)):
        wm = w.mp_w()
        q = -mpmath.exp(2 * wm) / 4

        def terms():
            base = mpmath.mpf(1)
            psi = -mpmath.euler
            trigamma = mpmath.pi ** 2 / 6
            m = 0
            while True:
                weight = _b_weight(mpmath.ln2 + psi, trigamma)
                yield base * weight * (m if log_derivative else mpmath.mpf(1) / 2)
                m += 1
                psi += mpmath.mpf(1) / m
                trigamma -= mpmath.mpf(1) / (m * m)
                base = base * q / (m * m)

        tail = sum_series(terms(), Method.SERIES, label="S_-1,0 series", min_terms=2)
        j0 = bessel._j_series(0, w)
        y0 = bessel._y_series(0, w)
        if not log_derivative:
            return combine([(-wm ** 2 / 2, j0), (mpmath.pi * wm / 2, y0), (1, tail)], Method.SERIES)
        zeta = w.mp_zeta()
        j1 = bessel._j_series(1, w)
        y1 = bessel._y_series(1, w)
        return combine(
            [
                (zeta * wm ** 2 / 2, j1),
                (-wm, j0),
                (-mpmath.pi * zeta * wm / 2, y1),
                (mpmath.pi / 2, y0),
                (1, tail),
            ],
            Method.SERIES,
        )


def _k_double(m: int) -> Tuple[mpmath.mpf, mpmath.mpf]:
    return -m * mpmath.pi ** 2 * (m + 1) / 4, -m * mpmath.pi ** 2 * (m - 1) / 4


def _S_minus1_0(w: LogPoint) -> MpEval:
    if not _large(w):
        return _minus1_0_series(w, log_derivative=False)
    w0, k = w.reduce()
    base = _S_asymptotic(-1, 0, w0)
    if k == 0:
        return base
    kp, km = _k_double(-k)
    h1 = bessel._hankel(bessel.HankelKind.FIRST, 0, w0)
    h2 = bessel._hankel(bessel.HankelKind.SECOND, 0, w0)
    return combine([(1, base), (kp, h1), (km, h2)], Method.CONTINUATION)


def _zeta_dS_minus1_0(w: LogPoint) -> MpEval:
    """zeta * S'_{-1,0}(zeta)."""
    if not _large(w):
        return _minus1_0_series(w, log_derivative=True)
    w0, k = w.reduce()
    base = _S_asymptotic(-1, 0, w0, log_derivative=True)
    if k == 0:
        return base
    kp, km = _k_double(-k)
    zeta0 = w0.mp_zeta()
    h1 = bessel._hankel(bessel.HankelKind.FIRST, 1, w0)
    h2 = bessel._hankel(bessel.HankelKind.SECOND, 1, w0)
    return combine([(1, base), (-zeta0 * kp, h1), (-zeta0 * km, h2)], Method.CONTINUATION)


@functools.lru_cache(maxsize=None)
def _abc(n: int) -> Tuple[Polynomial, Polynomial, Polynomial]:
    if n == 0:
        return Polynomial([0.0]), Polynomial([1.0]), Polynomial([0.0])
    a, b, c = _abc(n - 1)
    zeta = Polynomial([0.0, 1.0])
    shift = 2 * (n - 1)
    return (
        zeta * a.deriv() + c - shift * a,
        zeta * b.deriv() - zeta ** 2 * c - shift * b,
        b + zeta * c.deriv() - shift * c,
    )


def _mp_polyval(poly: Polynomial, zeta) -> mpmath.mpc:
    return mpmath.polyval([mpmath.mpf(float(c)) for c in reversed(poly.coef)], zeta)


def _S_negative_integer_base(n: int, w: LogPoint) -> MpEval:
    """S_{-n-1,-n} = (-1)^n zeta^{-n} / (2^n n!) [A_n + B_n S_{-1,0} + C_n zeta S'_{-1,0}]."""
    if n == 0:
        return _S_minus1_0(w)
    with extended_precision(_digits(w)):
        a, b, c = _abc(n)
        zeta = w.mp_zeta()
        prefactor = (-1) ** n * mpmath.exp(-n * w.mp_w()) / (mpmath.power(2, n) * mpmath.factorial(n))
        s = _S_minus1_0(w)
        ds = _zeta_dS_minus1_0(w)
        bracket = combine(
            [
                (1, exact(_mp_polyval(a, zeta), Method.CLOSED_FORM)),
                (_mp_polyval(b, zeta), s),
                (_mp_polyval(c, zeta), ds),
            ],
            Method.SERIES,
        )
        return bracket.scaled(prefactor)


def _S_ladder(nu, p: int, w: LogPoint) -> MpEval:
    """S_{nu-2p-1,nu} from S_{nu-1,nu} plus a finite sum of powers."""
    if _large(w):
        return _S(complex(nu) - 2 * p - 1, nu, w)
    n = nearest_integer(complex(nu), REGIME_TOL)
    if n is not None and 1 <= n <= p:
        return _S_ladder(-n, p - n, w)
    with extended_precision(_digits(w)):
        if n is not None and n <= 0:
            nu = n
            base = _S_negative_integer_base(-n, w)
        else:
            base = _S_nu_minus1(nu, w)
        if p == 0:
            return base
        nu_mp = mpmath.mpc(nu)
        wm = w.mp_w()
        finite = mpmath.mpc(0)
        for m in range(p):
            den = mpmath.power(2, 2 * m + 2) * mpmath.rf(-p, m + 1) * mpmath.rf(nu_mp - p, m + 1)
            finite += (-1) ** m * mpmath.exp((nu_mp - 2 * p + 2 * m) * wm) / den
        coef = (-1) ** p / (mpmath.power(2, 2 * p) * mpmath.factorial(p) * mpmath.rf(1 - nu_mp, p))
        return combine([(1, exact(finite, Method.SERIES, terms=p)), (coef, base)], Method.SERIES)


def terminating_lommel(params: LommelParams) -> TerminatingLommel:
    """
    Coefficients of the closed form of S in the TERMINATING regime.

    The smallest admissible p is used when both mu - nu and mu + nu qualify.

    Raises:
        NotTerminatingError: If neither mu - nu nor mu + nu is an odd positive integer
    """
    info = params.classify()
    if info.regime != Regime.TERMINATING:
        raise NotTerminatingError(f"mu={params.mu}, nu={params.nu} is {info.regime}")
    with extended_precision():
        coeffs = [complex(c) for c in _mp_coeffs(params.mu, params.nu, info.p + 1)]
    return TerminatingLommel(mu=params.mu, nu=params.nu, p=info.p, coefficients=coeffs)


def lommel_s_small(params: LommelParams, w: LogPoint) -> Eval:
    """
    s_{mu,nu}(zeta) from its power series.

    Raises:
        SingularParamsError: If a series denominator (mu+2m+1)^2 - nu^2 vanishes
    """
    with extended_precision(_digits(w)):
        return Eval.from_mp(_small_s(params.mu, params.nu, w))


def lommel_K(params: LommelParams) -> complex:
    """2^{mu-1} Gamma((mu-nu+1)/2) Gamma((mu+nu+1)/2)."""
    with extended_precision():
        return complex(_K(params.mu, params.nu))


def lommel_S(params: LommelParams, w: LogPoint) -> Eval:
    """
    S_{mu,nu}(zeta) on any sheet, for every regime.

    Args:
        params: (mu, nu)
        w: Argument; the sheet is honored exactly

    Returns:
        Eval: Value, error estimate and the method that produced it
    """
    with extended_precision():
        return Eval.from_mp(_S(params.mu, params.nu, w))


def lommel_S_asymptotic(params: LommelParams, w: LogPoint, p: Optional[int] = None) -> Eval:
    """
    Asymptotic sum truncated at p (or optimally when p is None).

    Raises:
        DomainError: If |arg zeta| >= pi
    """
    with extended_precision():
        return Eval.from_mp(_S_asymptotic(params.mu, params.nu, w, p))


def lommel_recurrence_step(params: LommelParams, s_value: Eval, w: LogPoint) -> Eval:
    """S_{mu+2,nu} = zeta^{mu+1} - [(mu+1)^2 - nu^2] S_{mu,nu}."""
    with extended_precision():
        factor = (mpmath.mpc(params.mu) + 1) ** 2 - mpmath.mpc(params.nu) ** 2
        source = MpEval(mpmath.mpc(s_value.value), mpmath.mpf(s_value.abs_err_est), s_value.terms_used, Method.RECURRENCE)
        power = exact(mp_pow(w, params.mu + 1), Method.RECURRENCE)
        return Eval.from_mp(combine([(1, power), (-factor, source)], Method.RECURRENCE))


def lommel_S_derivative(params: LommelParams, w: LogPoint) -> Eval:
    """S'_{mu,nu} = (mu+nu-1) S_{mu-1,nu-1} - (nu/zeta) S_{mu,nu}."""
    with extended_precision():
        lower = _S(params.mu - 1, params.nu - 1, w)
        same = _S(params.mu, params.nu, w)
        nu = mpmath.mpc(params.nu)
        return Eval.from_mp(
            combine([(mpmath.mpc(params.mu) + nu - 1, lower), (-nu / w.mp_zeta(), same)], lower.method)
        )


def lommel_S_nu_minus1(nu: complex, w: LogPoint) -> Eval:
    """S_{nu-1,nu}(zeta); raises DomainError for nu in {0, -1, -2, ...}."""
    with extended_precision():
        return Eval.from_mp(_S_nu_minus1(nu, w))


def lommel_S_minus1_0(w: LogPoint) -> Eval:
    with extended_precision():
        return Eval.from_mp(_S_minus1_0(w))


def lommel_S_minus1_0_derivative(w: LogPoint) -> Eval:
    """S'_{-1,0}(zeta) from the closed series."""
    with extended_precision():
        return Eval.from_mp(_zeta_dS_minus1_0(w).scaled(1 / w.mp_zeta()))


def abc_polys(n: int) -> ABCPolys:
    """
    Polynomials expressing S_{-n-1,-n} through S_{-1,0} and its derivative.

    Raises:
        ValueError: If n < 0
    """
    if n < 0:
        raise ValueError(f"abc_polys needs n >= 0, got {n}")
    a, b, c = (poly.trim() for poly in _abc(n))
    return ABCPolys(n=n, A=[float(x) for x in a.coef], B=[float(x) for x in b.coef], C=[float(x) for x in c.coef])


def lommel_S_negative_integer(n: int, w: LogPoint) -> Eval:
    """S_{-n-1,-n}(zeta) for integer n >= 0."""
    if n < 0:
        raise ValueError(f"lommel_S_negative_integer needs n >= 0, got {n}")
    with extended_precision():
        return Eval.from_mp(_S_negative_integer_base(n, w))


def lommel_S_singular(nu: complex, p: int, w: LogPoint) -> Eval:
    """S_{nu-2p-1,nu}(zeta), including integer nu."""
    if p < 0:
        raise ValueError(f"lommel_S_singular needs p >= 0, got {p}")
    with extended_precision():
        return Eval.from_mp(_S_ladder(nu, p, w))


def lommel_S_via_j_minus_nu(params: LommelParams, w: LogPoint) -> Eval:
    """
    S = s + K / sin(nu pi) [cos((mu-nu)pi/2) J_{-nu} - cos((mu+nu)pi/2) J_nu].

    Raises:
        DomainError: If nu is an integer
    """
    if nearest_integer(params.nu, REGIME_TOL) is not None:
        raise DomainError(f"J_{{-nu}} form needs non-integer nu, got {params.nu}")
    with extended_precision(_digits(w)):
        mu, nu = mpmath.mpc(params.mu), mpmath.mpc(params.nu)
        s = _small_s(mu, nu, w)
        k = _K(mu, nu) / mpmath.sin(nu * mpmath.pi)
        j_neg = bessel._j_series(-nu, w)
        j_pos = bessel._j_series(nu, w)
        return Eval.from_mp(
            combine(
                [
                    (1, s),
                    (k * mpmath.cos((mu - nu) * mpmath.pi / 2), j_neg),
                    (-k * mpmath.cos((mu + nu) * mpmath.pi / 2), j_pos),
                ],
                Method.SERIES,
            )
        )


def leading_ratio(mu1: complex, mu2: complex, nu: complex, w: LogPoint) -> complex:
    """S_{mu1,nu} / S_{mu2,nu}; tends to zeta^{mu1-mu2} as |zeta| grows."""
    with extended_precision():
        top = _S(mu1, nu, w)
        bottom = _S(mu2, nu, w)
        return complex(top.value / bottom.value)


def lommel_equation_residual(
    fn: Callable[[LogPoint], mpmath.mpc], nu: complex, w: LogPoint, mu: Optional[complex] = None, h: float = RESIDUAL_STEP
) -> float:
    """
    Relative residual of y_ww + (e^{2w} - nu^2) y = e^{(mu+1)w}, derivatives in w.

    Args:
        fn: Extended-precision function of a LogPoint
        nu: Order
        w: Expansion point
        mu: Forcing exponent; None checks the homogeneous Bessel equation
        h: Base step of the difference stencil
    """
    with extended_precision():
        y, _, y_ww = derivatives(lambda dw: fn(w.offset(dw)), h)
        wm = w.mp_w()
        potential = mpmath.exp(2 * wm) * y
        nu_term = mpmath.mpc(nu) ** 2 * y
        rhs = mpmath.exp((mpmath.mpc(mu) + 1) * wm) if mu is not None else mpmath.mpc(0)
        residual = y_ww + potential - nu_term - rhs
        scale = max(abs(y_ww), abs(potential), abs(nu_term), abs(rhs), mpmath.mpf(1e-300))
        return float(abs(residual) / scale)
