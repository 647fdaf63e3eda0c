"""
Complex gamma-family functions and the branch-resolved argument representation.

Every multi-valued power or logarithm in the library is taken through a
LogPoint: zeta = exp(w) with w unrestricted, so a value on any sheet of the
logarithm is addressed explicitly.
"""
import cmath
import logging
import math
from lommel.utils._compat import StrEnum
from typing import Optional, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, Field
from scipy import special

from lommel.utils.errors import DomainError, PoleError
from lommel.utils.series import DOUBLE_EPS, MpEval, to_complex, to_float

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12
# log of the largest finite double
MAX_LOG = 709.782712893384


class Method(StrEnum):
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    CLOSED_FORM = "closed_form"
    RECURRENCE = "recurrence"
    CONTINUATION = "continuation"


class LogPoint(BaseModel):
    """
    A point zeta = exp(w) on the Riemann surface of the logarithm.

    w is stored as base + i*turns*pi. Branch shifts only touch the integer
    `turns`, so composing shifts is exact.
    """

    model_config = ConfigDict(frozen=True)

    base: complex
    turns: int = 0

    @classmethod
    def from_w(cls, w: complex) -> "LogPoint":
        return cls(base=complex(w))

    @classmethod
    def from_zeta(cls, zeta: complex) -> "LogPoint":
        """Principal logarithm of a nonzero complex number."""
        zeta = complex(zeta)
        if zeta == 0:
            raise DomainError("zeta = 0 has no logarithm")
        return cls(base=cmath.log(zeta))

    @property
    def w(self) -> complex:
        return complex(self.base.real, self.base.imag + self.turns * math.pi)

    @property
    def log_modulus(self) -> float:
        return self.base.real

    @property
    def arg(self) -> float:
        return self.base.imag + self.turns * math.pi

    @property
    def zeta(self) -> complex:
        if self.base.real > MAX_LOG:
            raise OverflowError(f"|zeta| = exp({self.base.real}) exceeds double range")
        return cmath.exp(self.base) * (-1) ** (self.turns % 2)

    def mp_w(self) -> mpmath.mpc:
        return mpmath.mpc(self.base.real, self.base.imag) + mpmath.mpc(0, self.turns) * mpmath.pi

    def mp_zeta(self) -> mpmath.mpc:
        value = mpmath.exp(mpmath.mpc(self.base.real, self.base.imag))
        return -value if self.turns % 2 else value

    def shifted(self, m: int) -> "LogPoint":
        return LogPoint(base=self.base, turns=self.turns - m)

    def offset(self, dw: complex) -> "LogPoint":
        return LogPoint(base=self.base + dw, turns=self.turns)

    def reduce(self) -> Tuple["LogPoint", int]:
        """
        Split off whole half-turns so the remainder lies in the right half-plane.

        Returns:
            tuple: (w0, k) with w = w0 + i*k*pi and Im(w0) in (-pi/2, pi/2]
        """
        k = math.ceil(self.arg / math.pi - 0.5)
        return LogPoint(base=self.base, turns=self.turns - k), k


class Eval(BaseModel):
    """A function value with its error estimate, term count and evaluation method."""

    model_config = ConfigDict(frozen=True)

    value: complex
    abs_err_est: float = Field(ge=0)
    terms_used: int = Field(ge=0)
    method: Method

    @classmethod
    def from_mp(cls, result: MpEval) -> "Eval":
        value = to_complex(result.value)
        err = to_float(result.abs_err) + DOUBLE_EPS * abs(value)
        return cls(value=value, abs_err_est=err, terms_used=result.terms, method=Method(result.method))

    def to_json_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "abs_err_est": self.abs_err_est,
            "terms": self.terms_used,
            "method": str(self.method),
        }


def nearest_integer(z, tol: float) -> Optional[int]:
    """Return the integer within `tol` of z (complex allowed), or None."""
    z = complex(z)
    if abs(z.imag) >= tol:
        return None
    n = round(z.real)
    if abs(z.real - n) < tol:
        return int(n)
    return None


def _check_pole(z: complex, name: str) -> None:
    n = nearest_integer(z, POLE_TOL)
    if n is not None and n <= 0:
        raise PoleError(f"{name}: pole at z = {n}")


def log_gamma(z: complex) -> complex:
    """
    Principal-branch log Gamma(z).

    Args:
        z: Complex argument

    Returns:
        complex: log Gamma(z), continuous off the negative real axis

    Raises:
        PoleError: If z is within 1e-12 of a nonpositive integer
    """
    z = complex(z)
    _check_pole(z, "log_gamma")
    return complex(special.loggamma(z))


def polygamma01(order: int, z: complex) -> complex:
    """
    Digamma (order 0) or trigamma (order 1) at a complex argument.

    Raises:
        PoleError: At nonpositive integers
        ValueError: If order is not 0 or 1
    """
    z = complex(z)
    _check_pole(z, "polygamma01")
    if order == 0:
        return complex(special.psi(z))
    if order == 1:
        return complex(mpmath.psi(1, z))
    raise ValueError(f"polygamma01 supports orders 0 and 1, got {order}")


def pochhammer(a: complex, n: int) -> complex:
    """Rising factorial (a)_n = a(a+1)...(a+n-1); (a)_0 = 1."""
    if n < 0:
        raise ValueError(f"pochhammer needs n >= 0, got {n}")
    result = complex(1)
    for k in range(n):
        result *= a + k
    return result


def logpoint_pow(w: LogPoint, mu: complex) -> complex:
    """
    zeta^mu = exp(mu * w) on the sheet addressed by w.

    Raises:
        OverflowError: If the result is not representable as a double
    """
    mu = complex(mu)
    exponent = mu * w.w
    if exponent.real > MAX_LOG:
        raise OverflowError(f"zeta^mu overflows: Re(mu*w) = {exponent.real}")
    if mu.imag == 0 and mu.real == int(mu.real) and w.base.imag == 0:
        k = int(mu.real)
        # integer power of a real base; the sheet only contributes a sign
        return complex(math.exp(w.base.real) ** k * (-1) ** ((w.turns * k) % 2))
    return cmath.exp(exponent)


def mp_pow(w: LogPoint, mu) -> mpmath.mpc:
    """Extended-precision zeta^mu on the sheet of w."""
    return mpmath.exp(mpmath.mpc(mu) * w.mp_w())


def branch_shift(w: LogPoint, m: int) -> LogPoint:
    """Realize zeta -> zeta*e^{-m pi i}, i.e. w -> w - i*m*pi."""
    return w.shifted(m)
