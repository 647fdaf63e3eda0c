"""
Extended-precision intermediates and the series summation loop shared by all kernels.
"""
import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

import mpmath

from lommel.utils import config
from lommel.utils.errors import NonconvergenceError

logger = logging.getLogger(__name__)

DOUBLE_EPS = 2.0 ** -53
DOUBLE_MAX = 1.7976931348623157e308
# Units of rounding charged per composite arithmetic stage.
ROUNDING_UNITS = 4


@dataclass(frozen=True)
class MpEval:
    """A value held in extended precision together with its bookkeeping."""

    value: mpmath.mpc
    abs_err: mpmath.mpf
    terms: int
    method: str

    def scaled(self, factor) -> "MpEval":
        factor = mpmath.mpc(factor)
        return MpEval(self.value * factor, self.abs_err * abs(factor), self.terms, self.method)

    def with_method(self, method: str) -> "MpEval":
        return MpEval(self.value, self.abs_err, self.terms, method)

    def inflate(self, extra) -> "MpEval":
        return MpEval(self.value, self.abs_err + mpmath.mpf(extra), self.terms, self.method)


def to_complex(value: mpmath.mpc) -> complex:
    """
    Convert an extended-precision value to a Python complex.

    Raises:
        OverflowError: If either component leaves the double range
    """
    if abs(value.real) > DOUBLE_MAX or abs(value.imag) > DOUBLE_MAX:
        raise OverflowError(f"value of magnitude {mpmath.nstr(abs(value), 5)} exceeds double range")
    return complex(value)


def to_float(value) -> float:
    """Convert a nonnegative error estimate to float, saturating at the double maximum."""
    value = mpmath.mpf(value)
    if value > DOUBLE_MAX:
        return DOUBLE_MAX
    return float(value)


def magnitude_digits(modulus) -> int:
    """Decimal digits lost to cancellation when summing a series whose terms peak near e^|zeta|."""
    modulus = float(min(mpmath.mpf(modulus), mpmath.mpf(1e4)))
    return int(modulus * 0.4343) + 5


@contextmanager
def extended_precision(extra_digits: int = 0):
    """Raise mpmath's working precision, never lowering what an outer caller already set."""
    target = max(mpmath.mp.dps, config.get_work_dps() + int(extra_digits))
    with mpmath.workdps(target):
        yield


def working_eps() -> mpmath.mpf:
    return mpmath.mpf(10) ** (-mpmath.mp.dps)


def sum_series(terms: Iterable, method: str, label: str = "series", min_terms: int = 0) -> MpEval:
    """
    Sum a series term by term with the three-small-terms stopping rule.

    Summation stops once three consecutive terms each have magnitude below
    tol * |partial sum|. Finite iterables are summed in full.

    Args:
        terms: Iterable of mpmath numbers, usually a generator
        method: Method tag recorded on the result
        label: Name used in log and error messages
        min_terms: Terms that are always summed before the stopping rule applies

    Returns:
        MpEval: The sum with an error estimate from the last term and the
            cancellation at working precision

    Raises:
        NonconvergenceError: If the term cap is reached before the rule fires
    """
    cap = config.get_term_cap()
    tol = config.get_series_tolerance()
    total = mpmath.mpc(0)
    max_abs = mpmath.mpf(0)
    last_abs = mpmath.mpf(0)
    small_run = 0
    count = 0
    iterator: Iterator = iter(terms)
    for term in iterator:
        count += 1
        total += term
        last_abs = abs(term)
        if last_abs > max_abs:
            max_abs = last_abs
        if count > min_terms and last_abs < tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 3:
            break
        if count >= cap:
            raise NonconvergenceError(f"{label}: no convergence within {cap} terms")
    logger.debug(f"{label}: summed {count} terms, last |term| = {mpmath.nstr(last_abs, 3)}")
    err = 3 * last_abs + max_abs * working_eps()
    return MpEval(total, err, count, method)


def combine(parts: Sequence[Tuple[object, MpEval]], method: str) -> MpEval:
    """
    Form a linear combination sum(coef * part) and propagate the error estimates.

    The estimate is the coefficient-weighted sum of component estimates plus
    ROUNDING_UNITS double-precision units of the largest contribution.
    """
    value = mpmath.mpc(0)
    err = mpmath.mpf(0)
    biggest = mpmath.mpf(0)
    terms = 0
    for coef, part in parts:
        coef = mpmath.mpc(coef)
        contribution = coef * part.value
        value += contribution
        err += abs(coef) * part.abs_err
        biggest = max(biggest, abs(contribution))
        terms += part.terms
    err += ROUNDING_UNITS * DOUBLE_EPS * biggest
    return MpEval(value, err, terms, method)


def exact(value, method: str, terms: int = 0) -> MpEval:
    """Wrap a value known to working precision (closed forms, finite sums)."""
    value = mpmath.mpc(value)
    return MpEval(value, ROUNDING_UNITS * DOUBLE_EPS * abs(value), terms, method)
