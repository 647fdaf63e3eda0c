"""
Sixth-order central differences with one Richardson level, in extended precision.
"""
from typing import Callable, Dict, Tuple

import mpmath

FIRST_WEIGHTS = {-3: -1, -2: 9, -1: -45, 1: 45, 2: -9, 3: 1}
SECOND_WEIGHTS = {-3: 2, -2: -27, -1: 270, 0: -490, 1: 270, 2: -27, 3: 2}
RICHARDSON = 64


def _stencil(sample: Callable[[float], mpmath.mpc], h) -> Tuple[mpmath.mpc, mpmath.mpc]:
    d1 = sum(c * sample(k * h) for k, c in FIRST_WEIGHTS.items()) / (60 * h)
    d2 = sum(c * sample(k * h) for k, c in SECOND_WEIGHTS.items()) / (180 * h * h)
    return d1, d2


def derivatives(fn: Callable[[complex], mpmath.mpc], h: float) -> Tuple[mpmath.mpc, mpmath.mpc, mpmath.mpc]:
    """
    Value, first and second derivative of fn at offset 0.

    Args:
        fn: Function of a (real) offset from the expansion point, returning an mpmath value
        h: Base step; a second pass at h/2 feeds one Richardson extrapolation

    Returns:
        tuple: (f, f', f'')
    """
    cache: Dict[float, mpmath.mpc] = {}

    def sample(offset) -> mpmath.mpc:
        key = float(offset)
        if key not in cache:
            cache[key] = mpmath.mpc(fn(key))
        return cache[key]

    h = mpmath.mpf(h)
    coarse = _stencil(sample, h)
    fine = _stencil(sample, h / 2)
    d1 = (RICHARDSON * fine[0] - coarse[0]) / (RICHARDSON - 1)
    d2 = (RICHARDSON * fine[1] - coarse[1]) / (RICHARDSON - 1)
    return sample(0), d1, d2
