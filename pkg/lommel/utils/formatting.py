"""
This module converts between command-line text, Python numbers and the JSON payloads the CLI prints.
"""
import json
import math
from enum import Enum
from typing import Any, List, Tuple


def parse_complex(text: str) -> complex:
    """
    Parse the "RE[,IM]" flag syntax; IM defaults to 0.
    """
    if text is None or text.strip() == '':
        raise ValueError("empty complex value")
    parts = [part.strip() for part in text.split(',')]
    if len(parts) > 2:
        raise ValueError(f"expected RE[,IM], got {text!r}")
    try:
        real = float(parts[0])
        imag = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError as e:
        raise ValueError(f"not a number in {text!r}") from e
    return complex(real, imag)


def parse_forcing(text: str) -> List[Tuple[complex, complex]]:
    """
    Parse "mu1:sigma1;mu2:sigma2" into (mu, sigma) pairs. An empty string is an empty list.
    """
    if text is None or text.strip() == '':
        return []
    pairs = []
    for chunk in text.split(';'):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk.count(':') != 1:
            raise ValueError(f"forcing term must be mu:sigma, got {chunk!r}")
        mu, sigma = chunk.split(':')
        pairs.append((parse_complex(mu), parse_complex(sigma)))
    return pairs


def format_float(value: float) -> str:
    """
    17 significant digits, enough to round-trip any double.
    """
    value = float(value)
    if math.isnan(value):
        return 'NaN'
    if math.isinf(value):
        return 'Infinity' if value > 0 else '-Infinity'
    return format(value, '.17g')


def to_json(payload: Any) -> str:
    """
    Serialize a payload with every float at 17 significant digits and complex numbers as [re, im].
    """
    if payload is None or isinstance(payload, bool):
        return json.dumps(payload)
    if isinstance(payload, Enum):
        return json.dumps(payload.value)
    if isinstance(payload, int):
        return str(payload)
    if isinstance(payload, float):
        return format_float(payload)
    if isinstance(payload, complex):
        return f"[{format_float(payload.real)}, {format_float(payload.imag)}]"
    if isinstance(payload, str):
        return json.dumps(payload)
    if isinstance(payload, dict):
        items = (f"{json.dumps(str(key))}: {to_json(value)}" for key, value in payload.items())
        return '{' + ', '.join(items) + '}'
    if isinstance(payload, (list, tuple)):
        return '[' + ', '.join(to_json(item) for item in payload) + ']'
    if hasattr(payload, 'item'):
        # numpy scalars
        return to_json(payload.item())
    raise TypeError(f"cannot serialize {type(payload).__name__}")


def format_coefficient(value: complex) -> str:
    """
    Compact human-readable number for solution strings.
    """
    value = complex(value)
    if abs(value.imag) <= 1e-14 * max(1.0, abs(value.real)):
        return format(value.real, '.12g')
    return f"({format(value.real, '.12g')}{format(value.imag, '+.12g')}j)"
