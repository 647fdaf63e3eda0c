"""
Runtime configuration read from the environment (optionally via a .env file).
"""
import logging
import os

import dotenv

dotenv.load_dotenv()

DEFAULT_TERM_CAP = 500
DEFAULT_WORK_DPS = 32
DEFAULT_SERIES_TOL = 1e-16
DEFAULT_LOG_LEVEL = "WARNING"


def _positive_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def get_term_cap() -> int:
    """
    Get the maximum number of series terms before giving up.

    Returns:
        int: The value of LOMMEL_TERM_CAP, or 500 when unset

    Raises:
        ValueError: If LOMMEL_TERM_CAP is not a positive integer
    """
    return _positive_int("LOMMEL_TERM_CAP", DEFAULT_TERM_CAP)


def get_work_dps() -> int:
    """
    Get the base decimal precision of the internal extended-precision mode.

    Returns:
        int: The value of LOMMEL_WORK_DPS, or 32 when unset
    """
    return _positive_int("LOMMEL_WORK_DPS", DEFAULT_WORK_DPS)


def get_series_tolerance() -> float:
    """
    Get the relative tolerance used by the series stopping rule.

    Returns:
        float: The value of LOMMEL_SERIES_TOL, or 1e-16 when unset

    Raises:
        ValueError: If the value is not a positive float
    """
    raw = os.environ.get("LOMMEL_SERIES_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_SERIES_TOL
    try:
        value = float(raw)
    except ValueError as e:
        raise ValueError(f"LOMMEL_SERIES_TOL must be a float, got {raw!r}") from e
    if not value > 0:
        raise ValueError(f"LOMMEL_SERIES_TOL must be positive, got {value}")
    return value


def get_log_level() -> int:
    """
    Get the logging level for command-line runs.

    Returns:
        int: A logging level constant
    """
    name = os.getenv("LOMMEL_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValueError(f"LOMMEL_LOG_LEVEL is not a logging level: {name}")
    return level


def get_settings() -> dict:
    """
    Get every setting in one mapping, for logging and reports.

    Returns:
        dict: Setting names mapped to their effective values
    """
    return {
        "term_cap": get_term_cap(),
        "work_dps": get_work_dps(),
        "series_tol": get_series_tolerance(),
        "log_level": logging.getLevelName(get_log_level()),
    }
