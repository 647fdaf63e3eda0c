"""
Exception hierarchy shared by every function family.
"""


class LommelError(Exception):
    """Base class for all library errors. `code` is the stable CLI error tag."""

    code = "lommel_error"


class PoleError(LommelError, ValueError):
    code = "pole"


class NonconvergenceError(LommelError, ArithmeticError):
    code = "nonconvergence"


class DomainError(LommelError, ValueError):
    code = "domain"


class SingularParamsError(LommelError, ValueError):
    """Raised when mu +- nu hits an odd negative integer and s_{mu,nu} or K is undefined."""

    code = "singular_params"


class NotTerminatingError(LommelError, ValueError):
    code = "not_terminating"


class DegenerateError(LommelError, ArithmeticError):
    code = "degenerate"


class HypothesisError(LommelError, ValueError):
    code = "hypothesis"


def error_code(exc: BaseException) -> str:
    """
    Map an exception to the tag used in CLI error payloads.

    Args:
        exc: The exception raised by a library call

    Returns:
        str: A short machine-readable code
    """
    if isinstance(exc, LommelError):
        return exc.code
    if isinstance(exc, OverflowError):
        return "overflow"
    return "internal"
