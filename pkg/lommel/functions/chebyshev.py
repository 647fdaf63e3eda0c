"""Chebyshev polynomials of the second kind at x = cos(nu*pi)."""
import mpmath

from lommel.functions.core_complex import nearest_integer

INTEGER_TOL = 1e-10
SMALL_SINE = 1e-4


def chebyshev_u_poly(n, x):
    """
    Chebyshev polynomial of the second kind U_n(x) for any integer n.

    Args:
        n: Order; negative orders follow U_{-n} = -U_{n-2}
        x: Number or numpy array of evaluation points

    Returns:
        U_n(x) with the shape and type of x
    """
    if n == -1:
        return 0 * x
    if n < -1:
        return -chebyshev_u_poly(-n - 2, x)
    u_prev, u = 0 * x, 0 * x + 1
    for _ in range(n):
        u_prev, u = u, 2 * x * u - u_prev
    return u


def mp_u(j: int, nu) -> mpmath.mpc:
    """U_j(cos(nu*pi)) in extended precision, including the integer-nu limit."""
    k = nearest_integer(complex(nu), INTEGER_TOL)
    if k is not None:
        # U_{m-1}(cos k pi) = m (-1)^{k(m-1)}
        return mpmath.mpc((j + 1) * (-1) ** ((k * j) % 2))
    nu = mpmath.mpc(nu)
    x = mpmath.cos(nu * mpmath.pi)
    closed = {-3: -2 * x, -2: mpmath.mpc(-1), -1: mpmath.mpc(0), 0: mpmath.mpc(1), 1: 2 * x}
    if j in closed:
        return closed[j]
    s = mpmath.sin(nu * mpmath.pi)
    if abs(s) < SMALL_SINE:
        return chebyshev_u_poly(j, x)
    return mpmath.sin((j + 1) * nu * mpmath.pi) / s
