"""Log-space arithmetic helpers.

Everything downstream works with u = log(1/x) so that x far below the
smallest double stays representable; these helpers keep sums and
differences of exponentials in log form.
"""
import numpy as np

GL32_NODES, GL32_WEIGHTS = np.polynomial.legendre.leggauss(32)
GL16_NODES, GL16_WEIGHTS = np.polynomial.legendre.leggauss(16)


def log_expm1(z):
    """log(exp(z) - 1) for z > 0, stable for both small and huge z."""
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = z > 30.0
        out = np.where(big, z + np.log1p(-np.exp(-np.where(big, z, 30.0))),
                       np.log(np.expm1(np.where(big, 1.0, z))))
    return out


def log1mexp(z):
    """log(1 - exp(-z)) for z >= 0."""
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(z > np.log(2.0), np.log1p(-np.exp(-z)), np.log(-np.expm1(-z)))


def logsubexp(a, b):
    """log(exp(a) - exp(b)); -inf when a <= b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = a + log1mexp(a - b)
    out = np.where((a <= b) | np.isnan(out), -np.inf, out)
    return out if out.ndim else float(out)


def log_power_integral(e, u0, u1):
    """log of the integral of z**(e-1) over (exp(-u1), exp(-u0)].

    ``u1`` may be +inf (lower limit 0); the result is +inf when that
    integral diverges (e <= 0).
    """
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    u0, u1 = np.broadcast_arrays(u0, u1)
    width = u1 - u0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if e > 0:
            out = -e * u0 + log1mexp(e * width) - np.log(e)
        elif e < 0:
            out = np.where(np.isinf(u1), np.inf,
                           -e * u1 + log1mexp(-e * np.where(np.isinf(u1), 1.0, width))
                           - np.log(-e))
        else:
            out = np.log(width)
    out = np.where(width <= 0.0, -np.inf, out)
    return out if out.ndim else float(out)


def as_u(x):
    """Map x in (0, 1] to u = log(1/x), validating the domain."""
    from .errors import DomainError

    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)) or np.any(x > 1.0):
        raise DomainError("x must lie in (0, 1]")
    return -np.log(x)
