"""Riccati-Bessel function ``psi_1(z) = z j_1(z)`` and the first zero of its derivative."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["ZeroResult", "psi1", "psi1_prime", "psi1_second", "find_a11_prime", "SERIES_SWITCH"]

SERIES_SWITCH = 1e-2


@dataclass(frozen=True)
class ZeroResult:
    value: float
    residual: float
    iterations: int


def psi1(z: float) -> float:
    """``sin z / z - cos z``; Taylor series ``z²/3 - z⁴/30 + z⁶/840 - z⁸/45360`` near 0."""
    z = float(z)
    if abs(z) < SERIES_SWITCH:
        z2 = z * z
        return z2 * (1.0 / 3.0 - z2 * (1.0 / 30.0 - z2 * (1.0 / 840.0 - z2 / 45360.0)))
    return math.sin(z) / z - math.cos(z)


def psi1_prime(z: float) -> float:
    """``cos z / z - sin z / z² + sin z``; series ``2z/3 - 2z³/15 + z⁵/140 - z⁷/5670`` near 0."""
    z = float(z)
    if abs(z) < SERIES_SWITCH:
        z2 = z * z
        return z * (2.0 / 3.0 - z2 * (2.0 / 15.0 - z2 * (1.0 / 140.0 - z2 / 5670.0)))
    s, c = math.sin(z), math.cos(z)
    return c / z - s / (z * z) + s


def psi1_second(z: float) -> float:
    # psi1'' = -psi1 + 2 psi1 / z**2 from the Riccati-Bessel ODE with l = 1
    z = float(z)
    if abs(z) < SERIES_SWITCH:
        z2 = z * z
        return 2.0 / 3.0 - z2 * (2.0 / 5.0 - z2 * (1.0 / 28.0 - z2 / 810.0))
    return psi1(z) * (2.0 / (z * z) - 1.0)


def find_a11_prime(
    lo: float = 2.0,
    hi: float = 3.0,
    bisect_width: float = 1e-6,
    tol: float = 1e-12,
    max_newton: int = 50,
) -> ZeroResult:
    """First positive zero of ``psi1'``, i.e. ``a'_{1,1} ≈ 2.7437``.

    Bisection narrows ``[lo, hi]`` to ``bisect_width``; Newton polishes until
    ``|psi1'(a)| < tol``. A Newton step that leaves the bracket is replaced
    by a bisection step.
    """
    flo, fhi = psi1_prime(lo), psi1_prime(hi)
    if flo == 0.0:
        return ZeroResult(lo, 0.0, 0)
    if fhi == 0.0:
        return ZeroResult(hi, 0.0, 0)
    if (flo > 0) == (fhi > 0):
        raise ArithmeticError(f"psi1' does not change sign on [{lo}, {hi}]")

    iterations = 0
    while hi - lo > bisect_width:
        mid = 0.5 * (lo + hi)
        fmid = psi1_prime(mid)
        iterations += 1
        if fmid == 0.0:
            return ZeroResult(mid, 0.0, iterations)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid

    x = 0.5 * (lo + hi)
    fx = psi1_prime(x)
    for _ in range(max_newton):
        if abs(fx) < tol:
            break
        iterations += 1
        step = fx / psi1_second(x)
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        f_new = psi1_prime(x_new)
        if (f_new > 0) == (flo > 0):
            lo, flo = x_new, f_new
        else:
            hi = x_new
        x, fx = x_new, f_new
    else:
        if abs(fx) >= tol:
            raise ArithmeticError(f"Newton did not reach |psi1'| < {tol}; last residual {abs(fx)}")
    return ZeroResult(x, abs(fx), iterations)
