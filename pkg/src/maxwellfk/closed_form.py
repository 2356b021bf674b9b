"""Exact first Maxwell eigenvalues for cuboids, balls and cubes."""
from __future__ import annotations

import math
from functools import lru_cache

from .geometry import CuboidDims, _positive
from .specfun import find_a11_prime

__all__ = [
    "a11_prime",
    "cuboid_lambda1",
    "ball_lambda1_radius",
    "ball_lambda1_surface",
    "ball_lambda1_volume",
    "cube_lambda1_surface",
    "cube_lambda1_volume",
    "scaling_law",
]

PI2 = math.pi**2


@lru_cache(maxsize=None)
def a11_prime() -> float:
    """First positive zero of the derivative of ``psi_1``, computed once."""
    return find_a11_prime().value


def cuboid_lambda1(c: CuboidDims) -> float:
    """``π²(1/l1² + 1/l2²)``; the shortest side does not enter."""
    return PI2 * (1.0 / c.l1**2 + 1.0 / c.l2**2)


def ball_lambda1_radius(radius: float) -> float:
    radius = _positive("radius", radius)
    return (a11_prime() / radius) ** 2


def ball_lambda1_surface(k: float) -> float:
    """Ball of surface area ``k``: radius ``sqrt(k / 4π)``, eigenvalue ``4π a'² / k``."""
    k = _positive("k", k)
    return 4.0 * math.pi * a11_prime() ** 2 / k


def ball_lambda1_volume(k: float) -> float:
    """Ball of volume ``k``: ``a'² (16π² / 9k²)^(1/3)``."""
    k = _positive("k", k)
    return a11_prime() ** 2 * (16.0 * PI2 / (9.0 * k * k)) ** (1.0 / 3.0)


def cube_lambda1_surface(k: float) -> float:
    """Cube of surface area ``k`` (side ``sqrt(k/6)``): ``12π²/k``."""
    k = _positive("k", k)
    return 12.0 * PI2 / k


def cube_lambda1_volume(k: float) -> float:
    k = _positive("k", k)
    return 2.0 * PI2 / k ** (2.0 / 3.0)


def scaling_law(lambda1: float, alpha: float) -> float:
    """Eigenvalue of the domain dilated by ``alpha``."""
    alpha = _positive("alpha", alpha)
    return lambda1 / alpha**2
