"""Perimeter-constrained cuboids and the degenerate volume/perimeter families.

Under ``|∂Ω| = k`` a cuboid is fixed by ``(l1, l3)``; ``l2`` is eliminated
from ``2(l1 l2 + l1 l3 + l2 l3) = k``. The ordering ``l3 <= l2 <= l1`` is
equivalent to

    sqrt(l3² + k/2) - l3 <= l1 <= (k/2 - l3²) / (2 l3),   0 < l3 <= sqrt(k/6).

On that region the first Maxwell eigenvalue is strictly above ``4π²/k`` and
approaches it along ``l1 = sqrt(l3² + k/2) - l3``, ``l3 -> 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .closed_form import PI2, cuboid_lambda1
from .geometry import CuboidDims, _positive

__all__ = [
    "InfeasibleError",
    "PerimeterConstraint",
    "FeasiblePoint",
    "GridResult",
    "l1_bounds",
    "is_feasible",
    "ell2_from_constraint",
    "completed_cuboid",
    "lambda1_constrained",
    "young_lower_bound",
    "minimizing_sequence",
    "grid_points",
    "grid_infimum",
    "grid_search",
    "volume_family_vanishing",
    "volume_family_blowup",
    "perimeter_family_blowup",
]

# relative slack for points computed exactly on a feasibility bound
_BOUND_RTOL = 1e-12


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class PerimeterConstraint:
    k: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", _positive("k", self.k))

    @property
    def infimum(self) -> float:
        return 4.0 * PI2 / self.k

    @property
    def l3_max(self) -> float:
        return math.sqrt(self.k / 6.0)


def l1_bounds(l3: float, k: float) -> tuple[float, float]:
    """Feasible interval for ``l1`` at a given ``l3``."""
    half = 0.5 * k
    return math.sqrt(l3 * l3 + half) - l3, (half - l3 * l3) / (2.0 * l3)


def _check(l1: float, l3: float, k: float, rtol: float) -> str | None:
    if not (l3 > 0.0):
        return f"l3 = {l3!r} must be positive"
    l3_max = math.sqrt(k / 6.0)
    if l3 > l3_max * (1.0 + rtol):
        return f"l3 = {l3!r} exceeds sqrt(k/6) = {l3_max!r}"
    lo, hi = l1_bounds(l3, k)
    if l1 < lo * (1.0 - rtol):
        return f"l1 = {l1!r} below lower bound sqrt(l3^2 + k/2) - l3 = {lo!r}"
    if l1 > hi * (1.0 + rtol):
        return f"l1 = {l1!r} above upper bound (k/2 - l3^2)/(2 l3) = {hi!r}"
    return None


def is_feasible(l1: float, l3: float, k: float, rtol: float = 0.0) -> bool:
    return _check(float(l1), float(l3), float(k), rtol) is None


@dataclass(frozen=True)
class FeasiblePoint:
    """``(l1, l3)`` inside the feasibility region for surface area ``k``."""

    l1: float
    l3: float
    k: float

    def __post_init__(self) -> None:
        k = _positive("k", self.k)
        l1, l3 = float(self.l1), float(self.l3)
        reason = _check(l1, l3, k, _BOUND_RTOL)
        if reason is not None:
            raise InfeasibleError(f"infeasible point for k = {k!r}: {reason}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "l1", l1)
        object.__setattr__(self, "l3", l3)


def ell2_from_constraint(p: FeasiblePoint) -> float:
    return (0.5 * p.k - p.l3 * p.l1) / (p.l3 + p.l1)


def completed_cuboid(p: FeasiblePoint) -> CuboidDims:
    return CuboidDims(p.l1, ell2_from_constraint(p), p.l3)


def lambda1_constrained(p: FeasiblePoint) -> float:
    """``π²(1/l1² + (l3 + l1)² / (k/2 - l3 l1)²)``."""
    s = 0.5 * p.k - p.l3 * p.l1
    return PI2 * (1.0 / p.l1**2 + (p.l3 + p.l1) ** 2 / s**2)


def young_lower_bound(p: FeasiblePoint) -> float:
    """Intermediate bound ``2π²(l3 + l1) / (l1 (k/2 - l3 l1))`` from ``a² + b² >= 2ab``."""
    return 2.0 * PI2 * (p.l3 + p.l1) / (p.l1 * (0.5 * p.k - p.l3 * p.l1))


def minimizing_sequence(k: float, l3: float) -> tuple[FeasiblePoint, float]:
    """Point with ``l1`` on its lower bound; its eigenvalue tends to ``4π²/k`` as ``l3 -> 0``."""
    k = _positive("k", k)
    l3 = float(l3)
    if not 0.0 < l3 <= math.sqrt(k / 6.0):
        raise InfeasibleError(f"l3 = {l3!r} outside (0, sqrt(k/6)]")
    p = FeasiblePoint(l1_bounds(l3, k)[0], l3, k)
    return p, lambda1_constrained(p)


@dataclass(frozen=True)
class GridResult:
    k: float
    resolution: int
    lambda1: float
    l1: float
    l2: float
    l3: float
    l3_floor: float
    n_points: int
    min_margin: float

    @property
    def infimum(self) -> float:
        return 4.0 * PI2 / self.k

    @property
    def gap(self) -> float:
        return self.lambda1 - self.infimum


def grid_points(k: float, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Nested ``(l3, t)`` grids.

    ``l3 = sqrt(k/6) · 2**(-8 j / resolution)`` down to the first value at or
    below ``sqrt(k/6) · 0.2 / resolution`` (``10⁻³ sqrt(k/6)`` at resolution
    200); ``t`` is ``resolution + 1`` equispaced points in ``[0, 1]``. Doubling
    the resolution yields a superset of both grids, bit for bit.
    """
    if resolution < 10:
        raise ValueError(f"resolution must be >= 10, got {resolution}")
    top = math.sqrt(k / 6.0)
    n_l3 = math.ceil(resolution * math.log2(5.0 * resolution) / 8.0)
    j = np.arange(n_l3 + 1, dtype=np.float64)
    l3 = top * np.exp2(-(8.0 * j) / resolution)
    t = np.arange(resolution + 1, dtype=np.float64) / resolution
    return l3, t


def grid_search(k: float, resolution: int) -> tuple[GridResult, np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate the whole grid. Returns the summary plus ``(l3, l1, lam)`` arrays."""
    k = _positive("k", k)
    resolution = int(resolution)
    l3, t = grid_points(k, resolution)
    lam, l1 = kernels.constrained_lambda_grid(l3, t, k)
    # ties broken by smallest l3 (last row), then smallest t
    flat = lam[::-1].ravel()
    idx = int(np.argmin(flat))
    i = lam.shape[0] - 1 - idx // lam.shape[1]
    jj = idx % lam.shape[1]
    best_l1, best_l3 = float(l1[i, jj]), float(l3[i])
    best_l2 = (0.5 * k - best_l3 * best_l1) / (best_l3 + best_l1)
    result = GridResult(
        k=k,
        resolution=resolution,
        lambda1=float(lam[i, jj]),
        l1=best_l1,
        l2=best_l2,
        l3=best_l3,
        l3_floor=float(l3[-1]),
        n_points=int(lam.size),
        min_margin=float(lam.min() - 4.0 * PI2 / k),
    )
    return result, np.broadcast_to(l3[:, None], lam.shape), l1, lam


def grid_infimum(k: float, resolution: int) -> float:
    """Minimum of the constrained eigenvalue on the nested grid (strictly above ``4π²/k``)."""
    return grid_search(k, resolution)[0].lambda1


def volume_family_vanishing(ell: float) -> tuple[CuboidDims, float]:
    """Unit-volume cuboid ``(ell^-1/2, ell^-1/2, ell)`` with eigenvalue ``2π² ell``."""
    ell = float(ell)
    if not 0.0 < ell <= 1.0:
        raise ValueError(f"ell must lie in (0, 1], got {ell!r}")
    side = ell**-0.5
    c = CuboidDims(side, side, ell)
    return c, cuboid_lambda1(c)


def volume_family_blowup(ell: float) -> tuple[CuboidDims, float]:
    """Unit-volume cuboid ``(ell^-2, ell, ell)`` with eigenvalue ``π²(ell⁴ + 1/ell²)``."""
    ell = float(ell)
    if not 0.0 < ell <= 1.0:
        raise ValueError(f"ell must lie in (0, 1], got {ell!r}")
    c = CuboidDims(ell**-2, ell, ell)
    return c, cuboid_lambda1(c)


def perimeter_family_blowup(ell: float, k: float = 2.0) -> tuple[CuboidDims, float]:
    """Cuboid ``((1 - ell²)/(2 ell), ell, ell)`` of surface area 2, rescaled to area ``k``.

    ``ell`` is the pre-scaling parameter and must lie in ``(0, 1/sqrt(3)]``.
    """
    ell = float(ell)
    k = _positive("k", k)
    if not 0.0 < ell <= 1.0 / math.sqrt(3.0) * (1.0 + _BOUND_RTOL):
        raise ValueError(f"ell must lie in (0, 1/sqrt(3)], got {ell!r}")
    alpha = math.sqrt(0.5 * k)
    l1 = (1.0 - ell * ell) / (2.0 * ell)
    c = CuboidDims(alpha * l1, alpha * ell, alpha * ell)
    return c, cuboid_lambda1(c)
