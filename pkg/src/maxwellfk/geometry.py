"""Domain families: cuboids, rectilinear dumbbell polygons and product domains.

All lengths are dimensionless doubles. Every type here is an immutable value
and every function is pure.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CuboidDims",
    "DumbbellParams",
    "RectilinearPolygon",
    "ProductDomain",
    "ScheduleParams",
    "GeometryError",
    "build_dumbbell",
    "unit_square",
    "rectangle",
    "area",
    "perimeter",
    "product_surface_area",
    "normalization_factor",
    "scale",
    "polygon_to_json",
    "polygon_from_json",
]


class GeometryError(ValueError):
    """Raised when a domain is constructed from degenerate parameters."""


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise GeometryError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class CuboidDims:
    """Side lengths of a rectangular box, stored so that ``l1 >= l2 >= l3``.

    The constructor sorts whatever it receives, so ``CuboidDims(1, 3, 2)``
    has ``l1 == 3``.
    """

    l1: float
    l2: float
    l3: float

    def __post_init__(self) -> None:
        sides = sorted(
            (_positive("l1", self.l1), _positive("l2", self.l2), _positive("l3", self.l3)),
            reverse=True,
        )
        object.__setattr__(self, "l1", sides[0])
        object.__setattr__(self, "l2", sides[1])
        object.__setattr__(self, "l3", sides[2])

    @property
    def volume(self) -> float:
        return self.l1 * self.l2 * self.l3

    @property
    def surface_area(self) -> float:
        return 2.0 * (self.l1 * self.l2 + self.l1 * self.l3 + self.l2 * self.l3)

    def scaled(self, alpha: float) -> "CuboidDims":
        alpha = _positive("alpha", alpha)
        return CuboidDims(alpha * self.l1, alpha * self.l2, alpha * self.l3)


@dataclass(frozen=True)
class DumbbellParams:
    """Channel length ``delta`` and channel width ``eta``, ``0 < eta < delta < 1``."""

    delta: float
    eta: float

    def __post_init__(self) -> None:
        delta = _positive("delta", self.delta)
        eta = _positive("eta", self.eta)
        if not delta < 1.0:
            raise GeometryError(f"delta must be < 1, got {delta!r}")
        if not eta < delta:
            raise GeometryError(f"eta must be < delta, got eta={eta!r}, delta={delta!r}")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "eta", eta)


@dataclass(frozen=True)
class ScheduleParams:
    """Power-law schedule ``delta = h**(-p)``, ``eta = delta**(3 + beta)``.

    ``p`` must exceed ``2 / beta`` so that ``delta(h) = o(h**(-2/beta))``.
    """

    beta: float
    h: float
    delta_exponent: float

    def __post_init__(self) -> None:
        beta = _positive("beta", self.beta)
        h = _positive("h", self.h)
        p = _positive("delta_exponent", self.delta_exponent)
        if not p > 2.0 / beta:
            raise GeometryError(
                f"delta_exponent must exceed 2/beta = {2.0 / beta!r}, got {p!r}"
            )
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "delta_exponent", p)


def _segments_intersect(p1, p2, q1, q2) -> bool:
    """Closed-segment intersection test for axis-aligned segments."""
    ax0, ax1 = sorted((p1[0], p2[0]))
    ay0, ay1 = sorted((p1[1], p2[1]))
    bx0, bx1 = sorted((q1[0], q2[0]))
    by0, by1 = sorted((q1[1], q2[1]))
    return ax0 <= bx1 and bx0 <= ax1 and ay0 <= by1 and by0 <= ay1


@dataclass(frozen=True)
class RectilinearPolygon:
    """Simple counterclockwise polygon whose edges are all axis-aligned.

    Consecutive edges must alternate between horizontal and vertical, which
    rules out zero-length and collinear consecutive edges.
    """

    vertices: tuple[tuple[float, float], ...]
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        n = len(verts)
        if n < 4 or n % 2:
            raise GeometryError(f"a rectilinear polygon needs an even number >= 4 of vertices, got {n}")
        kinds = []
        for i in range(n):
            (x0, y0), (x1, y1) = verts[i], verts[(i + 1) % n]
            if x0 == x1 and y0 != y1:
                kinds.append("v")
            elif y0 == y1 and x0 != x1:
                kinds.append("h")
            else:
                raise GeometryError(f"edge {i} from {verts[i]} to {verts[(i + 1) % n]} is not axis-aligned")
        for i in range(n):
            if kinds[i] == kinds[(i + 1) % n]:
                raise GeometryError(f"edges {i} and {(i + 1) % n} are collinear")
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                if _segments_intersect(verts[i], verts[(i + 1) % n], verts[j], verts[(j + 1) % n]):
                    raise GeometryError(f"edges {i} and {j} intersect; polygon is not simple")
        arr = np.array(verts, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_array", arr)
        if _signed_area(arr) <= 0.0:
            raise GeometryError("polygon must be oriented counterclockwise with positive area")

    @property
    def array(self) -> np.ndarray:
        """Read-only ``(n, 2)`` vertex array."""
        return self._array

    @property
    def xs(self) -> np.ndarray:
        """Sorted distinct x-coordinates of the vertices."""
        return np.unique(self._array[:, 0])

    @property
    def ys(self) -> np.ndarray:
        """Sorted distinct y-coordinates of the vertices."""
        return np.unique(self._array[:, 1])

    def contains(self, x: float, y: float) -> bool:
        """Strict interior test by ray casting (points on the boundary are ambiguous)."""
        inside = False
        v = self._array
        n = len(v)
        for i in range(n):
            x0, y0 = v[i]
            x1, y1 = v[(i + 1) % n]
            if (y0 > y) != (y1 > y):
                xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
                if x < xc:
                    inside = not inside
        return inside


@dataclass(frozen=True)
class ProductDomain:
    """Cylinder ``base x (0, height)``."""

    base: RectilinearPolygon
    height: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "height", _positive("height", self.height))


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def rectangle(width: float, height: float, origin: Sequence[float] = (0.0, 0.0)) -> RectilinearPolygon:
    x0, y0 = float(origin[0]), float(origin[1])
    w = _positive("width", width)
    hh = _positive("height", height)
    return RectilinearPolygon(((x0, y0), (x0 + w, y0), (x0 + w, y0 + hh), (x0, y0 + hh)))


def unit_square() -> RectilinearPolygon:
    return rectangle(1.0, 1.0)


def build_dumbbell(p: DumbbellParams) -> RectilinearPolygon:
    """Boundary of ``G ∪ S ∪ G_delta``: unit square, channel, square of side ``delta``.

    The loop starts at ``(-1, (eta - 1)/2)`` and runs counterclockwise. The
    channel ``[0, delta] x (0, eta)`` is centred on the common axis
    ``y = eta/2`` of both squares.
    """
    d, e = p.delta, p.eta
    lo_big, hi_big = (e - 1.0) / 2.0, (e + 1.0) / 2.0
    lo_small, hi_small = (e - d) / 2.0, (e + d) / 2.0
    return RectilinearPolygon(
        (
            (-1.0, lo_big),
            (0.0, lo_big),
            (0.0, 0.0),
            (d, 0.0),
            (d, lo_small),
            (2.0 * d, lo_small),
            (2.0 * d, hi_small),
            (d, hi_small),
            (d, e),
            (0.0, e),
            (0.0, hi_big),
            (-1.0, hi_big),
        )
    )


def area(poly: RectilinearPolygon) -> float:
    """Shoelace area."""
    return _signed_area(poly.array)


def perimeter(poly: RectilinearPolygon) -> float:
    v = poly.array
    return float(np.sum(np.abs(np.roll(v, -1, axis=0) - v)))


def product_surface_area(d: ProductDomain) -> float:
    """Surface area of ``base x (0, h)``: two caps plus the lateral wall."""
    return 2.0 * area(d.base) + d.height * perimeter(d.base)


def normalization_factor(p: DumbbellParams, h: float) -> float:
    """Scale ``L`` with ``|∂(L·ω_{δ,η} × (0,h))| = 1``.

    Positive root of ``B L² + 2 A L = 1`` with ``A = h(2 + 3δ - η)`` and
    ``B = 2(1 + δ(δ + η))``, written as ``1 / (sqrt(A² + B) + A)`` so that no
    cancellation occurs for large ``h``.
    """
    h = _positive("h", h)
    a = h * (2.0 + 3.0 * p.delta - p.eta)
    b = 2.0 * (1.0 + p.delta * (p.delta + p.eta))
    return 1.0 / (math.sqrt(a * a + b) + a)


def scale(poly: RectilinearPolygon, alpha: float) -> RectilinearPolygon:
    alpha = _positive("alpha", alpha)
    if alpha == 1.0:
        return poly
    return RectilinearPolygon(tuple((alpha * x, alpha * y) for x, y in poly.vertices))


def polygon_to_json(poly: RectilinearPolygon) -> str:
    """Serialize as a JSON array of ``[x, y]`` pairs (full double precision)."""
    return json.dumps([[x, y] for x, y in poly.vertices])


def polygon_from_json(text: str | Iterable) -> RectilinearPolygon:
    data = json.loads(text) if isinstance(text, str) else text
    return RectilinearPolygon(tuple((float(x), float(y)) for x, y in data))
