"""Structured, geometry-aligned triangulations of rectilinear polygons."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..geometry import DumbbellParams, RectilinearPolygon, build_dumbbell

__all__ = [
    "DEFAULT_DOF_CAP",
    "DofBudgetExceeded",
    "Box",
    "TriMesh",
    "dof_cap",
    "graded_nodes",
    "mesh_from_grids",
    "mesh_rectilinear",
    "mesh_dumbbell",
    "dumbbell_regions",
    "refine",
]

DEFAULT_DOF_CAP = 2_000_000
GRADING_SLOPE = 0.3


class DofBudgetExceeded(RuntimeError):
    """The requested mesh would exceed the vertex budget."""


def dof_cap() -> int:
    """Vertex budget; ``MAXWELLFK_DOF_CAP`` overrides the default of 2·10⁶."""
    value = os.environ.get("MAXWELLFK_DOF_CAP")
    return int(value) if value else DEFAULT_DOF_CAP


@dataclass(frozen=True)
class Box:
    x0: float
    x1: float
    y0: float
    y1: float

    def contains(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x > self.x0) & (x < self.x1) & (y > self.y0) & (y < self.y1)


@dataclass(frozen=True, eq=False)
class TriMesh:
    """P1 triangulation with per-vertex boundary flags and per-triangle region tags.

    ``xs`` and ``ys`` are the 1D grids the mesh was cut from; ``refine``
    bisects them to produce a nested mesh.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_flags: np.ndarray
    region_tags: np.ndarray
    polygon: RectilinearPolygon
    xs: np.ndarray
    ys: np.ndarray
    regions: Mapping[str, Box] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for arr in (self.vertices, self.triangles, self.boundary_flags, self.region_tags, self.xs, self.ys):
            arr.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def interior(self) -> np.ndarray:
        return np.flatnonzero(~self.boundary_flags)

    @property
    def triangle_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        d1, d2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d2[:, 0] * d1[:, 1])

    @property
    def diameters(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        edges = np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]], axis=1)
        return np.sqrt((edges**2).sum(axis=2)).max(axis=1)

    @property
    def mesh_size(self) -> float:
        """Largest triangle diameter."""
        return float(self.diameters.max())


def _cells_from_phi(length: float, phi_total: float, inverse, min_cells: int) -> np.ndarray:
    n = max(min_cells, math.ceil(phi_total - 1e-9), 1)
    targets = np.arange(n + 1) * (phi_total / n)
    x = np.array([inverse(v) for v in targets])
    x[0], x[-1] = 0.0, length
    return x


def graded_nodes(
    breakpoints: Sequence[float],
    target_h: float,
    fine: tuple[float, float] | None = None,
    fine_h: float | None = None,
    slope: float = GRADING_SLOPE,
    min_cells: int = 1,
) -> np.ndarray:
    """1D nodes containing every breakpoint.

    The local size is ``min(target_h, fine_h + slope · dist(x, fine))``, with
    ``fine`` an interval whose ends are breakpoints. Each breakpoint interval
    gets at least ``min_cells`` cells (``max(min_cells, ...)`` only inside
    ``fine``, otherwise 1).
    """
    bp = np.unique(np.asarray(breakpoints, dtype=float))
    if fine is None or fine_h is None or fine_h >= target_h:
        fine, fine_h = None, target_h
    d_star = (target_h - fine_h) / slope

    def phi(d: float) -> float:
        # cells needed between distance 0 and d from the fine zone
        if d <= d_star:
            return math.log1p(slope * d / fine_h) / slope
        return math.log1p(slope * d_star / fine_h) / slope + (d - d_star) / target_h

    def phi_inv(v: float) -> float:
        v_star = math.log1p(slope * d_star / fine_h) / slope
        if v <= v_star:
            return math.expm1(slope * v) * fine_h / slope
        return d_star + (v - v_star) * target_h

    if fine is not None:
        bp = np.unique(np.concatenate([bp, fine]))
    out = [bp[:1]]
    for a, b in zip(bp[:-1], bp[1:]):
        length = b - a
        if fine is None or (a >= fine[0] and b <= fine[1]):
            h, lo = (target_h, 1) if fine is None else (fine_h, min_cells)
            n = max(math.ceil(length / h - 1e-9), lo)
            inner = a + length * np.arange(1, n) / n
        elif b <= fine[0]:
            # size shrinks toward b
            d0, d1 = fine[0] - b, fine[0] - a
            base = phi(d0)
            x = _cells_from_phi(length, phi(d1) - base, lambda v: phi_inv(base + v) - d0, 1)
            inner = (b - x)[::-1][1:-1]
        else:
            d0, d1 = a - fine[1], b - fine[1]
            base = phi(d0)
            x = _cells_from_phi(length, phi(d1) - base, lambda v: phi_inv(base + v) - d0, 1)
            inner = (a + x)[1:-1]
        out.append(inner)
        out.append(np.array([b]))
    return np.concatenate(out)


def mesh_from_grids(
    poly: RectilinearPolygon,
    xs: np.ndarray,
    ys: np.ndarray,
    regions: Mapping[str, Box] | None = None,
    cap: int | None = None,
) -> TriMesh:
    """Triangulate the cells of the tensor grid ``xs × ys`` lying inside ``poly``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    cap = dof_cap() if cap is None else cap
    nx, ny = len(xs) - 1, len(ys) - 1
    if len(xs) * len(ys) > 4 * cap:
        raise DofBudgetExceeded(
            f"grid of {len(xs)}x{len(ys)} nodes exceeds the dof cap {cap}; use the trial-function bound instead"
        )
    xc = 0.5 * (xs[:-1] + xs[1:])
    yc = 0.5 * (ys[:-1] + ys[1:])
    inside = _inside_cells(poly, xc, yc)
    node_used = np.zeros((nx + 1, ny + 1), dtype=bool)
    ii, jj = np.nonzero(inside)
    for di in (0, 1):
        for dj in (0, 1):
            node_used[ii + di, jj + dj] = True
    n_used = int(node_used.sum())
    if n_used > cap:
        raise DofBudgetExceeded(
            f"mesh would have {n_used} vertices, above the dof cap {cap}; use the trial-function bound instead"
        )
    index = -np.ones((nx + 1, ny + 1), dtype=np.int64)
    ui, uj = np.nonzero(node_used)
    index[ui, uj] = np.arange(n_used)
    vertices = np.column_stack([xs[ui], ys[uj]])

    a = index[ii, jj]
    b = index[ii + 1, jj]
    c = index[ii + 1, jj + 1]
    d = index[ii, jj + 1]
    triangles = np.empty((2 * len(ii), 3), dtype=np.int64)
    triangles[0::2] = np.column_stack([a, b, c])
    triangles[1::2] = np.column_stack([a, c, d])

    # a cell edge is on the boundary when the cell across it is outside
    padded = np.zeros((nx + 2, ny + 2), dtype=bool)
    padded[1:-1, 1:-1] = inside
    flags = np.zeros((nx + 1, ny + 1), dtype=bool)
    left = inside & ~padded[:-2, 1:-1]
    right = inside & ~padded[2:, 1:-1]
    below = inside & ~padded[1:-1, :-2]
    above = inside & ~padded[1:-1, 2:]
    for mask, (di0, dj0), (di1, dj1) in (
        (left, (0, 0), (0, 1)),
        (right, (1, 0), (1, 1)),
        (below, (0, 0), (1, 0)),
        (above, (0, 1), (1, 1)),
    ):
        mi, mj = np.nonzero(mask)
        flags[mi + di0, mj + dj0] = True
        flags[mi + di1, mj + dj1] = True
    boundary = flags[ui, uj]

    regions = dict(regions or {})
    tags = np.full(len(triangles), "other", dtype=object)
    if regions:
        cen = vertices[triangles].mean(axis=1)
        unset = np.ones(len(triangles), dtype=bool)
        for name, box in regions.items():
            hit = unset & box.contains(cen[:, 0], cen[:, 1])
            tags[hit] = name
            unset &= ~hit
    return TriMesh(
        vertices=vertices,
        triangles=triangles,
        boundary_flags=boundary,
        region_tags=tags,
        polygon=poly,
        xs=xs.copy(),
        ys=ys.copy(),
        regions=regions,
    )


def _inside_cells(poly: RectilinearPolygon, xc: np.ndarray, yc: np.ndarray) -> np.ndarray:
    """Even-odd test of every cell centre against the polygon's vertical edges."""
    v = poly.array
    X, Y = np.meshgrid(xc, yc, indexing="ij")
    inside = np.zeros(X.shape, dtype=bool)
    for (x0, y0), (x1, y1) in zip(v, np.roll(v, -1, axis=0)):
        if x0 != x1:
            continue
        lo, hi = min(y0, y1), max(y0, y1)
        inside ^= (Y > lo) & (Y < hi) & (X < x0)
    return inside


def mesh_rectilinear(
    poly: RectilinearPolygon,
    target_h: float,
    channel_min_layers: int = 2,
    channel: Box | None = None,
    regions: Mapping[str, Box] | None = None,
    cap: int | None = None,
) -> TriMesh:
    """Geometry-aligned structured mesh, each grid cell split into two triangles.

    Cells are at most ``target_h`` wide. Inside ``channel`` (if given) they
    are at most ``min(channel height, channel width) / channel_min_layers``
    in both directions, with geometric grading away from it.
    """
    if not target_h > 0:
        raise ValueError(f"target_h must be positive, got {target_h!r}")
    if channel_min_layers < 2:
        raise ValueError(f"channel_min_layers must be >= 2, got {channel_min_layers}")
    cap = dof_cap() if cap is None else cap
    if channel is None:
        xs = graded_nodes(poly.xs, target_h)
        ys = graded_nodes(poly.ys, target_h)
    else:
        width = min(channel.x1 - channel.x0, channel.y1 - channel.y0)
        fine_h = min(target_h, width / channel_min_layers)
        # rough size check before building the 1D grids
        est = (
            ((poly.xs[-1] - poly.xs[0]) / target_h + (channel.x1 - channel.x0) / fine_h + 1)
            * ((poly.ys[-1] - poly.ys[0]) / target_h + (channel.y1 - channel.y0) / fine_h + 1)
        )
        if est > 4 * cap:
            raise DofBudgetExceeded(
                f"estimated {est:.3g} grid nodes exceed the dof cap {cap}; use the trial-function bound instead"
            )
        xs = graded_nodes(poly.xs, target_h, (channel.x0, channel.x1), fine_h, min_cells=channel_min_layers)
        ys = graded_nodes(poly.ys, target_h, (channel.y0, channel.y1), fine_h, min_cells=channel_min_layers)
    return mesh_from_grids(poly, xs, ys, regions, cap)


def dumbbell_regions(p: DumbbellParams, alpha: float = 1.0) -> dict[str, Box]:
    d, e = p.delta, p.eta
    return {
        "G": Box(-alpha, 0.0, alpha * (e - 1) / 2, alpha * (e + 1) / 2),
        "channel": Box(0.0, alpha * d, 0.0, alpha * e),
        "G_delta": Box(alpha * d, alpha * 2 * d, alpha * (e - d) / 2, alpha * (e + d) / 2),
    }


def mesh_dumbbell(
    p: DumbbellParams,
    target_h: float,
    channel_min_layers: int = 2,
    alpha: float = 1.0,
    cap: int | None = None,
) -> TriMesh:
    """Mesh of the dumbbell (optionally dilated by ``alpha``) refined in the channel."""
    from ..geometry import scale

    poly = scale(build_dumbbell(p), alpha)
    regions = dumbbell_regions(p, alpha)
    return mesh_rectilinear(poly, target_h, channel_min_layers, regions["channel"], regions, cap)


def refine(mesh: TriMesh, cap: int | None = None) -> TriMesh:
    """Uniform refinement: bisect every grid interval. The result is nested in ``mesh``."""

    def bisect(g: np.ndarray) -> np.ndarray:
        out = np.empty(2 * len(g) - 1)
        out[0::2] = g
        out[1::2] = 0.5 * (g[:-1] + g[1:])
        return out

    return mesh_from_grids(mesh.polygon, bisect(mesh.xs), bisect(mesh.ys), mesh.regions, cap)
