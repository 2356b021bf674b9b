"""Pure numpy implementations of the compiled kernels in ``_kernels.pyx``.

Same signatures and outputs; used when the extension is not built or when
``MAXWELLFK_PURE_PYTHON=1`` is set.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def p1_triplets(points: np.ndarray, tris: np.ndarray):
    points = np.ascontiguousarray(points, dtype=np.float64)
    tris = np.ascontiguousarray(tris, dtype=np.int64)
    p0, p1, p2 = points[tris[:, 0]], points[tris[:, 1]], points[tris[:, 2]]
    det = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - (p2[:, 0] - p0[:, 0]) * (p1[:, 1] - p0[:, 1])
    bad = np.flatnonzero(~(det > 0.0))
    if bad.size:
        e = int(bad[0])
        raise ValueError(f"triangle {e} {tuple(int(i) for i in tris[e])} has non-positive area {0.5 * det[e]!r}")
    ar = 0.5 * det
    inv = 1.0 / det
    # barycentric gradients, one row per local vertex
    gx = np.stack([(p1[:, 1] - p2[:, 1]), (p2[:, 1] - p0[:, 1]), (p0[:, 1] - p1[:, 1])], axis=1) * inv[:, None]
    gy = np.stack([(p2[:, 0] - p1[:, 0]), (p0[:, 0] - p2[:, 0]), (p1[:, 0] - p0[:, 0])], axis=1) * inv[:, None]
    kloc = ar[:, None, None] * (gx[:, :, None] * gx[:, None, :] + gy[:, :, None] * gy[:, None, :])
    mloc = ar[:, None, None] * ((np.ones((3, 3)) + np.eye(3)) / 12.0)[None, :, :]
    rows = np.repeat(tris, 3, axis=1).ravel()
    cols = np.tile(tris, (1, 3)).ravel()
    return rows, cols, kloc.ravel(), mloc.ravel()


def constrained_lambda_grid(l3s: np.ndarray, ts: np.ndarray, k: float):
    l3 = np.asarray(l3s, dtype=np.float64)[:, None]
    t = np.asarray(ts, dtype=np.float64)[None, :]
    half = 0.5 * k
    lo = np.sqrt(l3 * l3 + half) - l3
    hi = (half - l3 * l3) / (2.0 * l3)
    l1 = lo + t * (hi - lo)
    lam = np.pi**2 * (1.0 / (l1 * l1) + (l3 + l1) * (l3 + l1) / ((half - l3 * l1) * (half - l3 * l1)))
    return lam, l1
