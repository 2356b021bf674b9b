# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: P1 element assembly and the constrained cuboid grid."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"


def p1_triplets(const double[:, ::1] points, const cnp.int64_t[:, ::1] tris):
    """COO triplets of the P1 stiffness and mass matrices.

    Returns ``rows, cols, kvals, mvals`` of length ``9 * ntri``. Raises
    ``ValueError`` naming the first triangle with non-positive area.
    """
    cdef Py_ssize_t m = tris.shape[0]
    cdef Py_ssize_t e, a, b, pos
    cdef cnp.int64_t v[3]
    cdef double gx[3]
    cdef double gy[3]
    cdef double x0, y0, x1, y1, x2, y2, det, ar, inv

    rows_arr = np.empty(9 * m, dtype=np.int64)
    cols_arr = np.empty(9 * m, dtype=np.int64)
    k_arr = np.empty(9 * m, dtype=np.float64)
    m_arr = np.empty(9 * m, dtype=np.float64)
    cdef cnp.int64_t[::1] rows = rows_arr
    cdef cnp.int64_t[::1] cols = cols_arr
    cdef double[::1] kv = k_arr
    cdef double[::1] mv = m_arr

    for e in range(m):
        v[0] = tris[e, 0]
        v[1] = tris[e, 1]
        v[2] = tris[e, 2]
        x0 = points[v[0], 0]; y0 = points[v[0], 1]
        x1 = points[v[1], 0]; y1 = points[v[1], 1]
        x2 = points[v[2], 0]; y2 = points[v[2], 1]
        det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        if not det > 0.0:
            raise ValueError(f"triangle {e} {tuple(v)} has non-positive area {0.5 * det!r}")
        ar = 0.5 * det
        inv = 1.0 / det
        gx[0] = (y1 - y2) * inv; gy[0] = (x2 - x1) * inv
        gx[1] = (y2 - y0) * inv; gy[1] = (x0 - x2) * inv
        gx[2] = (y0 - y1) * inv; gy[2] = (x1 - x0) * inv
        pos = 9 * e
        for a in range(3):
            for b in range(3):
                rows[pos] = v[a]
                cols[pos] = v[b]
                kv[pos] = ar * (gx[a] * gx[b] + gy[a] * gy[b])
                mv[pos] = ar / 6.0 if a == b else ar / 12.0
                pos += 1
    return rows_arr, cols_arr, k_arr, m_arr


def constrained_lambda_grid(const double[::1] l3s, const double[::1] ts, double k):
    """First Maxwell eigenvalue on the ``(l3, t)`` grid of perimeter-``k`` cuboids.

    ``l1 = lo + t (hi - lo)`` between the feasibility bounds of each ``l3``.
    Returns ``(lam, l1)`` arrays of shape ``(len(l3s), len(ts))``.
    """
    cdef Py_ssize_t na = l3s.shape[0], nb = ts.shape[0], i, j
    cdef double half = 0.5 * k, l3, lo, hi, l1, pi2 = np.pi ** 2
    lam_arr = np.empty((na, nb), dtype=np.float64)
    l1_arr = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] lam = lam_arr
    cdef double[:, ::1] l1v = l1_arr
    for i in range(na):
        l3 = l3s[i]
        lo = sqrt(l3 * l3 + half) - l3
        hi = (half - l3 * l3) / (2.0 * l3)
        for j in range(nb):
            l1 = lo + ts[j] * (hi - lo)
            l1v[i, j] = l1
            lam[i, j] = pi2 * (1.0 / (l1 * l1) + (l3 + l1) * (l3 + l1) / ((half - l3 * l1) * (half - l3 * l1)))
    return lam_arr, l1_arr
