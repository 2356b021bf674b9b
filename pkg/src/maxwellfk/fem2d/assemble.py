"""P1 stiffness and mass matrices."""
from __future__ import annotations

import scipy.sparse as sp

from .. import kernels
from .mesh import TriMesh

__all__ = ["DegenerateTriangle", "assemble"]


class DegenerateTriangle(ValueError):
    pass


def assemble(mesh: TriMesh) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Return ``(K, M)`` with ``K_ij = ∫ ∇φ_i·∇φ_j`` and ``M_ij = ∫ φ_i φ_j``.

    Duplicate COO entries are summed in a fixed order, so the result does not
    depend on the kernel backend beyond floating-point rounding of each
    element matrix.
    """
    try:
        rows, cols, kv, mv = kernels.p1_triplets(mesh.vertices, mesh.triangles)
    except ValueError as exc:
        raise DegenerateTriangle(str(exc)) from None
    n = mesh.n_vertices
    K = sp.coo_matrix((kv, (rows, cols)), shape=(n, n)).tocsr()
    M = sp.coo_matrix((mv, (rows, cols)), shape=(n, n)).tocsr()
    K.sum_duplicates()
    M.sum_duplicates()
    return K, M
