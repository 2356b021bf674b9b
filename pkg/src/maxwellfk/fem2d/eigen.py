"""First Dirichlet and first positive Neumann eigenvalues of the Laplacian.

Both use shift-invert block subspace iteration at shift 0 with a sparse LU
factorization. The Neumann kernel (constants) is removed by explicit
M-orthogonal deflation rather than by a shift, so a tiny but positive
first eigenvalue is never mistaken for the zero mode.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .assemble import assemble
from .mesh import TriMesh

__all__ = [
    "ConvergenceError",
    "EigenResult",
    "subspace_iteration",
    "dirichlet_eig1",
    "neumann_eig1",
    "richardson_extrapolate",
    "observed_order",
]

RESIDUAL_TOL = 1e-10
BLOCK_SIZE = 4
MAX_ITER = 1000
# an eigenvector this close (in angle) to the constants is the Neumann zero mode
ZERO_MODE_ANGLE = 1e-6


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: list[float]
    residuals: list[float]
    mesh_size: float
    dof_count: int
    iterations: int = 0
    eigenvectors: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def value(self) -> float:
        return self.eigenvalues[0]

    def to_dict(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "residuals": list(self.residuals),
            "dof_count": self.dof_count,
            "mesh_size": self.mesh_size,
            "iterations": self.iterations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _factor(A: sp.spmatrix):
    return splu(
        sp.csc_matrix(A),
        permc_spec="MMD_AT_PLUS_A",
        diag_pivot_thresh=0.0,
        options={"SymmetricMode": True},
    )


def subspace_iteration(
    K: sp.spmatrix,
    M: sp.spmatrix,
    solve,
    nev: int = 1,
    block: int = BLOCK_SIZE,
    tol: float = RESIDUAL_TOL,
    maxiter: int = MAX_ITER,
    seed: int = 0,
    project=None,
):
    """Smallest ``nev`` eigenpairs of ``K x = λ M x``.

    ``solve(b)`` applies ``K⁻¹`` (on the deflated space if ``project`` is
    given). Each sweep is ``Y = solve(M X)`` followed by Rayleigh-Ritz on
    ``span(Y)``. Converged when ``‖K x - λ M x‖ / ‖x‖_M < tol`` for the first
    ``nev`` Ritz pairs.
    """
    n = K.shape[0]
    block = min(max(block, nev), n)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, block))
    if project is not None:
        X = project(X)
    res = np.full(nev, np.inf)
    for it in range(1, maxiter + 1):
        Y = solve(M @ X)
        if project is not None:
            Y = project(Y)
        A = Y.T @ (K @ Y)
        B = Y.T @ (M @ Y)
        A = 0.5 * (A + A.T)
        B = 0.5 * (B + B.T)
        theta, Q = la.eigh(A, B)
        X = Y @ Q
        KX = K @ X[:, :nev]
        MX = M @ X[:, :nev]
        mnorm = np.sqrt(np.einsum("ij,ij->j", X[:, :nev], MX))
        res = np.linalg.norm(KX - MX * theta[:nev], axis=0) / mnorm
        if np.all(res < tol):
            return theta[:nev], X[:, :nev] / mnorm, res, it
    raise ConvergenceError(f"subspace iteration did not converge in {maxiter} sweeps; residuals {res.tolist()}")


def dirichlet_eig1(mesh: TriMesh, nev: int = 1, seed: int = 0, matrices=None) -> EigenResult:
    """Smallest eigenvalue with zero boundary values (interior vertices only)."""
    interior = mesh.interior
    if interior.size == 0:
        raise ValueError("mesh has no interior vertex")
    K, M = assemble(mesh) if matrices is None else matrices
    Kii = K[interior][:, interior].tocsc()
    Mii = M[interior][:, interior].tocsc()
    try:
        lu = _factor(Kii)
    except RuntimeError as exc:
        raise ConvergenceError(f"factorization failed: {exc}") from None
    theta, X, res, it = subspace_iteration(Kii, Mii, lu.solve, nev=min(nev, interior.size), seed=seed)
    full = np.zeros((mesh.n_vertices, X.shape[1]))
    full[interior] = X
    return EigenResult(
        eigenvalues=[float(t) for t in theta],
        residuals=[float(r) for r in res],
        mesh_size=mesh.mesh_size,
        dof_count=int(interior.size),
        iterations=it,
        eigenvectors=full,
    )


def neumann_eig1(mesh: TriMesh, nev: int = 1, seed: int = 0, matrices=None) -> EigenResult:
    """Smallest nonzero eigenvalue with natural boundary conditions.

    The constant mode is deflated: iterates are kept M-orthogonal to ``1``,
    and ``K`` is inverted on that complement by pinning one vertex and
    projecting the solution.
    """
    K, M = assemble(mesh) if matrices is None else matrices
    n = K.shape[0]
    if n < 3:
        raise ValueError("mesh too small for a Neumann eigenvalue")
    m1 = np.asarray(M @ np.ones(n)).ravel()
    total = float(m1.sum())

    def project(X: np.ndarray) -> np.ndarray:
        return X - np.outer(np.ones(n), (m1 @ X) / total)

    keep = np.arange(1, n)
    try:
        lu = _factor(K[keep][:, keep])
    except RuntimeError as exc:
        raise ConvergenceError(f"factorization failed: {exc}") from None

    def solve(B: np.ndarray) -> np.ndarray:
        # B is orthogonal to constants, so the dropped equation holds automatically
        out = np.zeros_like(B)
        out[keep] = lu.solve(np.ascontiguousarray(B[keep]))
        return out

    theta, X, res, it = subspace_iteration(
        K, M, solve, nev=min(nev, n - 1), block=BLOCK_SIZE, seed=seed, project=project
    )
    ones = np.ones(n) / math.sqrt(n)
    for j in range(X.shape[1]):
        v = X[:, j] / np.linalg.norm(X[:, j])
        angle = math.acos(min(1.0, abs(float(ones @ v))))
        if angle < ZERO_MODE_ANGLE:
            raise ConvergenceError("deflation failed: returned eigenvector is the constant mode")
    return EigenResult(
        eigenvalues=[float(t) for t in theta],
        residuals=[float(r) for r in res],
        mesh_size=mesh.mesh_size,
        dof_count=int(n),
        iterations=it,
        eigenvectors=X,
    )


def richardson_extrapolate(coarse: EigenResult, fine: EigenResult, rtol: float = 1e-9) -> float:
    """``(4·fine - coarse) / 3`` for a nested pair with ``h_fine = h_coarse / 2``."""
    if coarse is fine or (
        coarse.mesh_size == fine.mesh_size and coarse.eigenvalues == fine.eigenvalues
    ):
        return fine.value
    if not math.isclose(fine.mesh_size, 0.5 * coarse.mesh_size, rel_tol=rtol):
        raise ValueError(
            f"mismatched meshes: fine mesh_size {fine.mesh_size!r} is not half of {coarse.mesh_size!r}"
        )
    return (4.0 * fine.value - coarse.value) / 3.0


def observed_order(coarse: float, fine: float, finer: float) -> float:
    """``log2((coarse - fine) / (fine - finer))`` from three nested levels."""
    return math.log2((coarse - fine) / (fine - finer))
