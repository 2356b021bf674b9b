"""Product domains ``ω × (0, h)``, the dumbbell trial function and the decay driver.

For a product domain the first Maxwell eigenvalue is
``min(μ_D(ω), μ_N(ω) + π²/h²)`` with ``μ_D`` the first Dirichlet and ``μ_N``
the first positive Neumann eigenvalue of the base. On the perimeter-normalized
dumbbell ``L(h)·ω_{δ,η} × (0, h)`` the Neumann branch, bounded through an
explicit mean-zero trial function, tends to zero.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np
from scipy.special import jn_zeros

from .closed_form import PI2
from .fem2d import (
    DofBudgetExceeded,
    TriMesh,
    assemble,
    dirichlet_eig1,
    mesh_dumbbell,
    neumann_eig1,
    refine,
    richardson_extrapolate,
)
from .geometry import (
    DumbbellParams,
    GeometryError,
    ProductDomain,
    ScheduleParams,
    area,
    build_dumbbell,
    normalization_factor,
    product_surface_area,
    scale,
)

__all__ = [
    "ProductEigenvalue",
    "TrialFunctionReport",
    "DumbbellRun",
    "MisalignedMesh",
    "FEM_MIN_ETA",
    "BESSEL_J0_ZERO",
    "product_lambda1",
    "trial_coefficient",
    "trial_function",
    "trial_bound",
    "trial_bound_discrete",
    "schedule",
    "dirichlet_area_lower_bound",
    "dumbbell_evaluate",
    "dumbbell_run",
    "dumbbell_sweep",
]

# below this channel width the FEM route is skipped in favour of the trial bound
FEM_MIN_ETA = 1e-6
BESSEL_J0_ZERO = float(jn_zeros(0, 1)[0])


class MisalignedMesh(ValueError):
    pass


@dataclass(frozen=True)
class ProductEigenvalue:
    value: float
    branch: str  # "dirichlet", "neumann" or "tie"


def product_lambda1(mu1D: float, mu1N: float, h: float) -> ProductEigenvalue:
    """``min(μ_D, μ_N + π²/h²)``, reporting the active branch."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h!r}")
    if not (mu1D >= mu1N >= 0):
        raise ValueError(f"need mu1D >= mu1N >= 0, got mu1D={mu1D!r}, mu1N={mu1N!r}")
    neumann = mu1N + PI2 / h**2
    if mu1D < neumann:
        return ProductEigenvalue(mu1D, "dirichlet")
    if neumann < mu1D:
        return ProductEigenvalue(neumann, "neumann")
    return ProductEigenvalue(mu1D, "tie")


@dataclass(frozen=True)
class TrialFunctionReport:
    c: float
    grad_energy: float
    mass: float
    rayleigh: float
    mean: float


def trial_coefficient(p: DumbbellParams) -> float:
    """Value on the big square that makes the trial function mean-zero."""
    return (p.eta + 2.0 * p.delta) / (p.eta * p.delta + 2.0)


def trial_function(p: DumbbellParams, x: np.ndarray) -> np.ndarray:
    """Trial function at abscissae ``x``: ``c`` for ``x <= 0``, ``-1/δ`` for ``x >= δ``, linear between."""
    d = p.delta
    c = trial_coefficient(p)
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.0, c, np.where(x >= d, -1.0 / d, c - (1.0 / d + c) * x / d))


def trial_bound(p: DumbbellParams) -> TrialFunctionReport:
    """Closed-form Rayleigh quotient of the trial function; an upper bound for ``μ_N(ω_{δ,η})``."""
    d, e = p.delta, p.eta
    c = trial_coefficient(p)
    grad = (e / d) * (1.0 / d + c) ** 2
    mass = c * c + 1.0 + e / (3.0 * d) * (1.0 - c * d + c * c * d * d)
    mean = c - d + 0.5 * e * d * c - 0.5 * e
    return TrialFunctionReport(c=c, grad_energy=grad, mass=mass, rayleigh=grad / mass, mean=mean)


def trial_bound_discrete(
    p: DumbbellParams,
    mesh: TriMesh,
    shift: float = 0.0,
    matrices=None,
) -> float:
    """Discrete Rayleigh quotient of the interpolated trial function.

    The interpolant minus its M-weighted mean is a member of the discrete
    mean-zero space, so this dominates the FEM ``μ_N`` on the same mesh.
    ``shift`` is added to the nodal values before projection.
    """
    xs = mesh.xs
    for x0 in (0.0, p.delta):
        if not np.any(xs == x0):
            raise MisalignedMesh(f"mesh has no grid line at x = {x0!r}")
    K, M = assemble(mesh) if matrices is None else matrices
    u = trial_function(p, mesh.vertices[:, 0]) + shift
    m1 = np.asarray(M @ np.ones(mesh.n_vertices)).ravel()
    u = u - (m1 @ u) / m1.sum()
    return float(u @ (K @ u)) / float(u @ (M @ u))


def schedule(s: ScheduleParams) -> DumbbellParams:
    """``δ = h^(-p)``, ``η = δ^(3+β)``."""
    delta = s.h ** (-s.delta_exponent)
    if not delta < 1.0:
        raise GeometryError(
            f"h = {s.h!r} too small for the schedule: delta = h^-{s.delta_exponent} = {delta!r} is not < 1"
        )
    eta = delta ** (3.0 + s.beta)
    return DumbbellParams(delta, eta)


def dirichlet_area_lower_bound(base_area: float) -> float:
    """Faber-Krahn bound ``μ_D(ω) >= π j₀² / |ω|`` (the disk of equal area)."""
    return math.pi * BESSEL_J0_ZERO**2 / base_area


@dataclass(frozen=True)
class DumbbellRun:
    h: float
    beta: float | None
    p: float | None
    delta: float
    eta: float
    L: float
    surface_area: float
    schedule_satisfied: bool
    trial_c: float
    mu1N_bound: float
    mu1N_fem: float | None
    mu1N_fem_extrapolated: float | None
    mu1N_scaled: float
    neumann_branch: float
    lambda1_upper: float
    mu1D_lower: float
    mu1D_fem: float | None
    dirichlet_branch_inactive: bool
    method: str
    fem_dofs: int | None
    note: str | None
    external_ingredients: tuple[str, ...] = ("faber_krahn_area_bound",)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["external_ingredients"] = list(self.external_ingredients)
        return d


def _fem_neumann(p: DumbbellParams, target_h: float, layers: int, cap: int | None):
    coarse_mesh = mesh_dumbbell(p, target_h, layers, cap=cap)
    fine_mesh = refine(coarse_mesh, cap=cap)
    coarse = neumann_eig1(coarse_mesh)
    fine_mats = assemble(fine_mesh)
    fine = neumann_eig1(fine_mesh, matrices=fine_mats)
    dirichlet = dirichlet_eig1(fine_mesh, matrices=fine_mats)
    return coarse, fine, dirichlet, fine_mesh


def dumbbell_evaluate(
    p: DumbbellParams,
    h: float,
    beta: float | None = None,
    delta_exponent: float | None = None,
    use_fem: bool = True,
    fem_target_h: float = 1.0 / 32.0,
    fem_layers: int = 4,
    cap: int | None = None,
) -> DumbbellRun:
    """Upper bound for the first Maxwell eigenvalue of ``L·ω_{δ,η} × (0, h)`` with ``|∂Ω| = 1``."""
    L = normalization_factor(p, h)
    surface = product_surface_area(ProductDomain(scale(build_dumbbell(p), L), h))
    trial = trial_bound(p)
    mu_n = trial.rayleigh
    method = "trial"
    note = None
    mu_fem = mu_fem_x = mu_d_fem = None
    dofs = None
    if use_fem:
        if p.eta < FEM_MIN_ETA:
            note = f"FEM skipped: eta = {p.eta:.3g} below {FEM_MIN_ETA:g}"
        else:
            try:
                coarse, fine, dirichlet, _ = _fem_neumann(p, fem_target_h, fem_layers, cap)
            except DofBudgetExceeded as exc:
                note = f"FEM skipped: {exc}"
            else:
                mu_fem = fine.value
                mu_fem_x = richardson_extrapolate(coarse, fine)
                mu_d_fem = dirichlet.value / L**2
                dofs = fine.dof_count
                # both are rigorous upper bounds; keep the smaller
                if mu_fem <= mu_n:
                    mu_n, method = mu_fem, "fem"
    mu_scaled = mu_n / L**2
    neumann_branch = mu_scaled + PI2 / h**2
    mu_d_lower = dirichlet_area_lower_bound(L**2 * area(build_dumbbell(p)))
    inactive = mu_d_lower >= neumann_branch or (mu_d_fem is not None and mu_d_fem >= neumann_branch)
    satisfied = beta is not None and p.eta <= p.delta ** (3.0 + beta) * (1.0 + 1e-12)
    return DumbbellRun(
        h=float(h),
        beta=beta,
        p=delta_exponent,
        delta=p.delta,
        eta=p.eta,
        L=L,
        surface_area=surface,
        schedule_satisfied=satisfied,
        trial_c=trial.c,
        mu1N_bound=trial.rayleigh,
        mu1N_fem=mu_fem,
        mu1N_fem_extrapolated=mu_fem_x,
        mu1N_scaled=mu_scaled,
        neumann_branch=neumann_branch,
        lambda1_upper=neumann_branch,
        mu1D_lower=mu_d_lower,
        mu1D_fem=mu_d_fem,
        dirichlet_branch_inactive=bool(inactive),
        method=method,
        fem_dofs=dofs,
        note=note,
    )


def dumbbell_run(s: ScheduleParams, use_fem: bool = False, **fem_options) -> DumbbellRun:
    """One point of the schedule ``h -> (δ(h), η(h), L(h))``."""
    p = schedule(s)
    return dumbbell_evaluate(p, s.h, s.beta, s.delta_exponent, use_fem, **fem_options)


def dumbbell_sweep(
    beta: float,
    delta_exponent: float,
    h_grid: Iterable[float],
    use_fem: bool = False,
    **fem_options,
) -> list[DumbbellRun]:
    return [dumbbell_run(ScheduleParams(beta, h, delta_exponent), use_fem, **fem_options) for h in h_grid]
