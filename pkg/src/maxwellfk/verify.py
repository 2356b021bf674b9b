"""Invariant suite behind ``maxwellfk verify``.

Each check returns ``(passed, detail)`` where ``detail`` is a flat dict of
numbers. Random sampling is driven by a single seeded generator and nothing
time-dependent enters the report, so equal seeds give equal reports.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closed_form as cf
from . import cuboid_search as cs
from .fem2d import (
    assemble,
    dirichlet_eig1,
    mesh_dumbbell,
    mesh_rectilinear,
    neumann_eig1,
    refine,
    richardson_extrapolate,
)
from .geometry import (
    CuboidDims,
    DumbbellParams,
    area,
    build_dumbbell,
    normalization_factor,
    perimeter,
    rectangle,
    scale,
    unit_square,
)
from .maxwell_product import dumbbell_sweep, product_lambda1, trial_bound, trial_function
from .specfun import SERIES_SWITCH, find_a11_prime, psi1, psi1_prime

__all__ = ["Check", "CHECKS", "run_checks", "random_dumbbell_params", "trial_quadrature"]


@dataclass(frozen=True)
class Check:
    module: str
    name: str
    func: Callable[[np.random.Generator], tuple[bool, dict]]


def random_dumbbell_params(rng: np.random.Generator, n: int) -> list[DumbbellParams]:
    out = []
    while len(out) < n:
        d = float(rng.uniform(0.01, 0.95))
        e = float(d * rng.uniform(0.001, 0.99))
        out.append(DumbbellParams(d, e))
    return out


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _gauss_rect(f, x0, x1, y0, y1) -> float:
    xm, xr = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
    ym, yr = 0.5 * (y0 + y1), 0.5 * (y1 - y0)
    X, Y = np.meshgrid(xm + xr * _GL_X, ym + yr * _GL_X, indexing="ij")
    W = np.outer(_GL_W, _GL_W) * xr * yr
    return float(np.sum(W * f(X, Y)))


def trial_quadrature(p: DumbbellParams) -> tuple[float, float, float]:
    """``(∫|∇u|², ∫u², ∫u)`` by tensor Gauss-Legendre on the three rectangles.

    The gradient is the piecewise constant slope of the trial function.
    """
    d, e = p.delta, p.eta
    c = (e + 2 * d) / (e * d + 2)
    slope = -(1.0 / d) * (1.0 / d + c)
    rects = [
        ((-1.0, 0.0, (e - 1) / 2, (e + 1) / 2), 0.0),
        ((0.0, d, 0.0, e), slope),
        ((d, 2 * d, (e - d) / 2, (e + d) / 2), 0.0),
    ]
    grad = mass = mean = 0.0
    for (x0, x1, y0, y1), s in rects:
        grad += _gauss_rect(lambda X, Y, s=s: np.full_like(X, s * s), x0, x1, y0, y1)
        mass += _gauss_rect(lambda X, Y: trial_function(p, X) ** 2, x0, x1, y0, y1)
        mean += _gauss_rect(lambda X, Y: trial_function(p, X), x0, x1, y0, y1)
    return grad, mass, mean


# -- geometry ---------------------------------------------------------------


def _dumbbell_closed_forms(rng):
    worst = 0.0
    for p in random_dumbbell_params(rng, 200):
        poly = build_dumbbell(p)
        worst = max(
            worst,
            abs(area(poly) - (1 + p.delta * (p.delta + p.eta))),
            abs(perimeter(poly) - 2 * (2 + 3 * p.delta - p.eta)),
        )
    return worst < 1e-12, {"max_abs_error": worst}


def _homogeneity(rng):
    worst = 0.0
    for p in random_dumbbell_params(rng, 50):
        poly = build_dumbbell(p)
        a = float(rng.uniform(0.01, 100.0))
        s = scale(poly, a)
        worst = max(
            worst,
            abs(area(s) / (a * a * area(poly)) - 1),
            abs(perimeter(s) / (a * perimeter(poly)) - 1),
        )
    return worst < 1e-13, {"max_rel_error": worst}


def _normalization(rng):
    worst = 0.0
    for d, e_frac, h in itertools.product((0.9, 0.5, 0.1, 1e-2, 1e-4), (0.5, 1e-3, 1e-8), (0.1, 1, 10, 1e3, 1e6)):
        p = DumbbellParams(d, d * e_frac)
        L = normalization_factor(p, h)
        res = 2 * L * L * (1 + d * (d + p.eta)) + 2 * h * L * (2 + 3 * d - p.eta) - 1
        worst = max(worst, abs(res))
    return worst < 1e-12, {"max_residual": worst}


def _polygon_validity(rng):
    # RectilinearPolygon validates simplicity and orientation on construction
    ok = all(area(build_dumbbell(p)) > 0 for p in random_dumbbell_params(rng, 50))
    return ok, {"samples": 50}


# -- specfun ----------------------------------------------------------------


def _bracket_invariance(rng):
    a = find_a11_prime(2.0, 3.0).value
    b = find_a11_prime(2.5, 2.9).value
    return abs(a - b) < 1e-12, {"difference": abs(a - b), "a11_prime": a}


def _series_switch(rng):
    z = math.nextafter(SERIES_SWITCH, 0.0)
    closed = math.sin(z) / z - math.cos(z)
    closed_p = math.cos(z) / z - math.sin(z) / z**2 + math.sin(z)
    diff = max(abs(psi1(z) - closed), abs(psi1_prime(z) - closed_p))
    return diff < 1e-12, {"max_abs_difference": diff}


# -- closed_form ------------------------------------------------------------


def _permutation(rng):
    worst = 0.0
    for _ in range(50):
        sides = rng.uniform(0.1, 10.0, 3)
        vals = [cf.cuboid_lambda1(CuboidDims(*perm)) for perm in itertools.permutations(sides)]
        worst = max(worst, max(vals) - min(vals))
    return worst == 0.0, {"max_spread": worst}


def _closed_form_homogeneity(rng):
    worst = 0.0
    for a in (0.5, 2.0, 10.0):
        c = CuboidDims(*rng.uniform(0.1, 3.0, 3))
        pairs = [
            (cf.cuboid_lambda1(c.scaled(a)), cf.scaling_law(cf.cuboid_lambda1(c), a)),
            (cf.ball_lambda1_radius(a * 1.3), cf.scaling_law(cf.ball_lambda1_radius(1.3), a)),
            (cf.ball_lambda1_surface(a * a * 2.0), cf.scaling_law(cf.ball_lambda1_surface(2.0), a)),
            (cf.ball_lambda1_volume(a**3 * 2.0), cf.scaling_law(cf.ball_lambda1_volume(2.0), a)),
            (cf.cube_lambda1_surface(a * a * 2.0), cf.scaling_law(cf.cube_lambda1_surface(2.0), a)),
        ]
        worst = max(worst, max(abs(x / y - 1) for x, y in pairs))
    return worst < 1e-12, {"max_rel_error": worst}


def _perimeter_ordering(rng):
    ok = all(4 * cf.PI2 / k < cf.ball_lambda1_surface(k) < cf.cube_lambda1_surface(k) for k in (1.0, 2.0, 10.0))
    return ok, {"ball_over_infimum_k2": cf.ball_lambda1_surface(2.0) / (2 * cf.PI2)}


def _volume_ordering(rng):
    ok = all(cf.ball_lambda1_volume(k) < cf.cube_lambda1_volume(k) for k in (1.0, 2.0, 10.0))
    return ok, {"ball_over_cube": cf.ball_lambda1_volume(1.0) / cf.cube_lambda1_volume(1.0)}


# -- cuboid_search ----------------------------------------------------------


def sample_feasible(rng: np.random.Generator, k: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Random feasible ``(l1, l3)``: ``l3`` log-uniform, ``l1`` uniform between its bounds."""
    top = math.sqrt(k / 6.0)
    l3 = top * np.exp(rng.uniform(math.log(1e-4), 0.0, n))
    lo = np.sqrt(l3 * l3 + k / 2) - l3
    hi = (k / 2 - l3 * l3) / (2 * l3)
    l1 = lo + rng.uniform(0.0, 1.0, n) * (hi - lo)
    return l1, l3


def _young_bound(rng):
    margin = math.inf
    for k in (1.0, 2.0, 10.0):
        l1, l3 = sample_feasible(rng, k, 10_000)
        lam = cf.PI2 * (1 / l1**2 + (l3 + l1) ** 2 / (k / 2 - l3 * l1) ** 2)
        margin = min(margin, float(np.min(lam / (4 * cf.PI2 / k) - 1)))
    return margin > 0, {"min_rel_margin": margin}


def _feasibility_iff_order(rng):
    mismatches = 0
    n = 0
    for k in (1.0, 2.0, 10.0):
        top = math.sqrt(k / 6)
        for _ in range(500):
            l3 = float(top * rng.uniform(0.001, 1.2))
            lo, hi = cs.l1_bounds(l3, k)
            span = abs(hi - lo) + lo
            for l1 in (lo, hi, float(rng.uniform(0.5 * lo, lo + 1.5 * span))):
                n += 1
                feasible = cs.is_feasible(l1, l3, k, rtol=1e-12)
                l2 = (k / 2 - l3 * l1) / (l3 + l1)
                tol = 1e-12 * max(l1, 1.0)
                ordered = l3 > 0 and l2 > 0 and l3 <= l2 + tol and l2 <= l1 + tol
                mismatches += feasible != ordered
    return mismatches == 0, {"mismatches": mismatches, "samples": n}


def _volume_families(rng):
    worst = 0.0
    for ell in (1.0, 0.5, 0.1, 0.01, 1e-3):
        for fam in (cs.volume_family_vanishing, cs.volume_family_blowup):
            c, _ = fam(ell)
            worst = max(worst, abs(c.volume - 1))
    return worst < 1e-12, {"max_volume_residual": worst}


def _grid_gap(rng):
    r200 = cs.grid_infimum(2.0, 200) / (2 * cf.PI2) - 1
    r800 = cs.grid_infimum(2.0, 800) / (2 * cf.PI2) - 1
    return 0 < r800 < 0.5 * r200, {"gap_200": r200, "gap_800": r800}


# -- fem2d ------------------------------------------------------------------


def _conforming_upper_bound(rng):
    prev_d = prev_n = math.inf
    ok = True
    for n in (8, 16, 32):
        mesh = mesh_rectilinear(unit_square(), 1.0 / n)
        mats = assemble(mesh)
        d = dirichlet_eig1(mesh, matrices=mats).value
        nn = neumann_eig1(mesh, matrices=mats).value
        ok &= d >= 2 * cf.PI2 and nn >= cf.PI2 and d <= prev_d and nn <= prev_n
        prev_d, prev_n = d, nn
    return bool(ok), {"dirichlet_32": prev_d, "neumann_32": prev_n}


def _deflation(rng):
    mesh = mesh_dumbbell(DumbbellParams(0.25, 0.05), 1.0 / 16, 2)
    K, M = assemble(mesh)
    res = neumann_eig1(mesh, matrices=(K, M))
    v = res.eigenvectors[:, 0]
    val = abs(float(np.ones(mesh.n_vertices) @ (M @ v))) / float(np.linalg.norm(v))
    return val < 1e-10, {"constant_overlap": val}


def _layers_independence(rng):
    p = DumbbellParams(0.25, 0.05)
    est = {}
    bar = {}
    for layers in (2, 4):
        m = mesh_dumbbell(p, 1.0 / 16, layers)
        coarse = neumann_eig1(m)
        fine = neumann_eig1(refine(m))
        est[layers] = richardson_extrapolate(coarse, fine)
        bar[layers] = abs(fine.value - coarse.value)
    change = abs(est[2] - est[4])
    return change < max(bar.values()), {"change": change, "error_bar": max(bar.values())}


def _dirichlet_ge_neumann(rng):
    ok = True
    polys = [unit_square(), rectangle(2.0, 1.0), build_dumbbell(DumbbellParams(0.25, 0.05)), build_dumbbell(DumbbellParams(0.5, 0.3))]
    worst = math.inf
    for poly in polys:
        mesh = mesh_rectilinear(poly, 1.0 / 16)
        mats = assemble(mesh)
        d = dirichlet_eig1(mesh, matrices=mats).value
        n = neumann_eig1(mesh, matrices=mats).value
        ok &= d >= n
        worst = min(worst, d - n)
    return bool(ok), {"min_gap": worst}


# -- maxwell_product --------------------------------------------------------


def _dichotomy_identity(rng):
    worst = 0.0
    for _ in range(50):
        c = CuboidDims(*rng.uniform(0.05, 5.0, 3))
        mu_d = cf.PI2 * (1 / c.l1**2 + 1 / c.l2**2)
        mu_n = cf.PI2 / c.l1**2
        val = product_lambda1(mu_d, mu_n, c.l3).value
        worst = max(worst, abs(val / cf.cuboid_lambda1(c) - 1))
    return worst < 1e-12, {"max_rel_error": worst}


def _trial_decay(rng):
    ok = True
    for beta in (0.5, 1.0, 2.0):
        vals = [trial_bound(DumbbellParams(d, d ** (3 + beta))).rayleigh for d in (0.5, 0.2, 0.1, 0.05, 0.02, 0.01)]
        ok &= all(v > 0 for v in vals) and all(a > b for a, b in zip(vals, vals[1:]))
    return bool(ok), {}


def _scaling_consistency(rng):
    p = DumbbellParams(0.25, 0.05)
    v1 = neumann_eig1(mesh_dumbbell(p, 1.0 / 16, 2)).value
    vh = neumann_eig1(mesh_dumbbell(p, 0.5 / 16, 2, alpha=0.5)).value
    rel = abs(vh * 0.25 / v1 - 1)
    return rel < 1e-8, {"rel_error": rel}


def _run_decay(rng):
    ok = True
    for beta in (0.5, 1.0, 2.0):
        runs = dumbbell_sweep(beta, 2.0 / beta + 1.0, (10.0, 1e2, 1e3, 1e4))
        vals = [r.lambda1_upper for r in runs]
        ok &= all(a > b for a, b in zip(vals, vals[1:]))
        ok &= all(abs(r.surface_area - 1) < 1e-12 for r in runs)
    return bool(ok), {}


def _trial_quadrature(rng):
    worst = 0.0
    for p in random_dumbbell_params(rng, 50):
        rep = trial_bound(p)
        g, m, _ = trial_quadrature(p)
        worst = max(worst, abs(rep.rayleigh / (g / m) - 1))
    return worst < 1e-12, {"max_rel_error": worst}


CHECKS: list[Check] = [
    Check("geometry", "dumbbell area and perimeter closed forms", _dumbbell_closed_forms),
    Check("geometry", "scale homogeneity", _homogeneity),
    Check("geometry", "normalization residual", _normalization),
    Check("geometry", "dumbbell polygon simple and counterclockwise", _polygon_validity),
    Check("specfun", "zero independent of bracket", _bracket_invariance),
    Check("specfun", "series/closed-form agreement at switch", _series_switch),
    Check("closed_form", "cuboid permutation invariance", _permutation),
    Check("closed_form", "scaling homogeneity", _closed_form_homogeneity),
    Check("closed_form", "perimeter ordering infimum < ball < cube", _perimeter_ordering),
    Check("closed_form", "volume ordering ball < cube", _volume_ordering),
    Check("cuboid_search", "strict lower bound 4pi^2/k", _young_bound),
    Check("cuboid_search", "feasibility bounds iff side ordering", _feasibility_iff_order),
    Check("cuboid_search", "volume families have unit volume", _volume_families),
    Check("cuboid_search", "grid gap shrinks with resolution", _grid_gap),
    Check("fem2d", "conforming upper bound on unit square", _conforming_upper_bound),
    Check("fem2d", "Neumann deflation orthogonality", _deflation),
    Check("fem2d", "channel layers within error bar", _layers_independence),
    Check("fem2d", "Dirichlet >= Neumann", _dirichlet_ge_neumann),
    Check("maxwell_product", "product formula reproduces cuboid", _dichotomy_identity),
    Check("maxwell_product", "trial bound positive and decreasing", _trial_decay),
    Check("maxwell_product", "Neumann scaling under dilation", _scaling_consistency),
    Check("maxwell_product", "dumbbell runs decay", _run_decay),
    Check("maxwell_product", "trial bound equals quadrature", _trial_quadrature),
]


def run_checks(seed: int = 0, checks: list[Check] | None = None) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    for check in checks or CHECKS:
        try:
            passed, detail = check.func(rng)
            error = None
        except Exception as exc:  # a crashing check is a failed check
            passed, detail, error = False, {}, f"{type(exc).__name__}: {exc}"
        row = {"module": check.module, "name": check.name, "passed": bool(passed), "detail": detail}
        if error:
            row["error"] = error
        out.append(row)
    return out
