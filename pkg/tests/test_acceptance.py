"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the "acceptance criteria" section of the terminal summary.
"""
import json
import math
import subprocess
import sys

import numpy as np

from maxwellfk import closed_form as cf
from maxwellfk import cuboid_search as cs
from maxwellfk import maxwell_product as mp
from maxwellfk.fem2d import (
    assemble,
    dirichlet_eig1,
    mesh_dumbbell,
    mesh_rectilinear,
    neumann_eig1,
    refine,
    richardson_extrapolate,
)
from maxwellfk.geometry import (
    CuboidDims,
    DumbbellParams,
    ProductDomain,
    build_dumbbell,
    product_surface_area,
    scale,
    unit_square,
)
from maxwellfk.specfun import find_a11_prime, psi1_prime

PI2 = math.pi**2


def test_criterion_01_riccati_bessel_zero(criterion):
    c = criterion(1, "derivative zero of the Riccati-Bessel function", 1.0)
    r = find_a11_prime()
    c.check(2.7436 <= r.value <= 2.7438, f"a'11 = {r.value!r} in [2.7436, 2.7438]")
    c.check(r.residual < 1e-12, f"residual {r.residual:.1e} < 1e-12")
    c.check(abs(psi1_prime(r.value)) < 1e-12, "re-evaluated residual < 1e-12")
    c.finish()


def test_criterion_02_cuboid_formula_identity(criterion):
    c = criterion(2, "cuboid closed form equals the product-dichotomy route", 1.0)
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(20):
        l1, l2, l3 = sorted(rng.uniform(0.05, 5.0, 3), reverse=True)
        direct = cf.cuboid_lambda1(CuboidDims(l1, l2, l3))
        mu_d = PI2 * (1 / l1**2 + 1 / l2**2)
        mu_n = PI2 / l1**2
        via_product = mp.product_lambda1(mu_d, mu_n, l3).value
        worst = max(worst, abs(direct - via_product) / direct)
    c.check(worst < 1e-12, f"max relative difference {worst:.1e} < 1e-12")
    c.finish()


def test_criterion_03_fem_convergence(criterion):
    c = criterion(3, "P1 eigenvalues on the unit square", 30.0)
    for name, solver, exact in (("dirichlet", dirichlet_eig1, 2 * PI2), ("neumann", neumann_eig1, PI2)):
        r16, r32, r64 = (solver(mesh_rectilinear(unit_square(), 1 / n)) for n in (16, 32, 64))
        err64 = abs(r64.value / exact - 1)
        c.check(err64 < 0.01, f"{name} error at h=1/64: {err64:.2e} < 1%")
        rich = abs(richardson_extrapolate(r32, r64) / exact - 1)
        c.check(rich < 5e-4, f"{name} Richardson (1/32,1/64) error {rich:.2e} < 0.05%")
        for (a, b), label in (((r16, r32), "1/16->1/32"), ((r32, r64), "1/32->1/64")):
            ratio = (a.value - exact) / (b.value - exact)
            c.check(3.5 <= ratio <= 4.5, f"{name} error ratio {label} = {ratio:.3f} in [3.5, 4.5]")
    c.finish()


def test_criterion_04_perimeter_infimum(criterion):
    c = criterion(4, "perimeter-constrained cuboid infimum at k=2", 10.0)
    k = 2.0
    rng = np.random.default_rng(4)
    l3 = np.sqrt(k / 6) * 10 ** rng.uniform(-6, 0, 20000)
    lo = np.sqrt(l3**2 + k / 2) - l3  # l2 = l1 on this end
    hi = (k / 2 - l3**2) / (2 * l3)  # l2 = l3 on this end
    l1 = lo + rng.uniform(0, 1, l3.size) * (hi - lo)
    l2 = (k / 2 - l3 * l1) / (l3 + l1)
    lam = PI2 * (1 / l1**2 + 1 / l2**2)
    c.check(bool(np.all(lam > 2 * PI2)), f"all 20000 random feasible samples > 2pi^2 (min {lam.min():.6f})")
    res, _, _, grid_lam = cs.grid_search(k, 200)
    c.check(bool(np.all(grid_lam > 2 * PI2)), "all grid points > 2pi^2")
    _, seq = cs.minimizing_sequence(k, 0.01)
    c.check(abs(seq / (2 * PI2) - 1) < 0.03, f"minimizing sequence at l3=0.01 within 3% ({seq / (2 * PI2) - 1:.2e})")
    g200 = res.lambda1
    c.check(2 * PI2 < g200 < 1.05 * 2 * PI2, f"grid_infimum(2,200) = {g200:.6f} in (2pi^2, 1.05*2pi^2)")
    g800 = cs.grid_infimum(k, 800)
    gap200, gap800 = g200 - 2 * PI2, g800 - 2 * PI2
    c.check(0 < gap800 < 0.5 * gap200, f"gap r=800 {gap800:.3e} < half of gap r=200 {gap200:.3e}")
    g400 = cs.grid_infimum(k, 400)
    c.check(g400 - 2 * PI2 < 0.6 * gap200, f"gap shrinks under one doubling ({(g400 - 2 * PI2) / gap200:.3f})")
    c.finish()


def test_criterion_05_degenerate_families(criterion):
    c = criterion(5, "degenerate cuboid families", 1.0)
    for ell in (1.0, 0.5, 0.1, 0.01):
        box, lam = cs.volume_family_vanishing(ell)
        c.check(abs(lam / (2 * PI2 * ell) - 1) < 1e-12, f"vanishing family at l={ell}")
        c.check(abs(box.volume - 1) < 1e-12, f"unit volume at l={ell}")
    box, lam = cs.volume_family_blowup(0.01)
    c.check(lam > 1e3, f"volume blow-up at l=0.01: {lam:.3e} > 1e3")
    c.check(abs(box.volume - 1) < 1e-12, f"volume residual {abs(box.volume - 1):.1e}")
    box, lam = cs.perimeter_family_blowup(0.01)
    c.check(lam > 1e3, f"perimeter blow-up at l=0.01: {lam:.3e} > 1e3")
    c.check(abs(box.surface_area - 2) < 1e-12, f"surface residual {abs(box.surface_area - 2):.1e}")
    c.finish()


def test_criterion_06_ball_sandwich(criterion):
    c = criterion(6, "ball versus cube and the cuboid infimum", 1.0)
    a = find_a11_prime().value
    for k in (1.0, 2.0, 10.0):
        ball = 4 * math.pi * a**2 / k
        c.check(abs(cf.ball_lambda1_surface(k) - ball) < 1e-12 * ball, f"ball formula at k={k}")
        c.check(4 * PI2 / k < ball < 12 * PI2 / k, f"4pi^2/k < ball < 12pi^2/k at k={k}")
        c.check(cf.ball_lambda1_volume(k) < cf.cube_lambda1_volume(k), f"volume: ball < cube at k={k}")
    c.finish()


def _gauss_trial_integrals(p, n=4):
    """Gauss-Legendre quadrature of the piecewise trial function on each rectangle."""
    x, w = np.polynomial.legendre.leggauss(n)
    cc = mp.trial_coefficient(p)
    d, e = p.delta, p.eta
    pieces = [(-1.0, 0.0, 1.0), (0.0, d, e), (d, 2 * d, d)]  # x-interval, height
    mean = mass = grad = 0.0
    for a, b, height in pieces:
        xm = 0.5 * (a + b) + 0.5 * (b - a) * x
        u = mp.trial_function(p, xm)
        ww = 0.5 * (b - a) * w * height
        mean += ww @ u
        mass += ww @ u**2
        slope = -(cc + 1 / d) / d if a == 0.0 else 0.0
        grad += ww.sum() * slope**2
    return grad, mass, mean


def test_criterion_07_trial_function_oracle(criterion):
    c = criterion(7, "closed-form trial bound against quadrature", 1.0)
    rng = np.random.default_rng(7)
    worst = worst_mean = worst_quad_mean = 0.0
    for _ in range(50):
        d = rng.uniform(0.01, 0.95)
        e = d * rng.uniform(1e-4, 0.95)
        p = DumbbellParams(d, e)
        rep = mp.trial_bound(p)
        grad, mass, mean = _gauss_trial_integrals(p)
        worst_quad_mean = max(worst_quad_mean, abs(mean))
        worst = max(worst, abs(rep.rayleigh - grad / mass) / rep.rayleigh)
        worst_mean = max(worst_mean, abs(rep.mean))
    c.check(worst < 1e-12, f"max relative difference to quadrature {worst:.1e} < 1e-12")
    c.check(worst_mean < 1e-14, f"max |mean| {worst_mean:.1e} < 1e-14")
    c.check(worst_quad_mean < 1e-12, f"quadrature mean {worst_quad_mean:.1e} < 1e-12")
    for d in (0.2, 0.1, 0.05):
        q = mp.trial_bound(DumbbellParams(d, d**4)).rayleigh / (d**4 / d**3)
        c.check(0.5 <= q <= 1.5, f"rayleigh/(eta/delta^3) = {q:.4f} at delta={d}")
    c.finish()


def test_criterion_08_fem_vs_trial_bound(criterion):
    c = criterion(8, "FEM Neumann eigenvalue below the trial bound on dumbbell(0.25, 0.05)", 120.0)
    p = DumbbellParams(0.25, 0.05)
    coarse_mesh = mesh_dumbbell(p, 1 / 16, 4)
    fine_mesh = refine(coarse_mesh)
    results = []
    for mesh in (coarse_mesh, fine_mesh):
        mats = assemble(mesh)
        fem = neumann_eig1(mesh, matrices=mats)
        disc = mp.trial_bound_discrete(p, mesh, matrices=mats)
        c.check(0 <= fem.value <= disc, f"{fem.value:.6f} <= discrete trial {disc:.6f} ({mesh.n_vertices} dofs)")
        results.append(fem)
    extrap = richardson_extrapolate(*results)
    bound = mp.trial_bound(p).rayleigh
    c.check(extrap <= 1.05 * bound, f"Richardson {extrap:.6f} <= 1.05 x trial bound {bound:.6f}")
    c.finish()


def test_criterion_09_dumbbell_decay(criterion):
    c = criterion(9, "perimeter-normalized dumbbell products: eigenvalue decay", 10.0)
    runs = mp.dumbbell_sweep(1.0, 3.0, [10.0, 1e2, 1e3, 1e4])
    lam = [r.lambda1_upper for r in runs]
    c.check(all(a > b for a, b in zip(lam, lam[1:])), "strictly decreasing: " + ", ".join(f"{v:.4g}" for v in lam))
    c.check(lam[-1] < 0.1 * lam[0], f"final/initial = {lam[-1] / lam[0]:.2e} < 0.1")
    for r in runs:
        dom = ProductDomain(scale(build_dumbbell(DumbbellParams(r.delta, r.eta)), r.L), r.h)
        res = abs(product_surface_area(dom) - 1)
        c.check(res < 1e-12, f"surface residual {res:.1e} at h={r.h:g}")
        c.check(r.schedule_satisfied, f"schedule condition at h={r.h:g}")
    c.finish()


def test_criterion_10_verify_determinism(criterion, tmp_path):
    c = criterion(10, "verify is byte-for-byte reproducible", 300.0)
    outputs = []
    for name in ("first.json", "second.json"):
        path = tmp_path / name
        proc = subprocess.run(
            [sys.executable, "-m", "maxwellfk", "verify", "--seed", "0", "-o", str(path)],
            capture_output=True, text=True,
        )
        c.check(proc.returncode == 0, f"verify exit code {proc.returncode}")
        outputs.append(path.read_bytes())
    c.check(outputs[0] == outputs[1], "identical JSON bytes")
    c.check(json.loads(outputs[0])["result"]["passed"] is True, "every invariant check passed")
    c.finish()
