"""Compare the Cython kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Prints the best-of-N wall time per kernel and backend, the speedup, and the
largest difference between the two outputs.
"""
import argparse
import timeit

import numpy as np

from maxwellfk import _kernels_py
from maxwellfk.cuboid_search import grid_points
from maxwellfk.fem2d import mesh_dumbbell, mesh_rectilinear
from maxwellfk.geometry import DumbbellParams, unit_square
from maxwellfk.kernels import compiled_backend


def cases():
    sq = mesh_rectilinear(unit_square(), 1.0 / 256)
    db = mesh_dumbbell(DumbbellParams(0.25, 0.05), 1.0 / 128, 4)
    l3_200, t_200 = grid_points(2.0, 200)
    l3_800, t_800 = grid_points(2.0, 800)
    return [
        ("p1_triplets", f"unit square, {sq.n_triangles} triangles", (sq.vertices, sq.triangles)),
        ("p1_triplets", f"dumbbell, {db.n_triangles} triangles", (db.vertices, db.triangles)),
        ("constrained_lambda_grid", f"k=2, r=200, {l3_200.size * t_200.size} points", (l3_200, t_200, 2.0)),
        ("constrained_lambda_grid", f"k=2, r=800, {l3_800.size * t_800.size} points", (l3_800, t_800, 2.0)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    compiled = compiled_backend()
    if compiled is None:
        print("compiled extension not built; only the numpy fallback is available")
    print(f"{'kernel':<24} {'case':<38} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8} {'max diff':>10}")
    for name, label, call_args in cases():
        py = getattr(_kernels_py, name)
        t_py = min(timeit.repeat(lambda: py(*call_args), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:<24} {label:<38} {t_py:12.2f} {'-':>12} {'-':>8} {'-':>10}")
            continue
        cy = getattr(compiled, name)
        t_cy = min(timeit.repeat(lambda: cy(*call_args), number=1, repeat=args.repeat)) * 1e3
        out_py, out_cy = py(*call_args), cy(*call_args)
        diff = max(float(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float)))) for a, b in zip(out_py, out_cy))
        print(f"{name:<24} {label:<38} {t_py:12.2f} {t_cy:12.2f} {t_py / t_cy:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
