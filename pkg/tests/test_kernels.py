import os
import subprocess
import sys

import numpy as np
import pytest

from maxwellfk import _kernels_py, kernels
from maxwellfk.cuboid_search import grid_points, lambda1_constrained, FeasiblePoint
from maxwellfk.fem2d import mesh_dumbbell
from maxwellfk.geometry import DumbbellParams

compiled = kernels.compiled_backend()
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _backend_in_subprocess(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("MAXWELLFK_PURE_PYTHON", None)
    else:
        env["MAXWELLFK_PURE_PYTHON"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "import maxwellfk; print(maxwellfk.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


def test_env_var_forces_python_backend():
    assert _backend_in_subprocess("1") == "python"


@needs_ext
def test_compiled_backend_is_default():
    assert _backend_in_subprocess(None) == "cython"
    assert _backend_in_subprocess("0") == "cython"


@needs_ext
def test_p1_triplets_backends_agree():
    m = mesh_dumbbell(DumbbellParams(0.25, 0.05), 1 / 16, 4)
    a = compiled.p1_triplets(m.vertices, m.triangles)
    b = _kernels_py.p1_triplets(m.vertices, m.triangles)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=0, atol=1e-15)


@needs_ext
def test_constrained_grid_backends_agree():
    l3, t = grid_points(2.0, 100)
    a = compiled.constrained_lambda_grid(l3, t, 2.0)
    b = _kernels_py.constrained_lambda_grid(l3, t, 2.0)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-15, atol=0)


@pytest.mark.parametrize("module", [_kernels_py, compiled] if compiled else [_kernels_py])
def test_constrained_grid_matches_scalar_route(module):
    l3, t = grid_points(10.0, 20)
    lam, l1 = module.constrained_lambda_grid(l3, t, 10.0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        i, j = rng.integers(len(l3)), rng.integers(len(t) - 1)
        ref = lambda1_constrained(FeasiblePoint(l1[i, j], l3[i], 10.0))
        assert lam[i, j] == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("module", [_kernels_py, compiled] if compiled else [_kernels_py])
def test_p1_triplets_rejects_degenerate(module):
    pts = np.array([[0, 0], [1, 0], [2, 0]], dtype=float)
    with pytest.raises(ValueError, match="triangle 0"):
        module.p1_triplets(pts, np.array([[0, 1, 2]]))
