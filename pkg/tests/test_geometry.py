import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import bisect

from maxwellfk.geometry import (
    CuboidDims,
    DumbbellParams,
    GeometryError,
    ProductDomain,
    RectilinearPolygon,
    ScheduleParams,
    area,
    build_dumbbell,
    normalization_factor,
    perimeter,
    polygon_from_json,
    polygon_to_json,
    product_surface_area,
    rectangle,
    scale,
    unit_square,
)

dumbbell_params = st.tuples(
    st.floats(0.01, 0.95), st.floats(1e-3, 0.99)
).map(lambda t: DumbbellParams(t[0], t[0] * t[1]))


def test_cuboid_sorts_sides():
    c = CuboidDims(1.0, 3.0, 2.0)
    assert (c.l1, c.l2, c.l3) == (3.0, 2.0, 1.0)
    assert c.volume == 6.0
    assert c.surface_area == 2 * (6 + 3 + 2)


@pytest.mark.parametrize("bad", [(0, 1, 1), (-1, 1, 1), (math.nan, 1, 1), (math.inf, 1, 1)])
def test_cuboid_rejects_nonpositive(bad):
    with pytest.raises(GeometryError):
        CuboidDims(*bad)


@pytest.mark.parametrize("delta, eta", [(0.1, 0.1), (0.1, 0.2), (1.0, 0.5), (0.5, 0.0), (0.5, -0.1)])
def test_dumbbell_params_reject_degenerate(delta, eta):
    with pytest.raises(GeometryError):
        DumbbellParams(delta, eta)


def test_schedule_params_need_p_above_two_over_beta():
    ScheduleParams(1.0, 10.0, 3.0)
    with pytest.raises(GeometryError):
        ScheduleParams(1.0, 10.0, 2.0)


def test_dumbbell_vertex_loop():
    p = DumbbellParams(0.5, 0.25)
    poly = build_dumbbell(p)
    assert len(poly.vertices) == 12
    assert poly.vertices[0] == (-1.0, (-1 + 0.25) / 2)
    # the three rectangles, area summed independently
    rects = [(1.0, 1.0), (0.5, 0.25), (0.5, 0.5)]
    assert area(poly) == pytest.approx(sum(w * h for w, h in rects), abs=1e-15)
    assert area(poly) == pytest.approx(1.375, abs=1e-15)
    assert perimeter(poly) == pytest.approx(6.5, abs=1e-15)
    assert perimeter(poly) == pytest.approx(2 * (2 + 3 * 0.5 - 0.25), abs=1e-15)


def test_dumbbell_contains_its_pieces():
    p = DumbbellParams(0.3, 0.1)
    poly = build_dumbbell(p)
    assert poly.contains(-0.5, 0.05)  # big square
    assert poly.contains(0.15, 0.05)  # channel
    assert poly.contains(0.45, 0.05)  # small square
    assert not poly.contains(0.15, 0.12)  # above the channel
    assert not poly.contains(0.7, 0.05)


@given(dumbbell_params)
def test_dumbbell_closed_forms(p):
    poly = build_dumbbell(p)
    assert abs(area(poly) - (1 + p.delta * (p.delta + p.eta))) < 1e-12
    assert abs(perimeter(poly) - 2 * (2 + 3 * p.delta - p.eta)) < 1e-12


@given(dumbbell_params, st.floats(1e-3, 1e3))
def test_scale_homogeneity(p, alpha):
    poly = build_dumbbell(p)
    s = scale(poly, alpha)
    assert area(s) == pytest.approx(alpha**2 * area(poly), rel=1e-14)
    assert perimeter(s) == pytest.approx(alpha * perimeter(poly), rel=1e-14)


def test_scale_examples():
    assert area(scale(unit_square(), 2.0)) == 4.0
    poly = build_dumbbell(DumbbellParams(0.5, 0.25))
    assert scale(poly, 1.0) == poly
    L = 0.37
    assert area(scale(poly, L)) == pytest.approx(L**2 * 1.375, rel=1e-15)


def test_area_perimeter_of_unit_square():
    assert area(unit_square()) == 1.0
    assert perimeter(unit_square()) == 4.0


def test_polygon_validation():
    with pytest.raises(GeometryError, match="axis-aligned"):
        RectilinearPolygon(((0, 0), (1, 0), (1, 1), (0.5, 1.5)))
    with pytest.raises(GeometryError, match="counterclockwise"):
        RectilinearPolygon(((0, 0), (0, 1), (1, 1), (1, 0)))
    with pytest.raises(GeometryError, match="collinear"):
        RectilinearPolygon(((0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1)))
    # figure-eight made of two squares sharing a crossing
    with pytest.raises(GeometryError, match="simple"):
        RectilinearPolygon(((0, 0), (2, 0), (2, 2), (1, 2), (1, -1), (0, -1)))


def test_dumbbell_is_simple_for_random_params():
    rng = np.random.default_rng(1)
    for _ in range(100):
        d = rng.uniform(0.001, 0.999)
        e = d * rng.uniform(1e-6, 0.999)
        poly = build_dumbbell(DumbbellParams(d, e))
        v = poly.array
        edges = list(zip(v, np.roll(v, -1, axis=0)))
        # brute-force pairwise check of non-adjacent edges
        for (i, a), (j, b) in itertools.combinations(enumerate(edges), 2):
            if j == i + 1 or (i == 0 and j == len(edges) - 1):
                continue
            ax = sorted((a[0][0], a[1][0])); ay = sorted((a[0][1], a[1][1]))
            bx = sorted((b[0][0], b[1][0])); by = sorted((b[0][1], b[1][1]))
            assert not (ax[0] <= bx[1] and bx[0] <= ax[1] and ay[0] <= by[1] and by[0] <= ay[1])


def test_product_surface_area():
    assert product_surface_area(ProductDomain(unit_square(), 1.0)) == 6.0
    d = ProductDomain(build_dumbbell(DumbbellParams(0.5, 0.25)), 2.0)
    assert product_surface_area(d) == pytest.approx(15.75, abs=1e-14)
    tiny = ProductDomain(rectangle(2.0, 3.0), 1e-12)
    assert product_surface_area(tiny) == pytest.approx(12.0, rel=1e-11)
    with pytest.raises(GeometryError):
        ProductDomain(unit_square(), 0.0)


def _surface_residual(p, h, L):
    return product_surface_area(ProductDomain(scale(build_dumbbell(p), L), h)) - 1.0


def test_normalization_factor_small_channel():
    p = DumbbellParams(0.01, 1e-8)
    h = 10.0
    L = normalization_factor(p, h)
    assert abs(_surface_residual(p, h, L)) < 1e-12
    A = h * (2 + 3 * 0.01 - 1e-8)
    B = 2 * (1 + 0.01 * (0.01 + 1e-8))
    assert A == pytest.approx(20.2999999, abs=1e-12)  # 10 * (2.03 - 1e-8)
    assert B == pytest.approx(2.0002, abs=1e-9)
    # independent route: bisection on the quadratic residual
    oracle = bisect(lambda x: B * x * x + 2 * A * x - 1, 0.0, 1.0, xtol=1e-16, rtol=1e-15)
    assert L == pytest.approx(oracle, rel=1e-13)


def test_normalization_factor_asymptotics():
    p = DumbbellParams(0.01, 1e-8)
    h = 1e4
    assert normalization_factor(p, h) * 4 * h == pytest.approx(1.0, rel=0.05)


@settings(max_examples=200)
@given(dumbbell_params, st.floats(1e-3, 1e6))
def test_normalization_residual(p, h):
    L = normalization_factor(p, h)
    res = 2 * L**2 * (1 + p.delta * (p.delta + p.eta)) + 2 * h * L * (2 + 3 * p.delta - p.eta) - 1
    assert abs(res) < 1e-12


def test_polygon_json_round_trip():
    poly = build_dumbbell(DumbbellParams(0.3, 0.1))
    text = polygon_to_json(poly)
    assert json.loads(text)[0] == [-1.0, (0.1 - 1) / 2]
    assert polygon_from_json(text) == poly
