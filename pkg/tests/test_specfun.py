import math

import pytest
from scipy.optimize import brentq
from scipy.special import spherical_jn

from maxwellfk.specfun import SERIES_SWITCH, find_a11_prime, psi1, psi1_prime, psi1_second

PUBLISHED_A11 = 2.7437  # four-decimal literature value, ±1e-4


def test_psi1_exact_values():
    assert psi1(math.pi) == pytest.approx(1.0, abs=1e-15)
    assert psi1(math.pi / 2) == pytest.approx(2 / math.pi, abs=1e-15)


def test_psi1_small_argument():
    assert psi1(1e-4) / 1e-8 == pytest.approx(1 / 3, abs=1e-6)
    assert psi1_prime(1e-4) / 1e-4 == pytest.approx(2 / 3, abs=1e-6)
    assert psi1(0.0) == 0.0


@pytest.mark.parametrize("z", [0.5, 1.0, 2.7, 5.0, 0.011, -1.3])
def test_psi1_prime_central_difference(z):
    eps = 1e-5
    fd = (psi1(z + eps) - psi1(z - eps)) / (2 * eps)
    assert abs(psi1_prime(z) - fd) < 1e-8


@pytest.mark.parametrize("z", [0.3, 1.0, 2.7, 6.0])
def test_psi1_second_central_difference(z):
    eps = 1e-5
    fd = (psi1_prime(z + eps) - psi1_prime(z - eps)) / (2 * eps)
    assert abs(psi1_second(z) - fd) < 1e-8


@pytest.mark.parametrize("z", [0.3, 1.0, 2.7, 9.0])
def test_psi1_matches_scipy_spherical_bessel(z):
    assert psi1(z) == pytest.approx(z * spherical_jn(1, z), abs=1e-14)
    oracle = spherical_jn(1, z) + z * spherical_jn(1, z, derivative=True)
    assert psi1_prime(z) == pytest.approx(oracle, abs=1e-14)


def test_series_branch_continuity():
    below = math.nextafter(SERIES_SWITCH, 0.0)
    closed = math.sin(below) / below - math.cos(below)
    assert abs(psi1(below) - closed) < 1e-12
    assert abs(psi1(below) - psi1(SERIES_SWITCH)) < 1e-12


def test_bracket_signs():
    assert psi1_prime(2.0) > 0
    assert psi1_prime(3.0) < 0


def test_find_a11_prime():
    r = find_a11_prime()
    assert abs(r.value - PUBLISHED_A11) <= 1e-4
    assert r.residual < 1e-12
    assert abs(psi1_prime(r.value)) < 1e-12
    assert r.value**2 < 3 * math.pi**2
    assert 2 < r.value < 3


def test_find_a11_prime_against_scipy_root():
    def dpsi(z):
        return spherical_jn(1, z) + z * spherical_jn(1, z, derivative=True)

    oracle = brentq(dpsi, 2.0, 3.0, xtol=1e-15)
    assert find_a11_prime().value == pytest.approx(oracle, abs=1e-12)


def test_bracket_refinement_invariance():
    assert abs(find_a11_prime(2.0, 3.0).value - find_a11_prime(2.5, 2.9).value) < 1e-12


def test_bad_bracket_raises():
    with pytest.raises(ArithmeticError):
        find_a11_prime(3.0, 3.5)
