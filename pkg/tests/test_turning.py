import numpy as np
import pytest

from conftest import shifted_roots
from ptwell.errors import NonSimpleTurningPoint, RootCollision
from ptwell.turning import find_turning_pair


def test_real_pair(harmonic):
    tp = find_turning_pair(harmonic, 1.0, 0.0)
    assert tp.alpha == pytest.approx(-1, abs=1e-13) and tp.beta == pytest.approx(1, abs=1e-13)


def test_shifted_pair(harmonic):
    tp = find_turning_pair(harmonic, 1.0, 0.2)
    a, b = shifted_roots(1.0, 0.2)
    assert abs(tp.alpha - a) < 1e-12 and abs(tp.beta - b) < 1e-12


def test_complex_energy(harmonic):
    tp = find_turning_pair(harmonic, 1 + 0.1j, 0.0)
    assert abs(tp.beta - np.sqrt(1 + 0.1j)) < 1e-12
    assert abs(tp.beta - (1.0012461141 + 0.0499377718j)) < 1e-9


def test_grid_invariants(mixed):
    Es = np.linspace(0.8, 1.2, 10)
    for eps in np.linspace(0, 0.3, 10):
        tp = None
        for E in Es:
            tp = find_turning_pair(mixed, E, eps, seed=tp)
            assert tp.residual_alpha < 1e-11 * (1 + abs(E))
            assert tp.residual_beta < 1e-11 * (1 + abs(E))
            assert abs(tp.slope_alpha) > 1e-6 and abs(tp.slope_beta) > 1e-6
            assert abs(tp.beta + np.conj(tp.alpha)) < 1e-10


def test_holomorphic_in_energy(mixed):
    # contour-integral derivative at two radii must agree
    E0, eps = 1.0, 0.1

    def deriv(r):
        zs = E0 + r * np.exp(2j * np.pi * np.arange(4) / 4)
        vals = np.array([find_turning_pair(mixed, z, eps).alpha for z in zs])
        return np.mean(vals * np.exp(-2j * np.pi * np.arange(4) / 4)) / r

    exact = 1.0 / find_turning_pair(mixed, E0, eps).slope_alpha
    assert abs(deriv(1e-3) - deriv(2e-3)) < 1e-5
    assert abs(deriv(1e-3) - exact) < 1e-5


def test_collision_at_bottom(harmonic):
    # at E = 0 both turning points merge at the origin
    with pytest.raises((RootCollision, NonSimpleTurningPoint)):
        find_turning_pair(harmonic, 1e-14, 0.0)
