import numpy as np
import pytest

from ptwell.errors import GridTooCoarse, PathThroughTurningPoint
from ptwell.turning import find_turning_pair
from ptwell.wkb import (
    PhaseFunction,
    decay_exponents,
    phase_at,
    transport_coeffs,
    wkb_eval,
    wkb_residual_order,
)


def closed_phase(x):
    """i * int_1^x sqrt(y^2 - 1) dy."""
    s = np.sqrt(x * x - 1)
    return 1j * (0.5 * x * s - 0.5 * np.log(x + s))


@pytest.fixture(scope="module")
def tp0(harmonic):
    return find_turning_pair(harmonic, 1.0, 0.0)


@pytest.fixture(scope="module")
def expansion(harmonic, tp0):
    return transport_coeffs(harmonic, 1.0, 0.0, tp0, 2)


def test_phase_closed_form(harmonic, tp0):
    assert abs(phase_at(harmonic, 1.0, 0.0, tp0, 2.0) - 1.073572j) < 1e-6
    assert abs(phase_at(harmonic, 1.0, 0.0, tp0, 3.0) - 3.361267j) < 1e-6
    for x in (1.2, 2.5, 6.0):
        assert abs(phase_at(harmonic, 1.0, 0.0, tp0, x) - closed_phase(x)) < 1e-12
    assert phase_at(harmonic, 1.0, 0.0, tp0, tp0.beta) == 0


def test_left_side_mirror(harmonic, tp0):
    assert abs(phase_at(harmonic, 1.0, 0.0, tp0, -2.0, "left") - phase_at(harmonic, 1.0, 0.0, tp0, 2.0)) < 1e-12


def test_eikonal(mixed):
    E, eps = 1.05 + 0.02j, 0.15
    tp = find_turning_pair(mixed, E, eps)
    rng = np.random.default_rng(1)
    for side, base in (("right", tp.beta), ("left", tp.alpha)):
        ph = PhaseFunction(mixed, E, eps, tp, side)
        sgn = 1 if side == "right" else -1
        for _ in range(100):
            z = base + sgn * rng.uniform(0.2, 2.0) + 1j * rng.uniform(-0.5, 0.5)
            d = ph.derivative(z)
            assert abs(d * d + mixed.eval(z, eps) - E) < 1e-10


def test_phase_through_turning_point(harmonic, tp0):
    with pytest.raises(PathThroughTurningPoint):
        phase_at(harmonic, 1.0, 0.0, tp0, -2.0, "right")


def test_leading_amplitude(expansion):
    j = int(np.argmin(np.abs(expansion.grid - 2.0)))
    assert expansion.grid[j] == pytest.approx(2.0, abs=1e-12)
    assert abs(abs(expansion.a[0, j]) - 3 ** -0.25) < 1e-12
    assert np.all(expansion.f[0] == 1)


def test_wkb_eval_log(expansion, harmonic, tp0):
    val, log_abs = wkb_eval(expansion, None, 2.0, 0.1, N=0)
    expect = -1.0735718591 / 0.1 + np.log(3 ** -0.25)
    assert log_abs == pytest.approx(expect, abs=1e-8)
    assert abs(np.log(abs(val)) - log_abs) < 1e-10
    _, half = wkb_eval(expansion, PhaseFunction(harmonic, 1.0, 0.0, tp0), 2.0, 0.05, N=0)
    assert (half - np.log(3 ** -0.25)) == pytest.approx(2 * (log_abs - np.log(3 ** -0.25)), rel=1e-10)


def test_first_transport_closed_form(expansion):
    # S = x^2 - 1: f_1' = (5 S'^2 / (16 S^2) - S'' / (4 S)) / (2 sqrt(S)), anchored at the grid end
    from scipy.integrate import quad

    def rhs(y):
        S = y * y - 1
        return (5 * 4 * y * y / (16 * S * S) - 2 / (4 * S)) / (2 * np.sqrt(S))

    for x in (2.0, 3.0):
        j = int(np.argmin(np.abs(expansion.grid - x)))
        ref = -quad(rhs, expansion.grid[j], expansion.grid[-1], limit=200, epsabs=1e-14)[0]
        assert abs(expansion.f[1, j] - ref) < 1e-9


def test_decay_exponent(expansion, harmonic):
    slopes = decay_exponents(expansion, 20.0, 1e3, "f")
    expect = -(1 + harmonic.m0 / 2)
    assert abs(slopes[1] - expect) < 0.15 * abs(expect)
    a_slopes = decay_exponents(expansion, 20.0, 1e3, "a")
    for k, s in enumerate(a_slopes):
        bound = -harmonic.m0 / 4 - k * (1 + harmonic.m0 / 2)
        assert abs(s - bound) < 0.15 * abs(bound)


@pytest.mark.parametrize("N, lo, hi", [(0, 1.7, 2.3), (1, 2.6, 3.4), (2, 3.5, 4.5)])
def test_residual_orders(harmonic, tp0, expansion, N, lo, hi):
    ro = wkb_residual_order(harmonic, 1.0, 0.0, tp0, N, (0.1, 0.05, 0.025), expansion=expansion)
    assert all(lo <= p <= hi for p in ro.orders) or ro.floor_reached


def test_residual_orders_complex(mixed):
    tp = find_turning_pair(mixed, 1.0, 0.2)
    for N in range(3):
        ro = wkb_residual_order(mixed, 1.0, 0.2, tp, N)
        assert all(abs(p - (N + 2)) < 0.5 for p in ro.orders)


def test_step_convergence(harmonic, tp0):
    # fourth-order stepping: error ratio close to 16 under step halving
    grid = np.linspace(1.5, 60.0, 401)
    ref = transport_coeffs(harmonic, 1.0, 0.0, tp0, 1, grid=np.linspace(1.5, 60.0, 6401))
    errs = []
    for n in (401, 801):
        g = np.linspace(1.5, 60.0, n)
        ex = transport_coeffs(harmonic, 1.0, 0.0, tp0, 1, grid=g, check_tol=1.0)
        errs.append(abs(ex.f[1, 0] - ref.f[1, 0]))
    assert 10 < errs[0] / errs[1] < 22


def test_coarse_grid_rejected(harmonic, tp0):
    with pytest.raises(GridTooCoarse):
        transport_coeffs(harmonic, 1.0, 0.0, tp0, 2, grid=np.geomspace(1.5, 100.0, 12))
