import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import beta as B

from ptwell.action import action_integral, continue_sqrt, period, period_fd
from ptwell.errors import BranchJump
from ptwell.turning import find_turning_pair


def test_harmonic(harmonic):
    av = action_integral(harmonic, 1.0, 0.0)
    assert abs(av.action - np.pi) < 1e-12
    assert abs(av.period - np.pi) < 1e-12
    assert av.converged and av.est_error < 1e-10


def test_shifted(harmonic):
    av = action_integral(harmonic, 1.0, 0.2)
    assert abs(av.action - np.pi * 0.99) < 1e-12
    assert abs(av.period - np.pi) < 1e-12


def test_quartic_beta_function(quartic):
    # 4 int_0^1 sqrt(1 - x^4) dx and 2 int_0^1 (1 - x^4)^(-1/2) dx
    I_exact = B(0.25, 1.5)
    T_exact = 0.5 * B(0.25, 0.5)
    av = action_integral(quartic, 1.0, 0.0)
    assert abs(av.action - I_exact) < 1e-11
    assert abs(av.period - T_exact) < 1e-11
    assert av.period.real == pytest.approx(2.62206, abs=1e-5)


def test_against_quad(mixed):
    a, b = find_turning_pair(mixed, 1.3, 0.0).alpha.real, find_turning_pair(mixed, 1.3, 0.0).beta.real
    ref = 2 * quad(lambda x: np.sqrt(max(1.3 - mixed.v0(x), 0.0)), a, b, epsabs=1e-13)[0]
    assert abs(action_integral(mixed, 1.3, 0.0).action - ref) < 1e-10


def test_period_matches_difference(mixed):
    for E, eps in [(1.0, 0.0), (1.1, 0.2), (0.9 + 0.05j, 0.1)]:
        tp = find_turning_pair(mixed, E, eps)
        assert abs(period(mixed, E, eps, tp) - period_fd(mixed, E, eps, tp)) < 1e-6


def test_schwarz_and_reality(mixed):
    for eps in (0.0, 0.1, 0.2):
        for E in (0.9 + 0.1j, 1.1 - 0.07j, 1.0 + 0.2j):
            a = action_integral(mixed, E, eps).action
            b = action_integral(mixed, np.conj(E), eps).action
            assert abs(np.conj(b) - a) < 1e-9
        assert abs(action_integral(mixed, 1.05, eps).action.imag) < 1e-9


def test_monotone_on_real_axis(mixed):
    Es = np.linspace(0.7, 1.3, 7)
    I = [action_integral(mixed, E, 0.0).action.real for E in Es]
    assert np.all(np.diff(I) > 0)
    assert all(action_integral(mixed, E, 0.0).period.real > 0 for E in Es)


def test_spectral_convergence(mixed):
    from ptwell.action import _action_n, deflated_quotient

    tp = find_turning_pair(mixed, 1.0, 0.1)
    q = deflated_quotient(mixed, 1.0, 0.1, tp)
    vals = [_action_n(q, tp, n) for n in (4, 8, 16, 32)]
    diffs = np.abs(np.diff(vals))
    assert diffs[1] < 0.1 * diffs[0]


def test_node_count_override(mixed):
    a = action_integral(mixed, 1.0, 0.1, n_nodes=32).action
    b = action_integral(mixed, 1.0, 0.1, n_nodes=64).action
    assert abs(a - b) < 1e-10


def test_continue_sqrt_tracks_branch():
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 200))
    r = continue_sqrt(z, 1.0)
    assert abs(r[-1] + 1) < 1e-12  # one turn flips the sign
    with pytest.raises(BranchJump):
        continue_sqrt(np.array([-1.0]), 1.0)
