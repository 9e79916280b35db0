"""Bohr-Sommerfeld eigenvalues I(E_k, eps) = (k + 1/2) 2 pi h.

The leading-order condition is solved by Newton's method in E with the
period as derivative.  The h^2 correction r is estimated afterwards from
the shooting eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .action import action_integral
from .errors import EmptyWindow, NewtonDivergence, OracleMissing
from .potential import PotentialSpec
from .shooting import real_eigen_scan
from .turning import find_turning_pair

__all__ = [
    "EigenvalueRecord",
    "bs_targets",
    "solve_bs",
    "solve_bs_level",
    "attach_shooting",
    "estimate_correction",
]

GRID_POINTS = 17
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class EigenvalueRecord:
    k: int
    e_bs: complex
    e_shoot: complex | None
    im_abs: float
    bs_residual: float


def _check_window(E_window):
    lo, hi = float(E_window[0]), float(E_window[1])
    if not hi > lo:
        raise EmptyWindow(f"window [{lo}, {hi}] is empty")
    return lo, hi


def _action_grid(spec, eps, lo, hi, n=GRID_POINTS):
    """Actions on a uniform energy grid, chaining turning-point seeds."""
    Es = np.linspace(lo, hi, n)
    pairs, actions = [], []
    tp = None
    for E in Es:
        tp = find_turning_pair(spec, E, eps, seed=tp)
        pairs.append(tp)
        actions.append(action_integral(spec, E, eps, tp).action)
    return Es, pairs, np.array(actions)


def _ks(lo_action, hi_action, h):
    unit = 2 * np.pi * h
    k_min = int(np.ceil(lo_action / unit - 0.5 - 1e-12))
    k_max = int(np.floor(hi_action / unit - 0.5 + 1e-12))
    return [(k, (k + 0.5) * unit) for k in range(max(k_min, 0), k_max + 1)]


def bs_targets(spec: PotentialSpec, eps, h, E_window):
    """All ``(k, (k + 1/2) 2 pi h)`` with the target inside Re I(window)."""
    if h <= 0:
        raise ValueError("h must be positive")
    lo, hi = _check_window(E_window)
    tp_lo = find_turning_pair(spec, lo, eps)
    tp_hi = find_turning_pair(spec, hi, eps, seed=tp_lo)
    i_lo = action_integral(spec, lo, eps, tp_lo).action.real
    i_hi = action_integral(spec, hi, eps, tp_hi).action.real
    return _ks(min(i_lo, i_hi), max(i_lo, i_hi), h)


def _newton(spec, eps, target, E, tp, max_iter=50):
    for _ in range(max_iter):
        tp = find_turning_pair(spec, E, eps, seed=tp)
        av = action_integral(spec, E, eps, tp)
        f = av.action - target
        if abs(f) < 1e-13 * (1 + abs(target)):
            return E, abs(f)
        E = E - f / av.period
    tp = find_turning_pair(spec, E, eps, seed=tp)
    res = abs(action_integral(spec, E, eps, tp).action - target)
    if res < RESIDUAL_TOL:
        return E, res
    raise NewtonDivergence(f"Bohr-Sommerfeld Newton stalled at residual {res:.3g}")


def solve_bs(spec: PotentialSpec, eps, h, E_window) -> list[EigenvalueRecord]:
    """Leading-order Bohr-Sommerfeld eigenvalues inside ``E_window``."""
    if h <= 0:
        raise ValueError("h must be positive")
    lo, hi = _check_window(E_window)
    Es, pairs, actions = _action_grid(spec, eps, lo, hi)
    re_i = actions.real
    order = np.argsort(re_i)
    records = []
    for k, target in _ks(re_i.min(), re_i.max(), h):
        E = complex(np.interp(target, re_i[order], Es[order]))
        tp = pairs[int(np.argmin(np.abs(Es - E.real)))]
        E, res = _newton(spec, eps, target, E, tp)
        records.append(EigenvalueRecord(k=k, e_bs=complex(E), e_shoot=None, im_abs=abs(E.imag), bs_residual=float(res)))
    return records


def _bracket_guess(spec, eps, target):
    """Energy guess for a target action from a bracket in Re E."""
    from .potential import well_interval

    a, b = well_interval(spec)
    x = np.linspace(a, b, 401)
    v_min = float(np.min(spec.v0(x)))
    span = spec.e0 - v_min

    def re_action(E, seed):
        tp = find_turning_pair(spec, E, eps, seed=seed)
        return action_integral(spec, E, eps, tp).action.real, tp

    i0, tp0 = re_action(spec.e0, None)
    lo, hi, i_lo, i_hi, tp = spec.e0, spec.e0, i0, i0, tp0
    j = 0
    while i_lo > target and j < 40:
        j += 1
        hi, i_hi = lo, i_lo
        lo = v_min + span / 2**j
        i_lo, tp = re_action(lo, tp)
    tp = tp0
    j = 0
    while i_hi < target and j < 40:
        j += 1
        lo, i_lo = hi, i_hi
        hi = spec.e0 + span * 2**j
        i_hi, tp = re_action(hi, tp)
    if not (i_lo <= target <= i_hi):
        raise NewtonDivergence(f"could not bracket action {target}")
    if i_hi == i_lo:
        return lo
    return lo + (target - i_lo) * (hi - lo) / (i_hi - i_lo)


def solve_bs_level(spec: PotentialSpec, eps, h, k: int, E_guess=None) -> EigenvalueRecord:
    """Single Bohr-Sommerfeld level k.

    Without ``E_guess`` the Newton start is interpolated from a bracket of
    real energies around E0.
    """
    target = (k + 0.5) * 2 * np.pi * h
    if E_guess is None:
        E_guess = _bracket_guess(spec, eps, target)
    tp = find_turning_pair(spec, E_guess, eps)
    E, res = _newton(spec, eps, target, complex(E_guess), tp)
    return EigenvalueRecord(k=k, e_bs=complex(E), e_shoot=None, im_abs=abs(E.imag), bs_residual=float(res))


def attach_shooting(records, spec: PotentialSpec, eps, h, E_window, **shoot_kw):
    """Fill ``e_shoot`` with the nearest real shooting eigenvalue.

    A shooting value is attached only when it lies within half a level
    spacing of the Bohr-Sommerfeld value.
    """
    zeros = np.array(real_eigen_scan(spec, eps, h, E_window, **shoot_kw))
    out = []
    for rec in records:
        e_shoot = None
        if len(zeros):
            j = int(np.argmin(np.abs(zeros - rec.e_bs)))
            half_gap = np.pi * h / abs(action_integral(spec, rec.e_bs.real, eps).period)
            if abs(zeros[j] - rec.e_bs) < half_gap:
                e_shoot = complex(zeros[j])
        out.append(replace(rec, e_shoot=e_shoot))
    return out


def _shoot_level(spec, eps, h, e_bs, **shoot_kw):
    T = abs(action_integral(spec, e_bs.real, eps).period)
    half_gap = np.pi * h / T
    window = (e_bs.real - 0.8 * half_gap, e_bs.real + 0.8 * half_gap)
    zeros = real_eigen_scan(spec, eps, h, window, **shoot_kw)
    if len(zeros) != 1:
        raise OracleMissing(f"shooting found {len(zeros)} eigenvalues near {e_bs.real:.6g}")
    return zeros[0]


def _r(spec, eps, h, k, e_shoot):
    tp = find_turning_pair(spec, e_shoot, eps)
    return (action_integral(spec, e_shoot, eps, tp).action - (k + 0.5) * 2 * np.pi * h) / h**2


def estimate_correction(spec: PotentialSpec, eps, h, k: int, e_shoot=None, e_shoot_half=None, **shoot_kw):
    """Empirical h^2 coefficient r = (I(E_shoot) - (k + 1/2) 2 pi h) / h^2.

    Returns ``(r, stability)``.  Stability is the relative change of r when
    h is halved, comparing with the level at h/2 (index 2k or 2k + 1) whose
    Bohr-Sommerfeld energy is nearest to level k at h, so that both values
    of r sample the same energy.  Shooting values are computed when not
    given; that needs real eps.
    """
    if complex(eps).imag != 0 and (e_shoot is None or e_shoot_half is None):
        raise OracleMissing("shooting oracle needs real eps")
    eps_r = float(np.real(eps)) if complex(eps).imag == 0 else eps
    e_bs = solve_bs_level(spec, eps_r, h, k).e_bs
    if e_shoot is None:
        e_shoot = _shoot_level(spec, eps_r, h, e_bs, **shoot_kw)
    halves = [solve_bs_level(spec, eps_r, h / 2, kk, E_guess=e_bs) for kk in (2 * k, 2 * k + 1)]
    half = min(halves, key=lambda rec: abs(rec.e_bs - e_bs))
    if e_shoot_half is None:
        e_shoot_half = _shoot_level(spec, eps_r, h / 2, half.e_bs, **shoot_kw)
    r = complex(_r(spec, eps_r, h, k, e_shoot))
    r_half = complex(_r(spec, eps_r, h / 2, half.k, e_shoot_half))
    stability = abs(r_half - r) / max(abs(r), 1e-6)
    return (r.real if r.imag == 0 else r), float(stability)
