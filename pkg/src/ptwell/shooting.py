"""Shooting oracle: PT-paired Wronskian, real zero scan, zero counting.

The solution decaying at the left edge of the box [-L, L] is integrated to
x = 0 with classical RK4 on u'' = (V_eps - E) u / h^2, renormalizing the
state and keeping the log of the scale factors.  The partner decaying at
the right edge is its PT image v(x) = conj(u(-conj x; conj E)), so

    W(E) = h u'(0) v(0) - u(0) h v'(0)

vanishes exactly at eigenvalues and satisfies conj(W(conj E)) = W(E) for
real eps.  Zeros are counted in a rectangle by the argument principle.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numba
import numpy as np
from numba import njit, prange
from scipy.optimize import brentq

from .errors import (
    BoxTooSmall,
    ImaginaryResidue,
    InsufficientResolution,
    StepUnstable,
    ZeroOnBoundary,
)
from .potential import PotentialSpec, well_interval

__all__ = [
    "ShotState",
    "WronskianSample",
    "default_box",
    "default_steps",
    "integrate_decaying",
    "pt_partner",
    "wronskian",
    "wronskian_many",
    "real_eigen_scan",
    "zero_count_winding",
]

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"

# the RK4 step is h / STEPS_PER_H; the contract only asks for h / 10
STEPS_PER_H = 80
RENORM_HI = 1e2
RENORM_LO = 1e-2


def _set_threads():
    cap = os.environ.get("PTWELL_THREADS")
    if cap:
        numba.set_num_threads(max(1, min(int(cap), numba.config.NUMBA_NUM_THREADS)))


@njit(cache=True)
def _horner(c, x):
    acc = c[c.shape[0] - 1]
    for k in range(c.shape[0] - 2, -1, -1):
        acc = acc * x + c[k]
    return acc


@njit(cache=True)
def _shoot(c, E, h, x0, x1, n):
    """RK4 from x0 to x1 starting on the branch decaying away from the box."""
    dx = (x1 - x0) / n
    inv_h2 = 1.0 / (h * h)
    f0 = (_horner(c, x0) - E) * inv_h2
    kappa = np.sqrt((_horner(c, x0) - E) + 0j) / h
    u = 1.0 + 0j
    p = kappa if dx > 0 else -kappa
    log_scale = 0.0
    half = 0.5 * dx
    for i in range(n):
        x = x0 + i * dx
        xm = x + half
        xn = x0 + (i + 1) * dx
        fm = (_horner(c, xm) - E) * inv_h2
        f1 = (_horner(c, xn) - E) * inv_h2
        k1u = p
        k1p = f0 * u
        k2u = p + half * k1p
        k2p = fm * (u + half * k1u)
        k3u = p + half * k2p
        k3p = fm * (u + half * k2u)
        k4u = p + dx * k3p
        k4p = f1 * (u + dx * k3u)
        u = u + dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        p = p + dx / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        mag = max(abs(u), abs(p))
        if mag > RENORM_HI or mag < RENORM_LO:
            u = u / mag
            p = p / mag
            log_scale += math.log(mag)
        f0 = f1
    return u, p, log_scale


@njit(cache=True, parallel=True)
def _shoot_many(c, Es, h, x0, x1, n):
    m = Es.shape[0]
    us = np.empty(m, dtype=np.complex128)
    ps = np.empty(m, dtype=np.complex128)
    ls = np.empty(m, dtype=np.float64)
    for j in prange(m):
        u, p, s = _shoot(c, Es[j], h, x0, x1, n)
        us[j] = u
        ps[j] = p
        ls[j] = s
    return us, ps, ls


@dataclass(frozen=True)
class ShotState:
    u: complex
    du: complex
    log_scale: float
    x: float


@dataclass(frozen=True)
class WronskianSample:
    """Scaled Wronskian; the true value is ``w * exp(log_scale)``.

    ``relative`` is |w| over the product of the norms of (u, h u') and
    (v, h v'), i.e. |sin| of the angle between the two states: a
    scale-free measure of how close E is to an eigenvalue.
    """

    E: complex
    w: complex
    log_scale: float
    relative: float


def default_box(spec: PotentialSpec, h: float) -> float:
    a, b = well_interval(spec)
    return b + max(3.0, 4.0 * math.sqrt(h)) * (b - a)


def default_steps(box_L: float, h: float) -> int:
    return int(math.ceil(box_L * STEPS_PER_H / h))


def _setup(spec, E, eps, h, box_L, n_steps):
    if h <= 0:
        raise ValueError("h must be positive")
    if box_L is None:
        box_L = default_box(spec, h)
    if n_steps is None:
        n_steps = default_steps(box_L, h)
    step = box_L / n_steps
    if step > h / 10 * (1 + 1e-12):
        raise StepUnstable(f"step {step:.3g} exceeds h/10 = {h / 10:.3g}")
    c = np.ascontiguousarray(spec.coeffs(eps), dtype=np.complex128)
    edge = complex(_horner(c, -box_L))
    Es = np.atleast_1d(np.asarray(E, dtype=complex))
    if np.any(edge.real - Es.real < 0):
        raise BoxTooSmall(f"Re V(-L) = {edge.real:.4g} is below Re E; enlarge box_L")
    # RK4 is stable for |kappa * step| below about 2.7
    if np.max(np.abs(edge - Es)) * step**2 / h**2 > 6.0:
        raise StepUnstable("step too large for the decay rate at the box edge")
    return c, float(box_L), int(n_steps)


def integrate_decaying(spec: PotentialSpec, E, eps=0.0, h=0.1, box_L=None, n_steps=None) -> ShotState:
    """Left-decaying solution carried from x = -box_L to x = 0."""
    c, L, n = _setup(spec, E, eps, h, box_L, n_steps)
    u, p, s = _shoot(c, complex(E), float(h), -L, 0.0, n)
    if not (np.isfinite(u) and np.isfinite(p)):
        raise StepUnstable("non-finite state")
    return ShotState(u=complex(u), du=complex(p), log_scale=float(s), x=0.0)


def pt_partner(state: ShotState):
    """(v(0), v'(0)) of v(x) = conj(u(-conj x)) from the state of u at x = 0."""
    return complex(np.conj(state.u)), complex(-np.conj(state.du))


def _is_real(x) -> bool:
    return complex(x).imag == 0.0


def wronskian_many(spec: PotentialSpec, Es, eps=0.0, h=0.1, box_L=None, n_steps=None, partner="pt"):
    """Vectorized Wronskian; returns arrays ``(w, log_scale, relative)``.

    ``partner="pt"`` builds the right solution as the PT image of the left
    one (valid for real eps); ``partner="direct"`` integrates it from +L.
    For real eps the direct run is the exact floating-point mirror of the
    left run at conj(E), so both give the same Schwarz-symmetric values.
    """
    Es = np.atleast_1d(np.asarray(Es, dtype=complex))
    c, L, n = _setup(spec, Es, eps, h, box_L, n_steps)
    _set_threads()
    u, p, s = _shoot_many(c, Es, float(h), -L, 0.0, n)
    if partner == "pt":
        if not _is_real(eps):
            raise ValueError("the PT partner requires real eps; use partner='direct'")
        real_axis = np.all(Es.imag == 0)
        if real_axis:
            v, dv, s2 = np.conj(u), -np.conj(p), s
        else:
            u2, p2, s2 = _shoot_many(c, np.conj(Es), float(h), -L, 0.0, n)
            v, dv = np.conj(u2), -np.conj(p2)
    elif partner == "direct":
        if np.any(np.real(_horner(c, L)) - Es.real < 0):
            raise BoxTooSmall("Re V(L) is below Re E")
        v, dv, s2 = _shoot_many(c, Es, float(h), L, 0.0, n)
    else:
        raise ValueError(f"unknown partner {partner!r}")
    a = h * p * v
    b = u * h * dv
    w = a - b
    if partner == "pt" and real_axis:
        w = 2.0 * h * np.real(p * np.conj(u)) + 0j
    if not np.all(np.isfinite(w)):
        raise StepUnstable("non-finite Wronskian")
    # |sin| of the angle between the states (u, h u') and (v, h v')
    norm_u = np.sqrt(np.abs(u) ** 2 + np.abs(h * p) ** 2)
    norm_v = np.sqrt(np.abs(v) ** 2 + np.abs(h * dv) ** 2)
    rel = np.abs(w) / (norm_u * norm_v)
    return w, s + s2, rel


def wronskian(spec: PotentialSpec, E, eps=0.0, h=0.1, box_L=None, n_steps=None, partner="pt") -> WronskianSample:
    w, s, rel = wronskian_many(spec, [E], eps, h, box_L, n_steps, partner)
    return WronskianSample(E=complex(E), w=complex(w[0]), log_scale=float(s[0]), relative=float(rel[0]))


def _expected_spacing(spec, eps, h, E):
    from .action import period

    try:
        return float(abs(2 * np.pi * h / period(spec, E, eps)))
    except Exception:
        return None


def real_eigen_scan(spec: PotentialSpec, eps, h, E_window, grid_n=None, box_L=None, n_steps=None, xtol=1e-12):
    """Real zeros of W in ``E_window`` by sign changes plus Brent refinement.

    The default grid puts at least 8 samples per expected level spacing
    2 pi h / T.  Every sample is also checked with the directly integrated
    right partner; an imaginary part above 1e-8 of the product of
    the state norms raises :class:`ImaginaryResidue`.
    """
    e_lo, e_hi = map(float, E_window)
    if not _is_real(eps):
        raise ImaginaryResidue("real eigenvalue scan needs real eps")
    eps = float(np.real(eps))
    if box_L is None:
        box_L = default_box(spec, h)
    if n_steps is None:
        n_steps = default_steps(box_L, h)
    if grid_n is None:
        spacing = _expected_spacing(spec, eps, h, 0.5 * (e_lo + e_hi)) or 2 * np.pi * h
        grid_n = max(17, int(math.ceil(8 * (e_hi - e_lo) / spacing)) + 1)
    grid = np.linspace(e_lo, e_hi, grid_n)

    w, _, _ = wronskian_many(spec, grid, eps, h, box_L, n_steps)
    wd, _, rel_d = wronskian_many(spec, grid, eps, h, box_L, n_steps, partner="direct")
    # measured against the size of the two states, since W itself passes
    # through zero at the eigenvalues
    scale = np.abs(wd) / np.where(rel_d > 0, rel_d, 1.0)
    bad = np.abs(wd.imag) > 1e-8 * scale
    if np.any(bad):
        raise ImaginaryResidue(f"|Im W| too large at E = {grid[np.argmax(bad)]}")

    wr = w.real

    def f(E):
        return wronskian_many(spec, [E], eps, h, box_L, n_steps)[0][0].real

    zeros = []
    for i in range(grid_n - 1):
        if wr[i] == 0.0:
            zeros.append(float(grid[i]))
        elif wr[i] * wr[i + 1] < 0:
            zeros.append(brentq(f, grid[i], grid[i + 1], xtol=xtol))
    if wr[-1] == 0.0:
        zeros.append(float(grid[-1]))
    return zeros


def _rect_path(rect, n):
    a, b, c, d = rect
    corners = [complex(a, c), complex(b, c), complex(b, d), complex(a, d)]
    pts = []
    for k in range(4):
        z0, z1 = corners[k], corners[(k + 1) % 4]
        t = np.arange(n) / n
        pts.append(z0 + t * (z1 - z0))
    pts = np.concatenate(pts)
    return np.append(pts, pts[0])


def zero_count_winding(
    spec: PotentialSpec,
    eps,
    h,
    rect,
    n_boundary: int = 64,
    box_L=None,
    n_steps=None,
    max_depth: int = 24,
    zero_tol: float = 1e-7,
) -> int:
    """Number of zeros of W inside ``rect = (re_min, re_max, im_min, im_max)``.

    The argument increments of W are summed counterclockwise along the
    boundary; any segment whose increment exceeds pi/2 is bisected.
    """
    partner = "pt" if _is_real(eps) else "direct"
    if box_L is None:
        box_L = default_box(spec, h)
    if n_steps is None:
        n_steps = default_steps(box_L, h)

    def sample(zs):
        w, _, rel = wronskian_many(spec, zs, eps, h, box_L, n_steps, partner)
        if np.any(rel < zero_tol):
            raise ZeroOnBoundary(f"W nearly vanishes on the boundary at E = {zs[np.argmin(rel)]}")
        return w

    z = _rect_path(rect, n_boundary)
    w = sample(z)
    for _ in range(max_depth):
        dphi = np.angle(w[1:] / w[:-1])
        bad = np.nonzero(np.abs(dphi) > np.pi / 2)[0]
        if len(bad) == 0:
            break
        zm = 0.5 * (z[bad] + z[bad + 1])
        wm = sample(zm)
        z = np.insert(z, bad + 1, zm)
        w = np.insert(w, bad + 1, wm)
    else:
        raise InsufficientResolution("argument increments stay above pi/2 after refinement")
    total = np.sum(np.angle(w[1:] / w[:-1])) / (2 * np.pi)
    count = int(round(total))
    if abs(total - count) > 0.1:
        raise InsufficientResolution(f"winding sum {total:.3f} is not near an integer")
    return count
