"""WKB phase and transport coefficients on the right of the well.

For x beyond the right turning point the decaying WKB solution is

    u(x; h) = (a_0 + h a_1 + ... + h^N a_N) exp(i phi(x) / h),
    phi(x) = i * int_beta^x (V_eps - E)^(1/2) dy,

with a_0 = (phi')^(-1/2) and a_k = f_k a_0, where f_0 = 1 and

    f_k' = (f_{k-1}'' + 2 (a_0'/a_0) f_{k-1}' + (a_0''/a_0) f_{k-1}) / (2 q),
    q = (V_eps - E)^(1/2)

(i / (2 phi') = 1 / (2 q)).  The f_k are anchored by f_k(x_max) = 0 and
integrated inward with RK4.  Since the recursion is linear and triangular,
f_k' is a linear combination of f_0 .. f_{k-1} whose coefficients are local;
they are obtained once on the whole grid with Taylor jets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from numpy.polynomial.legendre import leggauss

from . import jets
from .action import continue_sqrt
from .errors import GridTooCoarse, NotConverged, PathThroughTurningPoint
from .potential import PotentialSpec, well_interval
from .turning import TurningPair, find_turning_pair

__all__ = [
    "PhaseFunction",
    "WKBExpansion",
    "ResidualOrders",
    "phase_at",
    "phase_derivative",
    "transport_coeffs",
    "default_grid",
    "wkb_eval",
    "wkb_residual",
    "wkb_residual_order",
    "decay_exponents",
]

_GL_NODES, _GL_WEIGHTS = leggauss(16)


def _side_data(tp: TurningPair, side: str):
    if side == "right":
        return tp.beta, tp.alpha, 1.0
    if side == "left":
        return tp.alpha, tp.beta, -1.0
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def _segment_distance(p, a, b):
    d = b - a
    if d == 0:
        return abs(p - a)
    t = ((p - a) * np.conj(d)).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def _path_integral(spec, E, eps, tp, z, side, tol=1e-14, max_panels=512):
    """int_base^z (V - E)^(1/2) dw on the straight path, and the root at z.

    With w = base + (z - base) s^2 the integrand becomes
    2 (z - base) s^2 R(s), R(s) = sqrt((z - base) D(w)), where D is the
    quotient of V - E by (w - base); R is smooth and nonzero on [0, 1].
    """
    base, other, sign = _side_data(tp, side)
    z = complex(z)
    if z == base:
        return 0j, 0j
    if _segment_distance(other, base, z) < 1e-4:
        raise PathThroughTurningPoint(f"path from {base} to {z} passes the other turning point")
    c = spec.coeffs(eps).astype(complex)
    c[0] -= E
    D, _ = P.polydiv(c, np.array([-base, 1.0], dtype=complex))
    dz = z - base
    r0 = sign * np.sqrt(dz * P.polyval(base, D))

    prev = None
    panels = 1
    while True:
        edges = np.linspace(0.0, 1.0, panels + 1)
        s = (0.5 * (edges[:-1, None] + edges[1:, None]) + 0.5 * (edges[1:, None] - edges[:-1, None]) * _GL_NODES).ravel()
        wts = (0.5 * (edges[1:, None] - edges[:-1, None]) * _GL_WEIGHTS).ravel()
        s_all = np.append(s, 1.0)
        R = continue_sqrt(dz * P.polyval(base + dz * s_all**2, D), r0)
        val = np.sum(wts * 2.0 * dz * s**2 * R[:-1])
        if prev is not None and abs(val - prev) < tol * (1.0 + abs(val)):
            return complex(val), complex(R[-1])
        if panels >= max_panels:
            raise NotConverged(f"phase quadrature not converged at z = {z}")
        prev = val
        panels *= 2


def phase_at(spec: PotentialSpec, E, eps, tp: TurningPair, z, side: str = "right") -> complex:
    """phi(z) = i * int_{tp}^{z} (V_eps - E)^(1/2) dw along a straight path.

    The root is positive on the real axis beyond the turning point when
    (E, eps) = (E0, 0); on the left side the opposite root is used so that
    exp(i phi / h) decays away from the well on both sides.
    """
    return 1j * _path_integral(spec, E, eps, tp, z, side)[0]


def phase_derivative(spec: PotentialSpec, E, eps, tp: TurningPair, z, side: str = "right") -> complex:
    """phi'(z) = i (V_eps(z) - E)^(1/2) on the same branch as :func:`phase_at`."""
    return 1j * _path_integral(spec, E, eps, tp, z, side)[1]


@dataclass(frozen=True)
class PhaseFunction:
    spec: PotentialSpec
    E: complex
    eps: complex
    tp: TurningPair
    side: str = "right"

    @property
    def base_point(self) -> complex:
        return _side_data(self.tp, self.side)[0]

    @property
    def branch_sign(self) -> int:
        return int(_side_data(self.tp, self.side)[2])

    def __call__(self, z) -> complex:
        return phase_at(self.spec, self.E, self.eps, self.tp, z, self.side)

    def derivative(self, z) -> complex:
        return phase_derivative(self.spec, self.E, self.eps, self.tp, z, self.side)


@dataclass
class WKBExpansion:
    """Transport data on a real grid right of the well.

    ``a`` and ``f`` have shape (N + 1, len(grid)); ``q`` is the root
    (V_eps - E)^(1/2) on the grid and ``phase`` the values of phi there.
    """

    grid: np.ndarray
    a: np.ndarray
    f: np.ndarray
    q: np.ndarray
    phase: np.ndarray
    h_order: int
    error_estimate: float

    @property
    def a_k_values(self) -> np.ndarray:
        return self.a


def default_grid(spec: PotentialSpec, delta0=None, x_max=None, uniform_length=1.0, uniform_step=1e-3, n_geom=1500):
    """Uniform fine part from beta00 + delta0, then geometric out to x_max.

    ``x_max`` defaults to the point where the anchor error of f_1,
    of order x_max^-(1 + m0/2), drops below 1e-8.
    """
    a, b = well_interval(spec)
    if delta0 is None:
        delta0 = 0.25 * (b - a)
    if x_max is None:
        x_max = min(1e5, 1e8 ** (1.0 / (1.0 + spec.m0 / 2.0)))
    x0 = b + delta0
    x1 = x0 + uniform_length
    n_u = int(round(uniform_length / uniform_step))
    uni = x0 + uniform_step * np.arange(n_u + 1)
    if x_max <= x1:
        return uni
    geo = np.geomspace(x1, x_max, n_geom)
    return np.concatenate([uni, geo[1:]])


def _add(*terms):
    m = min(t.shape[-1] for t in terms)
    return sum(t[..., :m] for t in terms)


def _coefficient_matrices(spec, E, eps, x, q, N):
    """Local matrices M with f_k'(x) = sum_j M[x, k-1, j] f_j(x), f_0 = 1."""
    order = N + 3
    c = spec.coeffs(eps).astype(complex)
    c[0] -= E
    S = jets.poly_jet(c, x, order)
    dS = jets.deriv(S)
    inv2q = 0.5 * jets.power(S, -0.5, c0=1.0 / q)
    g = -0.25 * jets.div(dS, S)
    A = _add(-0.25 * jets.div(jets.deriv(dS), S), 5.0 / 16.0 * jets.div(jets.mul(dS, dS), jets.mul(S, S)))

    npts = len(x)
    # jets linear in the basis (f_0, ..., f_N): axis 1 is the basis index
    F = np.zeros((npts, N + 1, N + 2), dtype=complex)
    F[:, 0, 0] = 1.0
    M = np.zeros((npts, N, N + 1), dtype=complex)
    for k in range(1, N + 1):
        dF = jets.deriv(F)
        rhs = _add(jets.deriv(dF), 2.0 * jets.mul(g[:, None, :], dF), jets.mul(A[:, None, :], F))
        R = jets.mul(inv2q[:, None, :], rhs)
        M[:, k - 1, :] = R[..., 0]
        F = np.zeros((npts, N + 1, R.shape[-1] + 1), dtype=complex)
        F[:, k, 0] = 1.0
        F[..., 1:] = R / np.arange(1, R.shape[-1] + 1)
    return M


def _rk4_inward(grid, M_nodes, M_mid, N):
    y = np.zeros((len(grid), N + 1), dtype=complex)
    y[:, 0] = 1.0
    cur = y[-1].copy()

    def rhs(Mx, v):
        out = np.zeros(N + 1, dtype=complex)
        out[1:] = Mx @ v
        return out

    for j in range(len(grid) - 2, -1, -1):
        dx = grid[j] - grid[j + 1]
        k1 = rhs(M_nodes[j + 1], cur)
        k2 = rhs(M_mid[j], cur + 0.5 * dx * k1)
        k3 = rhs(M_mid[j], cur + 0.5 * dx * k2)
        k4 = rhs(M_nodes[j], cur + dx * k3)
        cur = cur + dx / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        y[j] = cur
    return y


def _interleave(grid):
    mids = 0.5 * (grid[:-1] + grid[1:])
    pts = np.empty(2 * len(grid) - 1)
    pts[0::2] = grid
    pts[1::2] = mids
    return pts


def _transport_on(spec, E, eps, grid, N, q_ref):
    pts = _interleave(grid)
    c = spec.coeffs(eps).astype(complex)
    c[0] -= E
    q = continue_sqrt(P.polyval(pts, c), q_ref)
    M = _coefficient_matrices(spec, E, eps, pts, q, N)
    f = _rk4_inward(grid, M[0::2], M[1::2], N)
    return f.T, q[0::2], q


def transport_coeffs(
    spec: PotentialSpec,
    E,
    eps=0.0,
    tp: TurningPair | None = None,
    N: int = 2,
    grid=None,
    check_tol: float = 1e-8,
) -> WKBExpansion:
    """Transport coefficients a_0 .. a_N on ``grid`` (right of the well).

    The RK4 result is compared with the same integration on every other
    grid point; a Richardson error estimate above ``check_tol`` raises
    :class:`GridTooCoarse`.
    """
    if tp is None:
        tp = find_turning_pair(spec, E, eps)
    grid = default_grid(spec) if grid is None else np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if grid[0] <= tp.beta.real:
        raise ValueError("grid must start right of the turning point")

    q_ref = phase_derivative(spec, E, eps, tp, grid[0]) / 1j
    f, q, q_all = _transport_on(spec, E, eps, grid, N, q_ref)

    err = 0.0
    if N >= 1 and len(grid) >= 5:
        coarse = grid[::-1][::2][::-1]
        f_c, _, _ = _transport_on(spec, E, eps, coarse, N, q_ref)
        idx = np.searchsorted(grid, coarse)
        err = float(np.max(np.abs(f[:, idx] - f_c)) / 15.0)
        if err > check_tol * (1.0 + float(np.max(np.abs(f)))):
            raise GridTooCoarse(f"transport step-doubling error {err:.3g} exceeds {check_tol:g}")

    a0 = continue_sqrt(1.0 / (1j * q), np.sqrt(1.0 / (1j * q[0])))
    a = f * a0[None, :]

    # phase on the grid: exact start, then Simpson on each interval
    phi0 = phase_at(spec, E, eps, tp, grid[0])
    dx = np.diff(grid)
    incr = dx / 6.0 * (q_all[0:-1:2] + 4 * q_all[1::2] + q_all[2::2])
    phase = phi0 + 1j * np.concatenate([[0.0], np.cumsum(incr)])
    return WKBExpansion(grid=grid, a=a, f=f, q=q, phase=phase, h_order=N, error_estimate=err)


def wkb_eval(expansion: WKBExpansion, phase: PhaseFunction | None, z, h, N=None):
    """Truncated WKB value at grid point ``z``.

    Returns ``(value, log_abs)``; ``log_abs`` stays finite when the value
    underflows.  The phase comes from ``phase`` when given, else from the
    values stored on the expansion.
    """
    j = int(np.argmin(np.abs(expansion.grid - z)))
    if abs(expansion.grid[j] - z) > 1e-12 * (1 + abs(z)):
        raise ValueError(f"{z} is not a grid point")
    N = expansion.h_order if N is None else N
    amp = sum(expansion.a[k, j] * h**k for k in range(N + 1))
    phi = phase(z) if phase is not None else expansion.phase[j]
    expo = 1j * phi / h
    log_abs = float(np.log(abs(amp)) + expo.real)
    return complex(amp * np.exp(expo)), log_abs


def _fd(values, d):
    """5-point first and second derivatives at interior points."""
    v = values
    d1 = (-v[4:] + 8 * v[3:-1] - 8 * v[1:-3] + v[:-4]) / (12 * d)
    d2 = (-v[4:] + 16 * v[3:-1] - 30 * v[2:-2] + 16 * v[1:-3] - v[:-4]) / (12 * d * d)
    return d1, d2


def wkb_residual(spec: PotentialSpec, E, eps, expansion: WKBExpansion, h, N, n_uniform=None):
    """RMS of exp(-i phi/h) (-h^2 d^2 + V - E) u_N on the uniform part of the grid.

    Derivatives of the amplitude use 5-point differences; phi' = i q and
    phi'' = i V'/(2 q) are exact.  Returns ``(residual, floor)`` where
    ``floor`` estimates the rounding level of the difference formulas.
    """
    x = expansion.grid
    if n_uniform is None:
        steps = np.diff(x)
        n_uniform = int(np.argmax(~np.isclose(steps, steps[0], rtol=1e-6, atol=0))) or len(steps)
        n_uniform += 1
    x = x[:n_uniform]
    d = x[1] - x[0]
    amp = sum(expansion.a[k, :n_uniform] * h**k for k in range(N + 1))
    q = expansion.q[:n_uniform]
    d1, d2 = _fd(amp, d)
    inner = slice(2, n_uniform - 2)
    dS = spec.eval_d1(x[inner], eps)
    L = -(h**2) * d2 + 2 * h * q[inner] * d1 + h * dS / (2 * q[inner]) * amp[inner]
    res = float(np.sqrt(np.mean(np.abs(L) ** 2)))
    scale = float(np.max(np.abs(amp)))
    floor = 1e-16 * scale * (h**2 * 64 / (12 * d * d) + 2 * h * float(np.max(np.abs(q))) * 18 / (12 * d))
    return res, floor


@dataclass(frozen=True)
class ResidualOrders:
    orders: list
    residuals: list
    floor_reached: bool


def wkb_residual_order(spec: PotentialSpec, E, eps=0.0, tp: TurningPair | None = None, N: int = 0, h_list=(0.1, 0.05, 0.025), expansion=None):
    """Observed p in residual ~ h^p between successive entries of ``h_list``.

    ``floor_reached`` is set when a residual is within a factor 100 of the
    rounding floor of the finite differences; the orders are still reported.
    """
    if tp is None:
        tp = find_turning_pair(spec, E, eps)
    if expansion is None or expansion.h_order < N:
        expansion = transport_coeffs(spec, E, eps, tp, N)
    res, floors = zip(*(wkb_residual(spec, E, eps, expansion, h, N) for h in h_list))
    orders = [float(np.log(res[i] / res[i + 1]) / np.log(h_list[i] / h_list[i + 1])) for i in range(len(h_list) - 1)]
    floor_reached = any(r < 100 * fl for r, fl in zip(res, floors))
    return ResidualOrders(orders=orders, residuals=list(res), floor_reached=floor_reached)


def decay_exponents(expansion: WKBExpansion, x_lo, x_hi, which="a"):
    """Log-log slopes of |a_k| (or |f_k|) against x over [x_lo, x_hi]."""
    x = expansion.grid
    sel = (x >= x_lo) & (x <= x_hi)
    data = expansion.a if which == "a" else expansion.f
    out = []
    for k in range(data.shape[0]):
        y = np.abs(data[k, sel])
        if which == "f" and k == 0:
            out.append(0.0)
            continue
        out.append(float(np.polyfit(np.log(x[sel]), np.log(y), 1)[0]))
    return out
