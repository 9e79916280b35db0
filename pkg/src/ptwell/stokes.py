"""Stokes and anti-Stokes lines of V_eps - E.

A Stokes line from a turning point t is a curve along which
Im int_t^z (-(V_eps - E))^(1/2) dw = 0; on an anti-Stokes line the real part
vanishes instead.  With q = (-(V_eps - E))^(1/2) tracked continuously, the
unit-speed fields

    dz/ds = conj(q) / |q|        (q dz > 0,  Stokes)
    dz/ds = i conj(q) / |q|      (q dz in iR, anti-Stokes)

keep the respective part constant, so the lines are traced as ODE
trajectories in arclength.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import BranchJump, NonSimpleTurningPoint, StalledStep
from .turning import SLOPE_MIN, TurningPair, find_turning_pair

__all__ = [
    "StokesPolyline",
    "StokesGraph",
    "initial_directions",
    "turning_points",
    "trace_line",
    "stokes_graph",
    "emanation_angle",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)

MAX_STEP = 1e-2
START_OFFSET = 1e-3
STOP_RADIUS = 1e-3


@dataclass
class StokesPolyline:
    kind: str
    points: np.ndarray
    start_direction: complex
    termination: str
    which: complex | None = None
    phase_along: np.ndarray = field(default_factory=lambda: np.zeros(0))
    invariant: np.ndarray = field(default_factory=lambda: np.zeros(0))
    arclength: np.ndarray = field(default_factory=lambda: np.zeros(0))
    origin: complex = 0j

    @property
    def length(self) -> float:
        return float(self.arclength[-1]) if len(self.arclength) else 0.0

    def invariant_defect(self) -> float:
        """max |conserved part| / arclength over the line."""
        s = np.maximum(self.arclength, 1e-300)
        return float(np.max(np.abs(self.invariant) / s)) if len(s) else 0.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "start": [self.origin.real, self.origin.imag],
            "dir": [self.start_direction.real, self.start_direction.imag],
            "points": [[z.real, z.imag] for z in self.points],
            "termination": self.termination if self.which is None else f"{self.termination}({self.which.real:.17g}{self.which.imag:+.17g}j)",
        }


def _check_kind(kind):
    if kind not in ("Stokes", "antiStokes"):
        raise ValueError(f"kind must be 'Stokes' or 'antiStokes', not {kind!r}")


def initial_directions(spec, E, eps, tp_point, kind: str = "Stokes") -> np.ndarray:
    """Three unit directions in which lines leave a simple turning point.

    Near t, -(V - E) ~ -c (z - t) with c = V'(t), so the integral behaves
    like (-c)^(1/2) (z - t)^(3/2) and is real (Stokes) or imaginary
    (anti-Stokes) on three rays.  Sorted by angle in (-pi, pi].
    """
    _check_kind(kind)
    c = complex(spec.eval_d1(tp_point, eps))
    if abs(c) < SLOPE_MIN:
        raise NonSimpleTurningPoint(f"V'(t) = {c} at t = {tp_point}")
    shift = 0.0 if kind == "Stokes" else np.pi
    theta = (shift - np.angle(-c) + 2 * np.pi * np.arange(3)) / 3
    theta = np.angle(np.exp(1j * theta))
    return np.exp(1j * np.sort(theta))


def turning_points(spec, E, eps) -> np.ndarray:
    """All zeros of V_eps - E."""
    c = spec.coeffs(eps).astype(complex)
    c[0] -= E
    return np.roots(c[::-1])


def _q(c, z):
    return np.sqrt(-complex(P.polyval(z, c)))


def _near(q, prev):
    dp, dm = abs(q - prev), abs(q + prev)
    if abs(dp - dm) <= 1e-3 * 0.5 * (dp + dm):
        raise BranchJump(f"square-root branch ambiguous near q = {q}")
    return q if dp <= dm else -q


def _initial_piece(c, t, z, q_end):
    """int_t^z q dw on the segment, q = sqrt(-(V - E)) ending at ``q_end``.

    With w = t + (z - t) u^2 and V - E = (w - t) D(w) the integrand is
    2 (z - t) u^2 sqrt(-(z - t) D(w)), smooth in u.
    """
    D, _ = P.polydiv(c, np.array([-t, 1.0], dtype=complex))
    u = 0.5 * (_GL_X + 1.0)
    dz = z - t
    r = np.sqrt(-dz * P.polyval(t + dz * u**2, D))
    r_end = np.sqrt(-dz * P.polyval(z, D))
    # one sign for the whole segment: D does not vanish near t
    sign = 1.0 if abs(r_end - q_end) < abs(r_end + q_end) else -1.0
    return complex(sign * np.sum(0.5 * _GL_W * 2.0 * dz * u**2 * r))


def trace_line(
    spec,
    E,
    eps,
    start,
    direction,
    kind: str = "Stokes",
    max_len: float = 20.0,
    window=None,
    max_step: float = MAX_STEP,
    stop_points=None,
) -> StokesPolyline:
    """Trace one line leaving the turning point ``start`` along ``direction``.

    The trace begins START_OFFSET away from ``start``.  Steps are RK4 in
    arclength, bounded by ``max_step`` and a quarter of the distance to the
    nearest turning point.  It stops on leaving ``window``
    ((re0, re1), (im0, im1)), after ``max_len``, within STOP_RADIUS of another turning point
    (``stop_points``, default all zeros of V - E) or on an ambiguous branch.
    """
    _check_kind(kind)
    start = complex(start)
    direction = complex(direction) / abs(direction)
    window = spec.analytic_window if window is None else window
    re0, re1, im0, im1 = np.ravel(window)
    c = spec.coeffs(eps).astype(complex)
    c[0] -= E
    tps = turning_points(spec, E, eps)
    stops = tps if stop_points is None else np.asarray(stop_points, dtype=complex)
    stops = stops[np.abs(stops - start) > 10 * STOP_RADIUS]
    all_tps = tps

    rot = 1.0 if kind == "Stokes" else 1j

    def vel(q):
        return rot * np.conj(q) / abs(q)

    z = start + START_OFFSET * direction
    q = _q(c, z)
    if (vel(q) * np.conj(direction)).real < 0:
        q = -q
    phi = _initial_piece(c, start, z, q)
    # the ray is only tangent to the line; move the start onto the level set
    normal = 1j if kind == "Stokes" else 1.0
    for _ in range(3):
        cons = phi.imag if kind == "Stokes" else phi.real
        z = z - cons / abs(q) * normal * np.conj(q) / abs(q)
        q = _near(_q(c, z), q)
        phi = _initial_piece(c, start, z, q)

    pts, phases, s_list = [z], [phi], [START_OFFSET]
    s = START_OFFSET
    termination, which = "MaxLength", None

    def field_at(zz, qprev):
        qq = _near(_q(c, zz), qprev)
        return vel(qq), qq

    try:
        while s < max_len:
            dist_all = np.min(np.abs(all_tps - z))
            ds = min(max_step, 0.25 * dist_all, max_len - s)
            if ds < 1e-12:
                raise StalledStep(f"step underflow at z = {z}")
            k1, q1 = field_at(z, q)
            k2, q2 = field_at(z + 0.5 * ds * k1, q1)
            k3, q3 = field_at(z + 0.5 * ds * k2, q2)
            z_new = z + ds * k3
            k4, q4 = field_at(z_new, q3)
            z_new = z + ds / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            q_new = _near(_q(c, z_new), q4)
            q_mid = _near(_q(c, 0.5 * (z + z_new)), q)
            phi = phi + (z_new - z) / 6.0 * (q + 4 * q_mid + q_new)
            z, q, s = z_new, q_new, s + ds
            pts.append(z)
            phases.append(phi)
            s_list.append(s)
            if not (re0 <= z.real <= re1 and im0 <= z.imag <= im1):
                termination = "LeftWindow"
                break
            if len(stops):
                d = np.abs(stops - z)
                j = int(np.argmin(d))
                if d[j] < STOP_RADIUS:
                    termination, which = "NearTurningPoint", complex(stops[j])
                    break
    except BranchJump:
        termination = "BranchJump"

    phases = np.array(phases)
    if kind == "Stokes":
        along, inv = phases.real, phases.imag
    else:
        along, inv = phases.imag, phases.real
    return StokesPolyline(
        kind=kind,
        points=np.array(pts),
        start_direction=direction,
        termination=termination,
        which=which,
        phase_along=along,
        invariant=inv,
        arclength=np.array(s_list),
        origin=start,
    )


def emanation_angle(line: StokesPolyline, r1: float = 2e-3, r2: float = 4e-3) -> float:
    """Angle of the traced line at its turning point.

    arg(z - t) is read at distances r1 and r2 from the origin and linearly
    extrapolated to distance zero, which removes the first-order bending.
    """
    d = np.abs(line.points - line.origin)
    ang = np.unwrap(np.angle(line.points - line.origin))
    a1 = np.interp(r1, d, ang)
    a2 = np.interp(r2, d, ang)
    a0 = a1 - (a2 - a1) * r1 / (r2 - r1)
    return float(np.angle(np.exp(1j * a0)))


@dataclass
class StokesGraph:
    pair: TurningPair
    lines: list
    connections: int
    connecting: list
    closest_approach: float

    def to_dict(self) -> dict:
        return {
            "connections": self.connections,
            "closest_approach": self.closest_approach,
            "alpha": [self.pair.alpha.real, self.pair.alpha.imag],
            "beta": [self.pair.beta.real, self.pair.beta.imag],
            "lines": [ln.to_dict() for ln in self.lines],
        }


def stokes_graph(spec, E, eps, window=None, max_len: float = 20.0, max_step: float = MAX_STEP, tp=None) -> StokesGraph:
    """Trace the three Stokes lines from each turning point of the pair.

    A line connects when it ends within STOP_RADIUS of the other point of
    the pair.  The same geometric curve is found from both ends, so the
    count is the larger of the two one-sided counts.  ``closest_approach``
    is the smallest distance from any line to the opposite turning point.
    """
    if tp is None:
        tp = find_turning_pair(spec, E, eps)
    lines, connecting = [], []
    counts = {}
    closest = np.inf
    for name, here, there in (("alpha", tp.alpha, tp.beta), ("beta", tp.beta, tp.alpha)):
        counts[name] = 0
        for d in initial_directions(spec, E, eps, here):
            ln = trace_line(spec, E, eps, here, d, "Stokes", max_len=max_len, window=window, max_step=max_step)
            lines.append(ln)
            closest = min(closest, float(np.min(np.abs(ln.points - there))))
            if ln.termination == "NearTurningPoint" and abs(ln.which - there) < 10 * STOP_RADIUS:
                counts[name] += 1
                connecting.append(ln)
    return StokesGraph(
        pair=tp,
        lines=lines,
        connections=max(counts.values()),
        connecting=connecting,
        closest_approach=closest,
    )
