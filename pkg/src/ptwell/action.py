"""Action I(E, eps) = 2 * int_alpha^beta (E - V_eps)^(1/2) dz and period dI/dE.

On the segment z = m + r t, t in [-1, 1], between the turning points

    E - V_eps(z) = r^2 (1 - t^2) g(z),

where g is the polynomial quotient of V_eps - E by (z - alpha)(z - beta).
The square-root zeros at the endpoints are then carried by Chebyshev weights:
second kind for the action, first kind for the period.  The branch of
sqrt(g) is principal at the midpoint and continued node to node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import BranchJump, NotConverged
from .potential import PotentialSpec
from .turning import TurningPair, find_turning_pair

__all__ = [
    "ActionValue",
    "action_integral",
    "period",
    "period_fd",
    "deflated_quotient",
    "continue_sqrt",
]

MAX_NODES = 4096


@dataclass(frozen=True)
class ActionValue:
    action: complex
    period: complex
    nodes_used: int
    converged: bool
    est_error: float
    E: complex = 0j
    eps: complex = 0j


def deflated_quotient(spec: PotentialSpec, E, eps, tp: TurningPair) -> np.ndarray:
    """Coefficients of g = (V_eps - E) / ((z - alpha)(z - beta)), lowest first.

    The division remainder is of the size of the turning-point residuals
    and is dropped, which gives g(alpha) = -V'(alpha)/(beta - alpha) and
    g(beta) = V'(beta)/(beta - alpha) without a 0/0.
    """
    c = spec.coeffs(eps).astype(complex)
    c[0] -= E
    a, b = tp.alpha, tp.beta
    q, _ = P.polydiv(c, np.array([a * b, -(a + b), 1.0], dtype=complex))
    return q


def continue_sqrt(values: np.ndarray, ref: complex, rel_tol: float = 1e-3) -> np.ndarray:
    """Square roots of ``values`` continued along the sequence from ``ref``.

    Each root is the one of the two nearer to the previous root.  Raises
    :class:`BranchJump` when both candidates are equally near.
    """
    out = np.empty(len(values), dtype=complex)
    prev = ref
    for i, v in enumerate(values):
        s = np.sqrt(complex(v))
        d_plus, d_minus = abs(s - prev), abs(s + prev)
        if abs(d_plus - d_minus) <= rel_tol * 0.5 * (d_plus + d_minus):
            raise BranchJump(f"square-root branch ambiguous at step {i} (value {v})")
        if d_minus < d_plus:
            s = -s
        out[i] = s
        prev = s
    return out


def _branch_on_nodes(q, tp: TurningPair, t: np.ndarray) -> np.ndarray:
    """sqrt(g(m + r t)) on nodes ``t``, principal at t = 0, continued outward."""
    m, r = tp.midpoint, tp.half_width
    center = np.sqrt(complex(P.polyval(m, q)))
    order = np.argsort(np.abs(t), kind="stable")
    g = P.polyval(m + r * t, q)
    out = np.empty(len(t), dtype=complex)
    right = order[t[order] >= 0]
    left = order[t[order] < 0]
    if len(right):
        out[right] = continue_sqrt(g[right], center)
    if len(left):
        out[left] = continue_sqrt(g[left], center)
    return out


def _action_n(q, tp, n):
    k = np.arange(1, n + 1)
    theta = k * np.pi / (n + 1)
    t = np.cos(theta)
    w = np.pi / (n + 1) * np.sin(theta) ** 2
    G = _branch_on_nodes(q, tp, t)
    return 2.0 * tp.half_width**2 * np.sum(w * G)


def _period_n(q, tp, n):
    k = np.arange(1, n + 1)
    t = np.cos((2 * k - 1) * np.pi / (2 * n))
    G = _branch_on_nodes(q, tp, t)
    return np.pi / n * np.sum(1.0 / G)


def _doubling(fn, q, tp, n_nodes, tol_rel):
    n = max(2, int(n_nodes))
    prev = fn(q, tp, n)
    while True:
        n2 = 2 * n
        cur = fn(q, tp, n2)
        err = abs(cur - prev)
        if err < tol_rel * (1.0 + abs(cur)):
            return complex(cur), n2, float(err), True
        if n2 >= MAX_NODES:
            return complex(cur), n2, float(err), False
        n, prev = n2, cur


def action_integral(
    spec: PotentialSpec,
    E,
    eps=0.0,
    tp: TurningPair | None = None,
    n_nodes: int = 32,
    tol: float = 1e-12,
    strict: bool = True,
) -> ActionValue:
    """Action and period at (E, eps), each validated by node doubling.

    ``est_error`` is the larger of the two doubling differences.  With
    ``strict`` a non-converged result raises :class:`NotConverged`.
    """
    if tp is None:
        tp = find_turning_pair(spec, E, eps)
    q = deflated_quotient(spec, E, eps, tp)
    I, n_i, err_i, ok_i = _doubling(_action_n, q, tp, n_nodes, tol)
    T, n_t, err_t, ok_t = _doubling(_period_n, q, tp, n_nodes, tol)
    converged = ok_i and ok_t
    if strict and not converged:
        raise NotConverged(f"action quadrature not converged at E={E} (err {max(err_i, err_t):.3g})")
    return ActionValue(
        action=I,
        period=T,
        nodes_used=max(n_i, n_t),
        converged=converged,
        est_error=max(err_i, err_t),
        E=complex(E),
        eps=complex(eps),
    )


def period(spec: PotentialSpec, E, eps=0.0, tp: TurningPair | None = None, n_nodes: int = 32) -> complex:
    """T(E, eps) = int_alpha^beta (E - V_eps)^(-1/2) dz = dI/dE."""
    if tp is None:
        tp = find_turning_pair(spec, E, eps)
    q = deflated_quotient(spec, E, eps, tp)
    T, _, err, ok = _doubling(_period_n, q, tp, n_nodes, 1e-12)
    if not ok:
        raise NotConverged(f"period quadrature not converged at E={E} (err {err:.3g})")
    return T


def period_fd(spec: PotentialSpec, E, eps=0.0, tp: TurningPair | None = None, delta: float = 1e-5) -> complex:
    """Centered difference (I(E + delta) - I(E - delta)) / (2 delta)."""
    if tp is None:
        tp = find_turning_pair(spec, E, eps)
    plus = find_turning_pair(spec, E + delta, eps, seed=tp)
    minus = find_turning_pair(spec, E - delta, eps, seed=tp)
    i_plus = action_integral(spec, E + delta, eps, plus).action
    i_minus = action_integral(spec, E - delta, eps, minus).action
    return (i_plus - i_minus) / (2 * delta)
