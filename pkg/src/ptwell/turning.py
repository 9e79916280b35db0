"""Complex turning points alpha0(E, eps), beta0(E, eps) of the well.

The pair is continued from the real endpoints of {V0 <= E0} at
(E, eps) = (E0, 0) by Newton's method along straight segments in the
parameter space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NewtonDivergence, NonSimpleTurningPoint, RootCollision
from .potential import PotentialSpec, well_interval

__all__ = ["TurningPair", "find_turning_pair", "newton_root"]

SLOPE_MIN = 1e-6
COLLISION_TOL = 1e-8


@dataclass(frozen=True)
class TurningPair:
    alpha: complex
    beta: complex
    residual_alpha: float
    residual_beta: float
    slope_alpha: complex
    slope_beta: complex
    E: complex = 0j
    eps: complex = 0j

    @property
    def midpoint(self) -> complex:
        return 0.5 * (self.alpha + self.beta)

    @property
    def half_width(self) -> complex:
        return 0.5 * (self.beta - self.alpha)


def newton_root(spec: PotentialSpec, E, eps, z0, tol=1e-12, max_iter=50) -> complex:
    """Solve V_eps(z) = E by Newton's method from ``z0``."""
    z = complex(z0)
    scale = 1.0 + abs(E)
    for _ in range(max_iter):
        f = spec.eval(z, eps) - E
        df = spec.eval_d1(z, eps)
        if df == 0:
            raise NonSimpleTurningPoint(f"V' vanishes at {z}")
        step = f / df
        z -= step
        if abs(f) < tol * scale and abs(step) < 1e-13 * (1.0 + abs(z)):
            return z
    f = spec.eval(z, eps) - E
    if abs(f) < tol * scale:
        return z
    raise NewtonDivergence(f"Newton did not converge from {z0} (|V-E| = {abs(f):.3g})")


def _polish(spec, E, eps, alpha0, beta0) -> TurningPair:
    a = newton_root(spec, E, eps, alpha0)
    b = newton_root(spec, E, eps, beta0)
    if abs(a - b) < COLLISION_TOL:
        raise RootCollision(f"both seeds converged to {a}")
    sa, sb = complex(spec.eval_d1(a, eps)), complex(spec.eval_d1(b, eps))
    if abs(sa) < SLOPE_MIN or abs(sb) < SLOPE_MIN:
        raise NonSimpleTurningPoint(f"|V'| below {SLOPE_MIN} at a turning point")
    return TurningPair(
        alpha=a,
        beta=b,
        residual_alpha=float(abs(spec.eval(a, eps) - E)),
        residual_beta=float(abs(spec.eval(b, eps) - E)),
        slope_alpha=sa,
        slope_beta=sb,
        E=complex(E),
        eps=complex(eps),
    )


def find_turning_pair(spec: PotentialSpec, E, eps=0.0, seed: TurningPair | None = None, step=0.05) -> TurningPair:
    """Turning points continuing the well endpoints to (E, eps).

    With a ``seed`` the continuation starts from the seed's own parameters;
    otherwise from (E0, 0) and the real well endpoints.  The parameter path
    is cut into straight segments of length at most ``step`` measured as
    |dE| + |d eps|.
    """
    if seed is None:
        a0, b0 = well_interval(spec)
        start_E, start_eps = complex(spec.e0), 0j
        alpha, beta = complex(a0), complex(b0)
    else:
        start_E, start_eps = seed.E, seed.eps
        alpha, beta = seed.alpha, seed.beta
    E, eps = complex(E), complex(eps)
    dist = abs(E - start_E) + abs(eps - start_eps)
    n = max(1, int(np.ceil(dist / step)))
    for j in range(1, n):
        t = j / n
        Ej = start_E + t * (E - start_E)
        ej = start_eps + t * (eps - start_eps)
        pair = _polish(spec, Ej, ej, alpha, beta)
        alpha, beta = pair.alpha, pair.beta
    return _polish(spec, E, eps, alpha, beta)
