"""Polynomial PT-symmetric potentials V_eps = V0 + i*eps*W.

V0 is real and even, W is real and odd, both given as lists of
``(coefficient, power)`` terms.  Parity is enforced structurally, so the
PT identity ``conj(V_eps(-conj z)) == V_eps(z)`` holds for every real eps.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .errors import (
    DegenerateTurningPoint,
    EmptySpec,
    GrowthViolation,
    ParityViolation,
    SingleWellViolation,
)

__all__ = [
    "PotentialSpec",
    "HypothesisReport",
    "make_potential",
    "well_interval",
    "verify_hypotheses",
    "load_potential",
    "potential_from_dict",
]


def _normalize_terms(terms, parity, name):
    merged: dict[int, float] = {}
    for term in terms:
        c, p = term
        p_int = int(p)
        if p_int != p or p_int < 0:
            raise ParityViolation(f"{name}: power {p!r} is not a nonnegative integer")
        if p_int % 2 != parity:
            kind = "even" if parity == 0 else "odd"
            raise ParityViolation(f"{name}: power {p_int} is not {kind}")
        merged[p_int] = merged.get(p_int, 0.0) + float(c)
    return tuple((c, p) for p, c in sorted(merged.items()) if c != 0.0)


def _coeff_array(terms, degree):
    out = np.zeros(degree + 1)
    for c, p in terms:
        out[p] += c
    return out


@dataclass(frozen=True)
class PotentialSpec:
    """Validated potential; build it with :func:`make_potential`."""

    v0_terms: tuple
    w_terms: tuple
    e0: float
    m0: int
    analytic_window: tuple = field(default=((-10.0, 10.0), (-10.0, 10.0)))

    @cached_property
    def degree(self) -> int:
        return max(p for _, p in self.v0_terms + self.w_terms)

    @cached_property
    def v0_coeffs(self) -> np.ndarray:
        """Coefficients of V0, lowest power first."""
        return _coeff_array(self.v0_terms, self.degree)

    @cached_property
    def w_coeffs(self) -> np.ndarray:
        return _coeff_array(self.w_terms, self.degree)

    def coeffs(self, eps=0.0) -> np.ndarray:
        """Complex coefficients of V_eps, lowest power first."""
        return self.v0_coeffs + 1j * eps * self.w_coeffs

    def v0(self, x):
        return P.polyval(x, self.v0_coeffs)

    def w(self, x):
        return P.polyval(x, self.w_coeffs)

    def eval(self, z, eps=0.0):
        """V_eps(z) by Horner evaluation; vectorized over ``z``."""
        return P.polyval(z, self.v0_coeffs) + 1j * eps * P.polyval(z, self.w_coeffs)

    def eval_d1(self, z, eps=0.0):
        return self.eval_dn(z, eps, 1)

    def eval_d2(self, z, eps=0.0):
        return self.eval_dn(z, eps, 2)

    def eval_dn(self, z, eps=0.0, n=1):
        """n-th derivative of V_eps at ``z``."""
        if n == 0:
            return self.eval(z, eps)
        dv0 = P.polyder(self.v0_coeffs, n)
        dw = P.polyder(self.w_coeffs, n)
        return P.polyval(z, dv0) + 1j * eps * P.polyval(z, dw)

    def in_window(self, z) -> bool:
        (a, b), (c, d) = self.analytic_window
        z = np.asarray(z)
        return bool(np.all((z.real >= a) & (z.real <= b) & (z.imag >= c) & (z.imag <= d)))

    def to_dict(self) -> dict:
        (a, b), (c, d) = self.analytic_window
        return {
            "v0": [[c_, p] for c_, p in self.v0_terms],
            "w": [[c_, p] for c_, p in self.w_terms],
            "e0": self.e0,
            "window": {"re": [a, b], "im": [c, d]},
        }


def _root_bound(coeffs) -> float:
    """All roots of the polynomial lie in |x| <= bound (Fujiwara's bound)."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    n = len(c) - 1
    if n < 1:
        return 1.0
    with np.errstate(over="ignore", divide="ignore"):
        ratios = [abs(c[k] / c[n]) ** (1.0 / (n - k)) for k in range(n) if c[k] != 0]
    if not ratios:
        return 1.0
    return max(1.0, 2.0 * float(max(ratios)))


def make_potential(v0_terms, w_terms, e0, window=None) -> PotentialSpec:
    """Validate term lists and build a :class:`PotentialSpec`.

    ``window`` is ``((re_min, re_max), (im_min, im_max))`` or a dict with
    ``"re"`` and ``"im"`` keys; by default it is sized from the root bound
    of ``V0 - e0``.
    """
    if not v0_terms or not w_terms:
        raise EmptySpec("both V0 and W term lists must be nonempty")
    v0 = _normalize_terms(v0_terms, 0, "V0")
    w = _normalize_terms(w_terms, 1, "W")
    if not v0 or not w:
        raise EmptySpec("term list has only zero coefficients")

    deg_v0 = max(p for _, p in v0)
    deg_w = max(p for _, p in w)
    lead = dict((p, c) for c, p in v0)[deg_v0]
    if deg_v0 > 0 and lead <= 0:
        raise GrowthViolation(f"leading V0 coefficient {lead} must be positive")
    if deg_w > deg_v0:
        warnings.warn(
            f"deg W = {deg_w} exceeds deg V0 = {deg_v0}; growth exponent taken as {deg_w}",
            stacklevel=2,
        )
    m0 = max(deg_v0, deg_w)

    c = _coeff_array(v0, deg_v0)
    c[0] -= e0
    r = _root_bound(c)
    if not np.isfinite(r) or r > 1e12:
        raise GrowthViolation(f"leading V0 coefficient {lead} is negligible against the lower terms")
    if window is None:
        window = ((-2.0 * r, 2.0 * r), (-r, r))
    elif isinstance(window, dict):
        window = (tuple(window["re"]), tuple(window["im"]))
    window = tuple((float(lo), float(hi)) for lo, hi in window)

    return PotentialSpec(v0_terms=v0, w_terms=w, e0=float(e0), m0=m0, analytic_window=window)


def potential_from_dict(data: dict) -> PotentialSpec:
    return make_potential(
        [tuple(t) for t in data["v0"]],
        [tuple(t) for t in data["w"]],
        data["e0"],
        data.get("window"),
    )


def load_potential(path) -> PotentialSpec:
    with open(Path(path)) as fh:
        return potential_from_dict(json.load(fh))


def well_interval(spec: PotentialSpec, n_scan: int = 20001):
    """Real endpoints ``(alpha00, beta00)`` of the sublevel set {V0 <= E0}.

    Roots of ``V0 - E0`` are bracketed on a uniform scan of the Cauchy root
    bound and refined to 1e-12.
    """
    c = spec.v0_coeffs.copy()
    c[0] -= spec.e0
    r = _root_bound(c)
    x = np.linspace(-r, r, n_scan)
    f = P.polyval(x, c)
    s = np.sign(f)
    roots = [float(xi) for xi, si in zip(x, s) if si == 0]
    for i in np.nonzero(s[:-1] * s[1:] < 0)[0]:
        roots.append(brentq(lambda t: P.polyval(t, c), x[i], x[i + 1], xtol=1e-14, rtol=1e-15))
    roots.sort()
    if len(roots) != 2:
        raise SingleWellViolation(f"V0 = E0 has {len(roots)} real roots in the scan window, expected 2")
    a, b = roots
    da, db = spec.eval_d1(a).real, spec.eval_d1(b).real
    if abs(da) < 1e-8 or abs(db) < 1e-8:
        raise DegenerateTurningPoint(f"V0' vanishes at a well endpoint ({da:.3g}, {db:.3g})")
    if not (da < 0 < db):
        raise SingleWellViolation("slope signs at the well endpoints are wrong")
    return a, b


@dataclass
class HypothesisReport:
    checks: dict
    details: dict
    warnings: list

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _growth_ok(coeffs, m0, alpha, x_max=1e4) -> bool:
    d = P.polyder(coeffs, alpha) if alpha else coeffs
    x = np.geomspace(1.0, x_max, 400)
    x = np.concatenate([-x, x])
    ratio = np.abs(P.polyval(x, d)) / (1.0 + np.abs(x)) ** (m0 - alpha)
    ax = np.abs(x)
    outer = ratio[ax >= x_max / 10].max()
    inner = ratio[(ax >= x_max / 100) & (ax < x_max / 10)].max()
    return bool(outer <= 1.5 * inner + 1e-300)


def verify_hypotheses(spec: PotentialSpec, sample_count: int = 200, seed: int = 0) -> HypothesisReport:
    """Sample-based certificate for the single-well PT hypotheses.

    Checks parity (structural and numerical), the single-well property and
    slope signs, the PT identity at random complex points, and the symbol
    growth bound for up to two derivatives.  Failures of the degree guard
    deg W <= deg V0 and of the lower bound V0 >= |x|^m0 / C are reported as
    warnings only.
    """
    checks, details, warns = {}, {}, []
    rng = np.random.default_rng(seed)

    structural = all(p % 2 == 0 for _, p in spec.v0_terms) and all(p % 2 == 1 for _, p in spec.w_terms)
    x = rng.uniform(-5, 5, sample_count)
    v0_defect = np.max(np.abs(spec.v0(-x) - spec.v0(x)) / (1 + np.abs(spec.v0(x))))
    w_defect = np.max(np.abs(spec.w(-x) + spec.w(x)) / (1 + np.abs(spec.w(x))))
    checks["parity"] = bool(structural and v0_defect < 1e-14 and w_defect < 1e-14)
    details["parity_defect"] = float(max(v0_defect, w_defect))

    try:
        a, b = well_interval(spec)
        checks["single_well"] = True
        checks["slope_signs"] = bool(spec.eval_d1(a).real < 0 < spec.eval_d1(b).real)
        details["well"] = (a, b)
    except (SingleWellViolation, DegenerateTurningPoint) as exc:
        checks["single_well"] = False
        checks["slope_signs"] = False
        details["well_error"] = f"{type(exc).__name__}: {exc}"

    (re0, re1), (im0, im1) = spec.analytic_window
    z = rng.uniform(re0, re1, sample_count) + 1j * rng.uniform(im0, im1, sample_count)
    pt = 0.0
    for eps in (0.0, 0.1, 0.5):
        v = spec.eval(z, eps)
        pt = max(pt, float(np.max(np.abs(np.conj(spec.eval(-np.conj(z), eps)) - v) / (1 + np.abs(v)))))
    checks["pt_identity"] = pt < 1e-13
    details["pt_defect"] = pt

    checks["growth"] = all(
        _growth_ok(c, spec.m0, alpha) for c in (spec.v0_coeffs, spec.w_coeffs) for alpha in range(3)
    )

    deg_v0 = max(p for _, p in spec.v0_terms)
    deg_w = max(p for _, p in spec.w_terms)
    if deg_w > deg_v0:
        warns.append(f"degree guard: deg W = {deg_w} > deg V0 = {deg_v0}")
    if spec.m0 > deg_v0:
        warns.append(f"lower bound: V0 does not dominate |x|^{spec.m0}")
    return HypothesisReport(checks, details, warns)
