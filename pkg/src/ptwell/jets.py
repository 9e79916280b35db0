"""Truncated Taylor series arithmetic.

A jet is an array whose last axis holds the normalized Taylor coefficients
f(x), f'(x), f''(x)/2, ...; leading axes broadcast, so a whole grid of
expansion points is handled at once.
"""

import numpy as np
from numpy.polynomial import polynomial as P


def poly_jet(coeffs, x, order):
    """Taylor coefficients of a polynomial at points ``x``."""
    x = np.asarray(x)
    out = np.zeros(x.shape + (order + 1,), dtype=complex)
    c = np.asarray(coeffs, dtype=complex)
    fact = 1.0
    for n in range(order + 1):
        if n:
            c = P.polyder(c) if len(c) > 1 else np.zeros(1, dtype=complex)
            fact *= n
        out[..., n] = P.polyval(x, c) / fact
    return out


def mul(a, b):
    m = min(a.shape[-1], b.shape[-1])
    out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (m,), dtype=complex)
    for n in range(m):
        for j in range(n + 1):
            out[..., n] += a[..., j] * b[..., n - j]
    return out


def div(a, b):
    m = min(a.shape[-1], b.shape[-1])
    out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (m,), dtype=complex)
    for n in range(m):
        acc = a[..., n].astype(complex)
        for j in range(1, n + 1):
            acc = acc - b[..., j] * out[..., n - j]
        out[..., n] = acc / b[..., 0]
    return out


def power(a, p, c0=None):
    """a**p with the constant term ``c0`` (pick the branch there)."""
    m = a.shape[-1]
    out = np.zeros(a.shape, dtype=complex)
    out[..., 0] = a[..., 0] ** p if c0 is None else c0
    for n in range(1, m):
        acc = np.zeros(a.shape[:-1], dtype=complex)
        for j in range(1, n + 1):
            acc = acc + (p * j - (n - j)) * a[..., j] * out[..., n - j]
        out[..., n] = acc / (n * a[..., 0])
    return out


def deriv(a):
    n = np.arange(1, a.shape[-1])
    return a[..., 1:] * n


def integ(a, value):
    """Jet of the antiderivative with the given value at the point."""
    n = np.arange(1, a.shape[-1] + 1)
    out = np.empty(a.shape[:-1] + (a.shape[-1] + 1,), dtype=complex)
    out[..., 0] = value
    out[..., 1:] = a / n
    return out


def const(value, order):
    out = np.zeros(np.shape(value) + (order + 1,), dtype=complex)
    out[..., 0] = value
    return out
