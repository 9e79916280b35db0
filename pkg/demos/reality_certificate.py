"""Counting eigenvalues in a complex box two ways.

The winding number of the Wronskian around [E0 - 0.3, E0 + 0.3] x [-0.1, 0.1]i
counts every eigenvalue inside, real or not.  When it equals the number of
real zeros found on the axis, no eigenvalue has left the real line.
"""

import time

from ptwell import make_potential, real_eigen_scan, zero_count_winding
from ptwell.errors import ZeroOnBoundary

specs = {
    "x^2 + i eps x": make_potential([(1.0, 2)], [(1.0, 1)], 1.0),
    "x^2 + x^4 + i eps x^3": make_potential([(1.0, 2), (1.0, 4)], [(1.0, 3)], 1.0),
}

for name, spec in specs.items():
    print(name)
    for eps in (0.0, 0.1, 0.2, 0.4):
        for h in (0.1, 0.05):
            t = time.time()
            rect = (spec.e0 - 0.3, spec.e0 + 0.3, -0.1, 0.1)
            try:
                n = zero_count_winding(spec, eps, h, rect)
            except ZeroOnBoundary as exc:
                # at eps = 0 the harmonic levels (2k+1)h land on the box edges
                print(f"  eps={eps:<4} h={h:<5} contour hits an eigenvalue: {exc}")
                continue
            real = real_eigen_scan(spec, eps, h, rect[:2])
            tag = "real" if n == len(real) else "NOT all real"
            print(f"  eps={eps:<4} h={h:<5} winding={n}  real zeros={len(real)}  {tag}  ({time.time() - t:.2f}s)")
