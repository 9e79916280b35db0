"""Bohr-Sommerfeld against shooting for the harmonic and a quartic well.

For x^2 the leading quantization rule is exact, so both columns agree with
(2k+1)h.  Adding 0.1 x^4 breaks that; the gap shrinks like h^2.
"""

import numpy as np

from ptwell import make_potential, real_eigen_scan, solve_bs

harmonic = make_potential([(1.0, 2)], [(1.0, 1)], 1.0)
mixed = make_potential([(1.0, 2), (0.1, 4)], [(1.0, 1)], 1.0)

h = 0.1
print("x^2, h = 0.1")
zeros = real_eigen_scan(harmonic, 0.0, h, (0.05, 0.95))
for rec, z in zip(solve_bs(harmonic, 0.0, h, (0.05, 0.95)), zeros):
    print(f"  k={rec.k}  bs={rec.e_bs.real:.12f}  shoot={z:.12f}  exact={(2 * rec.k + 1) * h:.12f}")

for h in (0.1, 0.05, 0.025):
    recs = solve_bs(mixed, 0.0, h, (0.8, 1.2))
    zeros = np.array(real_eigen_scan(mixed, 0.0, h, (0.78, 1.22)))
    gaps = [np.min(np.abs(zeros - r.e_bs.real)) for r in recs]
    print(f"x^2 + 0.1 x^4, h={h}: max |bs - shoot| = {max(gaps):.3e}   / h^2 = {max(gaps) / h**2:.4f}")
