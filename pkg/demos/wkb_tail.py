"""WKB amplitudes right of the well and the order of the truncated residual.

Prints the decay exponents of the transport coefficients f_k and the
observed residual orders, which should be N + 2.
"""

from ptwell import find_turning_pair, make_potential, transport_coeffs, wkb_residual_order
from ptwell.wkb import decay_exponents

for name, spec, eps in (
    ("x^2", make_potential([(1.0, 2)], [(1.0, 1)], 1.0), 0.0),
    ("x^2 + 0.1 x^4, eps = 0.2", make_potential([(1.0, 2), (0.1, 4)], [(1.0, 1)], 1.0), 0.2),
):
    tp = find_turning_pair(spec, 1.0, eps)
    ex = transport_coeffs(spec, 1.0, eps, tp, 2)
    print(name)
    print("  f_k decay exponents:", [round(s, 3) for s in decay_exponents(ex, 20.0, 200.0, "f")],
          " expected -k(1 + m0/2) =", [-k * (1 + spec.m0 / 2) for k in range(3)])
    for N in range(3):
        ro = wkb_residual_order(spec, 1.0, eps, tp, N, expansion=ex)
        print(f"  N={N}: orders {[round(p, 3) for p in ro.orders]}  residuals {[f'{r:.2e}' for r in ro.residuals]}")
