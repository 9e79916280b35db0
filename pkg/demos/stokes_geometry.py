"""Stokes lines of x^2 + i eps x - E from both turning points.

At real E the two turning points are joined by one Stokes line (the
shifted real segment); a small imaginary part of E breaks the connection.
Writes the polylines to stokes_lines.json for plotting elsewhere.
"""

import json

from ptwell import make_potential, stokes_graph

spec = make_potential([(1.0, 2)], [(1.0, 1)], 1.0)

out = {}
for E, eps in ((1.0, 0.0), (1.0, 0.2), (1 + 0.05j, 0.0)):
    g = stokes_graph(spec, E, eps)
    print(f"E={E}, eps={eps}: connections={g.connections}, closest approach={g.closest_approach:.2e}")
    for ln in g.lines:
        print(f"    from {ln.origin:.4f}  {ln.termination:<16} length {ln.length:6.3f}  defect {ln.invariant_defect():.1e}")
    out[f"E={E},eps={eps}"] = g.to_dict()

with open("stokes_lines.json", "w") as fh:
    json.dump(out, fh)
