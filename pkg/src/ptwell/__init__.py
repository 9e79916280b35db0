"""Semiclassical spectra of PT-symmetric single-well Schrodinger operators.

The operator is -h^2 d^2/dx^2 + V0(x) + i eps W(x) with V0 even and W odd
polynomials.  Submodules:

- potential  the polynomial V_eps and its hypothesis checks
- turning    turning-point pairs by Newton continuation
- action     action and period integrals between the turning points
- bs         Bohr-Sommerfeld levels and the h^2 correction estimate
- wkb        WKB phase and transport coefficients
- shooting   Wronskian shooting, real scans and winding counts
- stokes     Stokes and anti-Stokes lines
"""

from .action import ActionValue, action_integral, period
from .bs import EigenvalueRecord, bs_targets, estimate_correction, solve_bs, solve_bs_level
from .errors import HypothesisViolation, NumericalFailure, PtwellError
from .potential import PotentialSpec, load_potential, make_potential, verify_hypotheses, well_interval
from .shooting import real_eigen_scan, wronskian, zero_count_winding
from .stokes import initial_directions, stokes_graph, trace_line
from .turning import TurningPair, find_turning_pair
from .wkb import PhaseFunction, phase_at, transport_coeffs, wkb_eval, wkb_residual_order

__version__ = "0.1.0"
