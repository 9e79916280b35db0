"""Command-line front end: ``ptwell <subcommand> --spec FILE ...``.

Exit codes: 0 on success, 2 when the potential violates the hypotheses,
3 on any numerical failure.  The error class name goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import GrowthViolation, HypothesisViolation, NumericalFailure, ParityViolation, SingleWellViolation
from .potential import load_potential, verify_hypotheses, well_interval

FMT = "{:.17g}"


def _num(x) -> str:
    return FMT.format(float(x))


@dataclass
class RunConfig:
    subcommand: str
    spec_path: str
    eps: float = 0.0
    h: float = 0.1
    window: tuple | None = None
    rect: tuple | None = None
    output_path: str | None = None
    energy: complex | None = None
    order: int = 2
    samples: int = 11
    nodes: int = 32
    box_l: float | None = None
    max_len: float = 20.0
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.h <= 0:
            raise ValueError("--h must be positive")
        if self.subcommand == "certify" and self.eps < 0:
            raise ValueError("certify needs eps >= 0")
        if self.window is not None and not self.window[1] > self.window[0]:
            raise ValueError("--window must satisfy A < B")
        if self.rect is not None:
            a, b, c, d = self.rect
            if not (b > a and d > c):
                raise ValueError("--rect must satisfy A < B and C < D")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _shoot_kw(cfg):
    return {} if cfg.box_l is None else {"box_L": cfg.box_l}


def _check_spec(spec):
    well_interval(spec)  # raises the specific single-well error
    rep = verify_hypotheses(spec)
    for name, ok in rep.checks.items():
        if not ok:
            raise _CHECK_ERRORS.get(name, SingleWellViolation)(f"hypothesis check '{name}' failed")
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)


_CHECK_ERRORS = {"parity": ParityViolation, "pt_identity": ParityViolation, "growth": GrowthViolation}


def _spectrum(cfg, spec) -> str:
    from .bs import attach_shooting, solve_bs

    window = cfg.window or (spec.e0 - 0.5, spec.e0 + 0.5)
    recs = solve_bs(spec, cfg.eps, cfg.h, window)
    if not cfg.extra.get("no_shoot"):
        recs = attach_shooting(recs, spec, cfg.eps, cfg.h, window, **_shoot_kw(cfg))
    rows = []
    for r in recs:
        es = r.e_shoot
        shoot = ["", ""] if es is None else [_num(es.real), _num(es.imag)]
        rows.append([r.k, _num(r.e_bs.real), _num(r.e_bs.imag), *shoot, _num(r.bs_residual), _num(r.im_abs)])
    return _csv(["k", "E_bs_re", "E_bs_im", "E_shoot_re", "E_shoot_im", "bs_residual", "im_abs"], rows)


def _action(cfg, spec) -> str:
    from .action import action_integral
    from .turning import find_turning_pair

    if cfg.energy is not None:
        Es = [cfg.energy]
    else:
        lo, hi = cfg.window or (spec.e0 - 0.5, spec.e0 + 0.5)
        Es = list(np.linspace(lo, hi, cfg.samples))
    rows, tp = [], None
    for E in Es:
        tp = find_turning_pair(spec, E, cfg.eps, seed=tp)
        av = action_integral(spec, E, cfg.eps, tp, n_nodes=cfg.nodes)
        E = complex(E)
        rows.append([_num(E.real), _num(E.imag), _num(cfg.eps), _num(av.action.real), _num(av.action.imag),
                     _num(av.period.real), _num(av.period.imag), av.nodes_used, _num(av.est_error)])
    return _csv(["E_re", "E_im", "eps", "I_re", "I_im", "T_re", "T_im", "nodes", "est_error"], rows)


def _wkb(cfg, spec) -> str:
    from .turning import find_turning_pair
    from .wkb import transport_coeffs, wkb_residual_order

    E = spec.e0 if cfg.energy is None else cfg.energy
    tp = find_turning_pair(spec, E, cfg.eps)
    N = cfg.order
    ex = transport_coeffs(spec, E, cfg.eps, tp, N)
    h_list = (cfg.h, cfg.h / 2, cfg.h / 4)
    lines = []
    for n in range(N + 1):
        ro = wkb_residual_order(spec, E, cfg.eps, tp, n, h_list, expansion=ex)
        orders = " ".join(_num(p) for p in ro.orders)
        lines.append(f"# residual_order N={n} h={' '.join(_num(x) for x in h_list)} p={orders} floor={str(ro.floor_reached).lower()}")
    header = ["x"]
    for k in range(N + 1):
        header += [f"a{k}_re", f"a{k}_im"]
    header += ["phase_re", "phase_im", "log_abs_u"]
    amp = sum(ex.a[k] * cfg.h**k for k in range(N + 1))
    log_u = np.log(np.abs(amp)) + (1j * ex.phase / cfg.h).real
    rows = []
    for j, x in enumerate(ex.grid):
        row = [_num(x)]
        for k in range(N + 1):
            row += [_num(ex.a[k, j].real), _num(ex.a[k, j].imag)]
        row += [_num(ex.phase[j].real), _num(ex.phase[j].imag), _num(log_u[j])]
        rows.append(row)
    return "\n".join(lines) + "\n" + _csv(header, rows)


def _stokes(cfg, spec) -> str:
    from .stokes import stokes_graph

    E = spec.e0 if cfg.energy is None else cfg.energy
    window = None
    if cfg.rect is not None:
        a, b, c, d = cfg.rect
        window = ((a, b), (c, d))
    g = stokes_graph(spec, E, cfg.eps, window=window, max_len=cfg.max_len)
    return json.dumps(_round(g.to_dict()), indent=1) + "\n"


def _certify(cfg, spec) -> str:
    from .shooting import real_eigen_scan, zero_count_winding

    rect = cfg.rect or (spec.e0 - 0.3, spec.e0 + 0.3, -0.1, 0.1)
    kw = _shoot_kw(cfg)
    count = zero_count_winding(spec, cfg.eps, cfg.h, rect, **kw)
    zeros = real_eigen_scan(spec, cfg.eps, cfg.h, (rect[0], rect[1]), **kw)
    out = {"rect": list(rect), "zero_count": int(count), "real_zeros": [float(z) for z in zeros], "match": int(count) == len(zeros)}
    return json.dumps(_round(out), indent=1) + "\n"


def _round(obj):
    """Floats through 17 significant digits so JSON output round-trips."""
    if isinstance(obj, float):
        return float(FMT.format(obj))
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


COMMANDS = {
    "spectrum": _spectrum,
    "action": _action,
    "wkb": _wkb,
    "stokes": _stokes,
    "certify": _certify,
}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        spec = load_potential(cfg.spec_path)
        _check_spec(spec)
        text = COMMANDS[cfg.subcommand](cfg, spec)
    except HypothesisViolation as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _energy(vals):
    if vals is None:
        return None
    return complex(vals[0], vals[1] if len(vals) > 1 else 0.0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptwell", description="Semiclassical spectra of PT-symmetric single wells.")
    sub = p.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="potential JSON file")
    common.add_argument("--eps", type=float, default=0.0)
    common.add_argument("--h", type=float, default=0.1)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--nodes", type=int, default=32, help="initial quadrature nodes")
    common.add_argument("--box-l", type=float, default=None, help="shooting box half-length")
    common.add_argument("--max-len", type=float, default=20.0, help="Stokes line length cap")

    for name, helptext in (
        ("spectrum", "Bohr-Sommerfeld levels with shooting comparison (CSV)"),
        ("action", "action and period on an energy grid (CSV)"),
        ("wkb", "transport coefficients on the right of the well (CSV)"),
        ("stokes", "Stokes lines from both turning points (JSON)"),
        ("certify", "winding count against real zeros in a rectangle (JSON)"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--window", type=float, nargs=2, metavar=("A", "B"))
        sp.add_argument("--rect", type=float, nargs=4, metavar=("A", "B", "C", "D"))
        sp.add_argument("--energy", type=float, nargs="+", metavar="E", help="energy: real part [imaginary part]")
        sp.add_argument("--order", type=int, default=2)
        sp.add_argument("--samples", type=int, default=11)
        sp.add_argument("--no-shoot", action="store_true", help="spectrum: skip the shooting column")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        subcommand=args.subcommand,
        spec_path=args.spec,
        eps=args.eps,
        h=args.h,
        window=tuple(args.window) if args.window else None,
        rect=tuple(args.rect) if args.rect else None,
        output_path=args.out,
        energy=_energy(args.energy),
        order=args.order,
        samples=args.samples,
        nodes=args.nodes,
        box_l=args.box_l,
        max_len=args.max_len,
        extra={"no_shoot": args.no_shoot},
    )
    try:
        return run(cfg)
    except ValueError as exc:
        print(f"ValueError: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
