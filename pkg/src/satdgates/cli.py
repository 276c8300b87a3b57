"""Command-line front end: pulse inspection, single gate runs, figure sweeps.

Frequencies on the command line are linear MHz (converted to rad/us
internally); the smoothing width is given in ns.  Exit codes: 0 success,
2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path as FsPath

import numpy as np

from . import __version__
from .errors import ContractViolation, SATDError
from .experiments import (SWEEP_TOL, drive_for_gate, eds_comparison,
                          emit_pulse_comparison, run_gate,
                          sweep_amplitude_ratio, sweep_gz_diagnostics,
                          sweep_hyperfine, sweep_lindblad,
                          sweep_phase_smoothing, sweep_systematic_errors)
from .gates import GateKind, GateSpec, gate_from_name
from .pulses import DEFAULT_OMEGA0
from .plotting import render_sweep

TWO_PI = 2.0 * math.pi

SWEEP_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "figA1", "figA2")

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _mhz(value: float) -> float:
    """Linear MHz -> angular rad/us."""
    return TWO_PI * value


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--gate", default="s",
                    help="gate name: s, not, cs, cnot, custom (default s)")
    sp.add_argument("--gamma-g", type=float, default=None,
                    help="geometric phase in rad (required for --gate custom)")
    sp.add_argument("--chi", type=float, default=None, choices=(0.0, math.pi / 2),
                    help="custom-gate rotation axis: 0 (z) or pi/2 (x)")
    sp.add_argument("--eta", type=float, default=2.0,
                    help="detuning-to-Rabi amplitude ratio Delta0/Omega0")
    sp.add_argument("--x", type=float, default=2.0,
                    help="dimensionless quarter duration tau*Omega0")
    sp.add_argument("--omega0-mhz", type=float, default=DEFAULT_OMEGA0 / TWO_PI,
                    help="Rabi amplitude Omega0/2pi in MHz (default 3)")
    sp.add_argument("--phi2", type=float, default=None,
                    help="second meridian azimuth in rad (overrides gamma-g)")
    sp.add_argument("--sigma-ns", type=float, default=0.0,
                    help="phase-jump smoothing width in ns (0 = hard jump)")
    sp.add_argument("--delta", type=float, default=0.0,
                    help="static detuning error, fraction of Omega0")
    sp.add_argument("--eps", type=float, default=0.0,
                    help="static Rabi amplitude error, fractional")
    sp.add_argument("--kappa1", type=float, default=0.0,
                    help="decay rate in 1/us")
    sp.add_argument("--kappa2", type=float, default=0.0,
                    help="dephasing rate in 1/us")
    sp.add_argument("--ahf-mhz", type=float, default=130.0,
                    help="hyperfine splitting A_hf/2pi in MHz (controlled gates)")
    sp.add_argument("--no-gz", action="store_true",
                    help="disable the dynamical-phase-cancelling g_z control")
    sp.add_argument("--satd", dest="satd", action="store_true", default=True,
                    help="use the corrected pulses (default)")
    sp.add_argument("--no-satd", dest="satd", action="store_false",
                    help="propagate the bare adiabatic pulses")
    sp.add_argument("--tqd", action="store_true",
                    help="comparison mode: exact counterdiabatic field instead")
    sp.add_argument("--out", type=FsPath, default=FsPath("."),
                    help="output directory")
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker processes for sweep rows")
    sp.add_argument("--tol", type=float, default=None,
                    help="propagator convergence tolerance (Frobenius)")
    sp.add_argument("--config", type=FsPath, default=None,
                    help="JSON config file; flags override its keys")


def _load_config(args: argparse.Namespace) -> None:
    if args.config is None:
        return
    doc = json.loads(FsPath(args.config).read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ContractViolation("config file must contain a JSON object")
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ContractViolation(f"unknown config key: {key}")
        # flags explicitly given on the command line win; argparse has no
        # cheap provenance, so config only fills attributes still at default
        parser_default = _DEFAULTS.get(attr)
        if getattr(args, attr) == parser_default:
            setattr(args, attr, value)


_DEFAULTS: dict = {}


def _snapshot_defaults(parser: argparse.ArgumentParser) -> None:
    for action in parser._actions:  # noqa: SLF001 — argparse keeps no public map
        if action.dest != "help":
            _DEFAULTS.setdefault(action.dest, action.default)


def _resolve_gate(args) -> GateSpec:
    kind = None
    if args.gate.lower() == "custom":
        if args.chi is None or args.gamma_g is None:
            raise ContractViolation("--gate custom requires --chi and --gamma-g")
        kind = GateKind.UZ if args.chi == 0.0 else GateKind.UX
    gamma_g = args.gamma_g
    if args.phi2 is not None:
        gamma_g = math.pi - args.phi2
    return gate_from_name(args.gate, gamma_g=gamma_g, kind=kind)


def _emit(res, out_dir: FsPath, stem: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    res.write_csv(csv_path)
    res.write_json(out_dir / f"{stem}.json")
    render_sweep(res, out_dir / f"{stem}.png")
    print(f"wrote {csv_path} (+ .json, .png)")


def cmd_pulses(args) -> int:
    g = _resolve_gate(args)
    if g.kind.is_controlled:
        raise ContractViolation("pulse inspection is single-qubit; use s/not")
    p = drive_for_gate(g, args.eta, args.x, omega0=_mhz(args.omega0_mhz),
                       sigma=args.sigma_ns * 1e-3)
    res = emit_pulse_comparison(p, use_gz=not args.no_gz)
    if not args.satd:
        res.metadata["note"] = "corrected columns shown for reference"
    _emit(res, args.out, f"pulses_{args.gate}")
    return 0


def cmd_gate(args) -> int:
    g = _resolve_gate(args)
    report = run_gate(
        g, eta=args.eta, x=args.x, omega0=_mhz(args.omega0_mhz),
        sigma=args.sigma_ns * 1e-3,
        noise=_noise(args),
        a_hf=_mhz(args.ahf_mhz) if g.kind.is_controlled else None,
        use_gz=not args.no_gz, satd=args.satd, tqd=args.tqd,
        tol=args.tol if args.tol is not None else 1e-9)
    print(f"gate {args.gate}: fidelity = {report['fidelity']:.10f}")
    if "gamma_d" in report:
        print(f"  gamma_g = {report['gamma_g']:+.10f} rad")
        print(f"  gamma_d = {report['gamma_d']:+.3e} rad")
    print(f"  propagator steps = {report['step_count']}"
          f" (est. error {report['est_error']:.2e})")
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"gate_{args.gate}.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    print(f"wrote {path}")
    return 0


def _noise(args):
    from .hamiltonians import NoiseParams

    if args.delta == 0.0 and args.eps == 0.0:
        return None
    return NoiseParams(args.delta, args.eps)


def _parse_grid(text: str | None, default: tuple[int, int]) -> tuple[int, int]:
    if text is None:
        return default
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ContractViolation("--grid expects ROWSxCOLS, e.g. 20x20")
    return int(parts[0]), int(parts[1])


def _parse_sigma_range(text: str | None) -> np.ndarray:
    """--sigma-ns START:STOP:STEP in ns, or default 1..20 ns."""
    if text is None:
        return np.arange(1.0, 21.0, 1.0) * 1e-3
    parts = [float(v) for v in text.split(":")]
    if len(parts) != 3:
        raise ContractViolation("--sigma-ns sweep form is start:stop:step (ns)")
    start, stop, step = parts
    return np.arange(start, stop + 0.5 * step, step) * 1e-3


def cmd_sweep(args) -> int:
    name = args.sweep
    if name not in SWEEP_NAMES:
        raise ContractViolation(
            f"unknown sweep {name!r}; valid names: {', '.join(SWEEP_NAMES)}")
    tol = args.tol if args.tol is not None else SWEEP_TOL
    s_gate = gate_from_name("s")
    not_gate = gate_from_name("not")
    if name == "fig2":
        ne, nx = _parse_grid(args.grid, (60, 60))
        res = sweep_amplitude_ratio(np.linspace(0.1, 4.0, ne),
                                    np.linspace(0.5, 6.0, nx))
        _emit(res, args.out, name)
    elif name == "fig3":
        ne, _ = _parse_grid(args.grid, (60, 2))
        res = sweep_gz_diagnostics(np.linspace(0.1, 4.0, ne), (2.0, 4.0))
        _emit(res, args.out, name)
        p = drive_for_gate(s_gate, args.eta, args.x,
                           omega0=_mhz(args.omega0_mhz))
        _emit(eds_comparison(p), args.out, name + "_eds")
    elif name in ("fig4", "fig5"):
        nd, ne_ = _parse_grid(args.grid, (31, 31))
        deltas = np.linspace(-0.15, 0.15, nd)
        epss = np.linspace(-0.15, 0.15, ne_)
        etas = (0.5, 1.0, 2.0, 4.0) if name == "fig4" else (args.eta,)
        for gate, label in ((s_gate, "s"), (not_gate, "not")):
            res = sweep_systematic_errors(gate, deltas, epss, etas,
                                          tol=tol, jobs=args.jobs)
            _emit(res, args.out, f"{name}_{label}")
        if name == "fig5":
            for gate, label in (("cs", "cs"), ("cnot", "cnot")):
                res = sweep_systematic_errors(
                    gate_from_name(gate), deltas, epss, (args.eta,),
                    a_hf=_mhz(args.ahf_mhz), tol=tol, jobs=args.jobs)
                _emit(res, args.out, f"{name}_{label}")
    elif name == "fig6":
        kappa2 = np.linspace(1e-3, 1e-2, 10)
        for gate, label in ((s_gate, "s"), (not_gate, "not")):
            res = sweep_lindblad(gate, kappa2,
                                 kappa1=args.kappa1 or 5e-4,
                                 delta=args.delta or 0.05,
                                 eps=args.eps or 0.05,
                                 eta=args.eta, x=args.x)
            _emit(res, args.out, f"{name}_{label}")
    elif name == "fig7":
        a_grid = TWO_PI * np.logspace(1, math.log10(500.0), 13)
        res = sweep_hyperfine(gate_from_name("cs"), a_grid,
                              delta=args.delta, eps=args.eps,
                              eta=args.eta, x=args.x, tol=tol, jobs=args.jobs)
        _emit(res, args.out, name)
    elif name == "figA1":
        sigmas = _parse_sigma_range(args.sigma_range)
        res = sweep_phase_smoothing(sigmas, (0.5, 1.0, 2.0, 4.0),
                                    x=args.x, tol=tol)
        _emit(res, args.out, name)
    elif name == "figA2":
        g = _resolve_gate(args)
        p = drive_for_gate(g, args.eta, args.x, omega0=_mhz(args.omega0_mhz))
        _emit(emit_pulse_comparison(p, use_gz=not args.no_gz), args.out, name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satdgates",
        description=("Geometric quantum gates through dressed-state corrected "
                     "orange-slice pulses. Frequencies are linear MHz on the "
                     "CLI (multiplied by 2 pi internally, stored as rad/us); "
                     "times in ns where flagged, otherwise us."))
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pulses", help="emit original vs corrected pulse series")
    _add_common(sp)
    sp.set_defaults(func=cmd_pulses)

    sg = sub.add_parser("gate", help="run one gate, report fidelity and phases")
    _add_common(sg)
    sg.set_defaults(func=cmd_gate)

    sw = sub.add_parser("sweep", help="regenerate a figure dataset")
    sw.add_argument("sweep", help=f"one of: {', '.join(SWEEP_NAMES)}")
    _add_common(sw)
    sw.add_argument("--grid", default=None,
                    help="grid override ROWSxCOLS (e.g. 20x20)")
    sw.add_argument("--sigma-range", dest="sigma_range", default=None,
                    help="figA1 sigma sweep start:stop:step in ns")
    sw.set_defaults(func=cmd_sweep)

    for p in (parser, sp, sg, sw):
        _snapshot_defaults(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _load_config(args)
        return args.func(args)
    except ContractViolation as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SATDError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
