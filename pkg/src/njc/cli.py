"""Command-line interface. Every subcommand is a thin wrapper over the library.

Exit codes: 0 success, 1 validation or physics errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import NjcError
from .experiments import (
    SweepAxis,
    SweepGrid,
    Scenario,
    _dumps,
    export,
    format_number,
    parse_scenario_config,
    preset,
    run_scenario,
    run_sweep,
    validation_checks,
)
from .model import eigenstructure, validate_params
from .spectral import eigenoperators

_PARAM_FIELDS = ("omega", "g", "chi", "gamma_plus", "gamma_minus")
_PARAM_DEFAULTS = {"omega": 1.0, "chi": 0.0, "gamma_plus": 0.0, "gamma_minus": 0.0}


def _add_param_flags(parser: argparse.ArgumentParser, *, bare: bool) -> None:
    """Physics flags. With bare=True all default to None so the caller can
    detect which were given explicitly; otherwise g is required and the rest
    take the documented defaults (omega 1, everything else 0)."""

    def default(name: str):
        return None if bare else _PARAM_DEFAULTS[name]

    parser.add_argument("--omega", type=float, default=default("omega"),
                        help="qubit/resonator frequency (default 1.0)")
    parser.add_argument("--g", type=float, required=not bare,
                        help="qubit-resonator coupling")
    parser.add_argument("--chi", type=float, default=default("chi"),
                        help="Kerr nonlinearity (default 0)")
    parser.add_argument("--gamma-plus", dest="gamma_plus", type=float,
                        default=default("gamma_plus"),
                        help="upper dressed-state decay rate (default 0)")
    parser.add_argument("--gamma-minus", dest="gamma_minus", type=float,
                        default=default("gamma_minus"),
                        help="lower dressed-state decay rate (default 0)")


def _params_from_args(args: argparse.Namespace):
    filled = {
        name: (
            getattr(args, name)
            if getattr(args, name) is not None
            else _PARAM_DEFAULTS[name]
        )
        for name in _PARAM_FIELDS
        if name != "g"
    }
    return validate_params(filled["omega"], args.g, filled["chi"],
                           filled["gamma_plus"], filled["gamma_minus"])


def _format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{format_number(z.real)} {sign} {format_number(abs(z.imag))}i"


def _cmd_spectrum(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    es = eigenstructure(params)
    basis = eigenoperators(es, params.gamma_plus, params.gamma_minus)
    if args.format == "json":
        doc = {
            "params": {name: getattr(params, name) for name in _PARAM_FIELDS},
            "Omega": es.Omega,
            "theta": es.theta,
            "E0": es.E0,
            "E1_plus": es.E1_plus,
            "E1_minus": es.E1_minus,
            "lambdas": [
                {"k": m.index, "re": m.lam.real, "im": m.lam.imag}
                for m in basis.modes
            ],
        }
        print(_dumps(doc))
    else:
        for name, value in (
            ("Omega", es.Omega),
            ("theta", es.theta),
            ("E0", es.E0),
            ("E1_plus", es.E1_plus),
            ("E1_minus", es.E1_minus),
        ):
            print(f"{name:<9} = {format_number(value)}")
        for mode in basis.modes:
            print(f"lambda_{mode.index}  = {_format_complex(mode.lam)}")
    return 0


def _cmd_figure(args: argparse.Namespace) -> int:
    scenario = replace(preset(f"fig{args.n}"), solvers=args.solvers)
    result = run_scenario(scenario)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = export(result, "csv", outdir / f"fig{args.n}.csv")
    print(f"wrote {csv_path} and {csv_path.with_suffix('.meta.json')}")
    if result.deviation is not None:
        print(
            "max |pe_analytic - pe_numeric| = "
            f"{format_number(result.deviation)}"
        )
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    inline = [
        args.omega, args.g, args.chi, args.gamma_plus, args.gamma_minus,
        args.t_end, args.dt, args.solvers, args.label,
    ]
    if args.config is not None:
        if any(v is not None for v in inline):
            args.parser.error("--config cannot be combined with inline scenario flags")
        scenario = parse_scenario_config(args.config)
    else:
        if args.g is None:
            args.parser.error("--g is required when no --config is given")
        scenario = Scenario(
            params=_params_from_args(args),
            t_end=args.t_end if args.t_end is not None else 2000.0,
            dt=args.dt if args.dt is not None else 0.5,
            solvers=args.solvers if args.solvers is not None else "both",
            initial_state="e0",
            label=args.label if args.label is not None else "",
        )
    result = run_scenario(scenario)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export(result, args.format, out)
    if args.format == "csv":
        print(f"wrote {out} and {out.with_suffix('.meta.json')}")
    else:
        print(f"wrote {out}")
    if result.deviation is not None:
        print(
            "max |pe_analytic - pe_numeric| = "
            f"{format_number(result.deviation)}"
        )
    return 0


def _axis(text: str) -> SweepAxis:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"expected FIELD:START:STOP:COUNT, got {text!r}"
        )
    try:
        return SweepAxis(
            field=parts[0],
            start=float(parts[1]),
            stop=float(parts[2]),
            count=int(parts[3]),
        )
    except (ValueError, NjcError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cmd_sweep(args: argparse.Namespace) -> int:
    base = _params_from_args(args)
    grid = SweepGrid(
        base=base,
        axes=tuple(args.axis or ()),
        metrics=tuple(args.metrics.split(",")),
    )
    rows = run_sweep(grid)
    out = Path(args.out)
    export(rows, args.format, out)
    print(f"wrote {out} ({len(rows)} points)")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    if args.preset is not None:
        if any(getattr(args, name) is not None for name in _PARAM_FIELDS):
            args.parser.error("--preset cannot be combined with explicit parameters")
        params = preset(args.preset).params
    else:
        if args.g is None:
            args.parser.error("--g is required when no --preset is given")
        params = _params_from_args(args)
    checks = validation_checks(params)
    for name, passed, detail in checks:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    failed = sum(1 for _, passed, _ in checks if not passed)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="njc",
        description=(
            "Dissipative nonlinear Jaynes-Cummings simulator: closed-form "
            "spectral solution cross-checked against a fixed-step RK4 "
            "integration of the master equation."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_spectrum = sub.add_parser(
        "spectrum", help="print dressed energies and the nine mode eigenvalues"
    )
    _add_param_flags(p_spectrum, bare=False)
    p_spectrum.add_argument("--format", choices=("text", "json"), default="text")
    p_spectrum.set_defaults(func=_cmd_spectrum, parser=p_spectrum)

    p_figure = sub.add_parser(
        "figure", help="run a named preset and export its trajectory CSV"
    )
    p_figure.add_argument("n", type=int, choices=(1, 2, 3, 4), metavar="N",
                          help="preset number (1-4)")
    p_figure.add_argument("--out", default=".", help="output directory")
    p_figure.add_argument("--solvers", choices=("analytic", "numeric", "both"),
                          default="both")
    p_figure.set_defaults(func=_cmd_figure, parser=p_figure)

    p_simulate = sub.add_parser(
        "simulate", help="run a scenario from a config file or inline flags"
    )
    p_simulate.add_argument("--config", help="scenario JSON file (strict schema)")
    _add_param_flags(p_simulate, bare=True)
    p_simulate.add_argument("--t-end", dest="t_end", type=float, default=None)
    p_simulate.add_argument("--dt", type=float, default=None)
    p_simulate.add_argument("--solvers", choices=("analytic", "numeric", "both"),
                            default=None)
    p_simulate.add_argument("--label", default=None)
    p_simulate.add_argument("--out", default="scenario.csv", help="output file")
    p_simulate.add_argument("--format", choices=("csv", "json"), default="csv")
    p_simulate.set_defaults(func=_cmd_simulate, parser=p_simulate)

    p_sweep = sub.add_parser(
        "sweep", help="evaluate metrics over a parameter grid"
    )
    _add_param_flags(p_sweep, bare=False)
    p_sweep.add_argument(
        "--axis", action="append", type=_axis, metavar="FIELD:START:STOP:COUNT",
        help="sweep axis (repeatable)",
    )
    p_sweep.add_argument(
        "--metrics",
        default="short_time_rate,first_min_t,first_min_value",
        help="comma-separated metric names",
    )
    p_sweep.add_argument("--out", default="sweep.json", help="output file")
    p_sweep.add_argument("--format", choices=("json", "csv"), default="json")
    p_sweep.set_defaults(func=_cmd_sweep, parser=p_sweep)

    p_validate = sub.add_parser(
        "validate", help="run the cross-validation suite on one parameter set"
    )
    _add_param_flags(p_validate, bare=True)
    p_validate.add_argument("--preset", choices=("fig1", "fig2", "fig3", "fig4"))
    p_validate.set_defaults(func=_cmd_validate, parser=p_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NjcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
