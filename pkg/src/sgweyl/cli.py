"""Command-line front end: reproducible experiments with machine-readable output.

Subcommands: coeffs, spectrum, fit, flow, zeta, measure.  Every report is
self-describing (all effective parameters are echoed), floats are printed
with 17 significant digits, and runs are deterministic given their flags,
so repeated invocations produce byte-identical JSON.

Exit codes: 0 success, 2 validation error, 3 numerical non-convergence,
4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import asymptotics, cornerflow, spectrum, traces
from .errors import NonConvergenceError, ValidationError
from .serialize import format_float, write_csv, write_json
from .symbols import model_symbol

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NONCONVERGENCE = 3
EXIT_IO = 4


def _print_report(report: dict, prefix: str = "") -> None:
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            _print_report(val, prefix=f"{prefix}{key}.")
            continue
        if isinstance(val, float):
            val = format_float(val)
        print(f"{prefix}{key} = {val}")


def _emit(report: dict, json_path) -> None:
    _print_report(report)
    if json_path:
        write_json(json_path, report)


def cmd_coeffs(args) -> int:
    d = args.dim
    if d not in (1, 2, 3):
        raise ValidationError(f"coeffs supports dim 1, 2, 3; got {d}")
    report: dict = {"dimension": d, "method": args.method}
    if args.method in ("closed", "both"):
        report["gamma2_closed"] = traces.gamma2_closed(d)
        report["gamma1_closed"] = traces.gamma1_closed(d)
    if args.method in ("quadrature", "both"):
        g2, g1 = traces.gamma_coeffs_general(model_symbol(d), d, 1.0)
        report["gamma2_quadrature"] = g2.value
        report["gamma1_quadrature"] = g1.value
        report["gamma2_error_estimate"] = g2.estimated_error
        report["gamma1_error_estimate"] = g1.estimated_error
    if args.method == "both":
        report["gamma2_difference"] = abs(report["gamma2_closed"] - report["gamma2_quadrature"])
        report["gamma1_difference"] = abs(report["gamma1_closed"] - report["gamma1_quadrature"])
    _emit(report, args.json)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    target = args.lambda_target
    if target is None and args.operator == "model":
        # size the window from the requested count via the closed-form law
        target = spectrum.model_lambda_at_count(args.dim, max(args.count, 1)) if args.count else None
    cfg = spectrum.DiscretizationConfig(
        dimension=args.dim,
        half_width=args.half_width,
        grid_points=args.grid,
        scheme_order=args.scheme,
        operator=args.operator,
        lambda_max_target=target,
    )
    spec = spectrum.compute_spectrum(cfg, args.count)
    report = cfg.to_dict()
    report.update(
        {
            "count": args.count,
            "trusted_count": spec.trusted_count,
            "min_trusted": args.min_trusted,
            "lambda_min": float(spec.eigenvalues[0]) if len(spec) else None,
            "lambda_max": float(spec.eigenvalues[-1]) if len(spec) else None,
        }
    )
    if args.csv:
        spectrum.save_spectrum(spec, args.csv, args.json)
        print(f"wrote {args.csv}")
        _print_report(report)
    else:
        _emit(report, args.json)
    if spec.trusted_count < args.min_trusted:
        print(
            f"trusted_count {spec.trusted_count} below required minimum {args.min_trusted}",
            file=sys.stderr,
        )
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_fit(args) -> int:
    from .serialize import read_csv

    _, names, rows = read_csv(args.input)
    if len(names) < 2:
        raise ValidationError(f"fit input needs two columns (lambda, N); got {names}")
    pts = np.asarray(rows, dtype=float)[:, :2]
    if args.window:
        lo, hi = args.window
        pts = pts[(pts[:, 0] >= lo) & (pts[:, 0] <= hi)]
    fit = asymptotics.fit_log_weyl(pts, args.exponent, n_levels=args.levels, level_step=args.level_step)
    report = fit.to_dict()
    _emit(report, args.json)
    return EXIT_OK


def cmd_flow(args) -> int:
    if args.omega is not None and args.theta is not None:
        z = cornerflow.CornerState.from_vectors(
            np.array(args.omega, dtype=float), np.array(args.theta, dtype=float)
        )
    else:
        z = cornerflow.sample_states(args.dim, args.seed, 1)[0]
    t_final = args.t if args.t is not None else cornerflow.return_time(z)
    period = cornerflow.return_time(z)
    z_end = cornerflow.flow_numeric(z, t_final, args.tol) if t_final != 0 else z
    z_exact = cornerflow.flow_closed(z, t_final)
    report = {
        "dimension": z.dimension,
        "tol": args.tol,
        "t": float(t_final),
        "conserved_angle": cornerflow.conserved_angle(z),
        "return_time": period,
        "fixed_point": cornerflow.is_fixed_point(z),
        "numeric_distance_to_start": cornerflow.state_distance(z_end, z),
        "closed_distance_to_start": cornerflow.state_distance(z_exact, z),
        "numeric_vs_closed": cornerflow.state_distance(z_end, z_exact),
        "angle_drift": abs(cornerflow.conserved_angle(z_end) - cornerflow.conserved_angle(z)),
        "norm_drift": max(
            abs(float(np.linalg.norm(z_end.omega)) - 1.0),
            abs(float(np.linalg.norm(z_end.theta)) - 1.0),
        ),
    }
    if args.csv:
        ts = np.linspace(0.0, t_final, args.samples)
        rows = []
        for t in ts:
            zt = cornerflow.flow_closed(z, float(t))
            rows.append(
                [float(t)]
                + [float(v) for v in zt.omega]
                + [float(v) for v in zt.theta]
                + [cornerflow.conserved_angle(zt)]
            )
        d = z.dimension
        cols = (
            ["t"]
            + [f"omega_{i}" for i in range(d)]
            + [f"theta_{i}" for i in range(d)]
            + ["conserved_angle"]
        )
        write_csv(args.csv, ["sgweyl flow trajectory (closed form)"], cols, rows)
        print(f"wrote {args.csv}")
    _emit(report, args.json)
    return EXIT_OK


def cmd_zeta(args) -> int:
    spec = spectrum.load_spectrum(args.input)
    tail = None
    if args.tail:
        if args.exponent is None:
            raise ValidationError("--tail requires --exponent (the leading exponent d/m)")
        pts = asymptotics.counting_samples(spec, sqrt_transform=args.sqrt)
        tail = asymptotics.fit_log_weyl(
            pts, args.exponent, n_levels=args.levels, level_step=args.level_step
        )
    values = {}
    for s in args.s:
        lam_spec = spec
        if args.sqrt:
            lam_spec = spectrum.SpectralData(np.sqrt(spec.eigenvalues), None, spec.trusted_count)
        values[format_float(s)] = asymptotics.zeta_partial(
            lam_spec, s, tail=tail, abscissa=args.abscissa if args.abscissa is not None else args.exponent
        )
    report = {
        "input": str(args.input),
        "trusted_count": spec.trusted_count,
        "tail_corrected": bool(args.tail),
        "sqrt_normalized": bool(args.sqrt),
        "abscissa": args.abscissa if args.abscissa is not None else args.exponent,
        "zeta": values,
    }
    _emit(report, args.json)
    return EXIT_OK


def cmd_measure(args) -> int:
    frac = cornerflow.periodic_measure_estimate(
        args.dim, args.seed, args.samples, t_max=args.t_max, tol=args.tol
    )
    report = {
        "dimension": args.dim,
        "seed": args.seed,
        "n_samples": args.samples,
        # JSON has no Infinity literal; an unbounded scan is recorded as a string
        "t_max": "inf" if math.isinf(args.t_max) else args.t_max,
        "tol": args.tol,
        "periodic_fraction": frac,
    }
    _emit(report, args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sgweyl",
        description="numerical laboratory for logarithmic Weyl asymptotics of scattering-type operators",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_json(sp):
        sp.add_argument("--json", metavar="PATH", default=None, help="write the report as JSON")

    sp = sub.add_parser("coeffs", help="two-term Weyl coefficients of the model operator")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--method", choices=("closed", "quadrature", "both"), default="closed")
    add_json(sp)
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("spectrum", help="discretize the model operator and compute eigenvalues")
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--grid", type=int, required=True, help="grid points per axis")
    sp.add_argument("--half-width", type=float, required=True, dest="half_width")
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--scheme", type=int, choices=(2, 4), default=4)
    sp.add_argument("--operator", choices=spectrum.OPERATORS, default="model")
    sp.add_argument("--min-trusted", type=int, default=1, dest="min_trusted")
    sp.add_argument("--lambda-target", type=float, default=None, dest="lambda_target")
    sp.add_argument("--csv", metavar="PATH", default=None)
    add_json(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("fit", help="fit counting samples against the logarithmic Weyl basis")
    sp.add_argument("input", help="two-column CSV of (lambda, N)")
    sp.add_argument("--exponent", type=float, required=True, help="leading exponent d/m")
    sp.add_argument("--levels", type=int, default=1)
    sp.add_argument("--level-step", type=float, default=1.0, dest="level_step")
    sp.add_argument("--window", type=float, nargs=2, default=None, metavar=("MIN", "MAX"))
    add_json(sp)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("flow", help="corner Hamiltonian flow: numeric vs closed form")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--omega", type=float, nargs="+", default=None)
    sp.add_argument("--theta", type=float, nargs="+", default=None)
    sp.add_argument("--t", type=float, default=None, help="final time (default: one period)")
    sp.add_argument("--tol", type=float, default=cornerflow.DEFAULT_FLOW_TOL)
    sp.add_argument("--samples", type=int, default=200, help="trajectory samples for --csv")
    sp.add_argument("--csv", metavar="PATH", default=None)
    add_json(sp)
    sp.set_defaults(func=cmd_flow)

    sp = sub.add_parser("zeta", help="partial zeta sums from a stored spectrum")
    sp.add_argument("input", help="spectrum CSV written by the spectrum subcommand")
    sp.add_argument("--s", type=float, nargs="+", required=True)
    sp.add_argument("--tail", action="store_true", help="add the fitted tail correction")
    sp.add_argument("--sqrt", action="store_true", help="use sqrt-normalized eigenvalues")
    sp.add_argument("--exponent", type=float, default=None, help="abscissa d/m for validation and tail fit")
    sp.add_argument("--levels", type=int, default=1)
    sp.add_argument("--level-step", type=float, default=1.0, dest="level_step")
    sp.add_argument("--abscissa", type=float, default=None)
    add_json(sp)
    sp.set_defaults(func=cmd_zeta)

    sp = sub.add_parser("measure", help="Monte Carlo measure of periodic corner-flow states")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--t-max", type=float, default=math.inf, dest="t_max")
    sp.add_argument("--tol", type=float, default=1e-9)
    add_json(sp)
    sp.set_defaults(func=cmd_measure)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
