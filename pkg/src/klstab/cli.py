"""Command-line interface: verdicts, curves, sweeps and simulations as CSV/JSON.

Commands
    check      one verdict as JSON on stdout; exit code encodes the outcome
    curve      normalized determinant curve on the unit circle as CSV
    sweep      exterior-zero-count map over a lambda (and optional sigma) grid as CSV
    simulate   final-time amplitude field of a sigma scan as CSV

Exit codes: 0 success / strongly stable, 1 usage or config error, 2 unstable,
3 assumption violated, 4 inconclusive.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from typing import List, Optional

import numpy as np

from .analyzer import StabilityStatus, analyze, sweep
from .boundary import boundary_from_descriptor, custom_condition, silw_condition
from .config import DEFAULT_TOLS, Tolerances
from .scheme import Scheme, make_beam_warming, scheme_from_descriptor
from .simulator import GaussianPulse, IBVPRun, sigma_scan
from .winding import curve_to_csv, sample_kl_curve
from .kl import reduce_boundary

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNSTABLE = 2
EXIT_ASSUMPTION = 3
EXIT_INCONCLUSIVE = 4

_STATUS_EXIT = {
    StabilityStatus.STRONGLY_STABLE: EXIT_OK,
    StabilityStatus.UNSTABLE_EXTERIOR_EIGENVALUE: EXIT_UNSTABLE,
    StabilityStatus.UNSTABLE_BOUNDARY_ZERO: EXIT_UNSTABLE,
    StabilityStatus.ASSUMPTION_VIOLATED: EXIT_ASSUMPTION,
    StabilityStatus.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """Parse ``A:B:STEP`` into an ascending grid; B is included when it lands on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be A:B:STEP, got {text!r}")
    try:
        a, b, step = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"grid values must be numeric: {text!r}") from exc
    if step <= 0 or b < a:
        raise UsageError(f"grid must ascend with positive step: {text!r}")
    n = int(np.floor((b - a) / step + 1e-9)) + 1
    # round away float accumulation noise so grid values print cleanly
    return np.round(a + step * np.arange(n), 12)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klstab",
        description="Strong stability verification for totally upwind schemes on the half line.",
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(p, sigma_flag=True):
        p.add_argument("--config", help="JSON config file; flags override file values")
        p.add_argument("--preset", help="scheme preset name (beam-warming)")
        p.add_argument("--coefficients", type=float, nargs="+", metavar="A",
                       help="stencil coefficients a_-r .. a_0")
        p.add_argument("--lambda", dest="lam", type=float, help="CFL number")
        p.add_argument("--silw", type=int, nargs=2, metavar=("KD", "D"),
                       help="simplified inverse Lax-Wendroff orders k_d and d")
        if sigma_flag:
            p.add_argument("--sigma", type=float, help="grid offset in [-1/2, 1/2), default 0")
        p.add_argument("--custom-b", metavar="FILE",
                       help="JSON file with {\"b\": [[...], ...]} extrapolation rows")
        p.add_argument("--samples", type=int, help="curve samples on the unit circle (default 1024)")
        p.add_argument("--out", help="output path (default stdout)")
        for name in ("cluster-radius", "unit-circle-tol", "origin-tol", "gamma-tol",
                     "kernel-tol", "cauchy-tol"):
            p.add_argument(f"--{name}", type=float, help=f"override tolerance {name.replace('-', '_')}")

    p_check = sub.add_parser("check", help="single stability verdict as JSON")
    add_common(p_check)

    p_curve = sub.add_parser("curve", help="determinant curve on the unit circle as CSV")
    add_common(p_curve)
    p_curve.add_argument("--no-normalize", action="store_true",
                         help="emit the raw determinant instead of dividing by z^r")

    p_sweep = sub.add_parser("sweep", help="zero-count map over parameter grids as CSV")
    add_common(p_sweep, sigma_flag=False)
    p_sweep.add_argument("--lambda-grid", metavar="A:B:STEP", help="CFL grid")
    p_sweep.add_argument("--sigma-grid", metavar="A:B:STEP", help="grid-offset grid (default {0})")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")

    p_sim = sub.add_parser("simulate", help="sigma-scan amplitude field as CSV")
    add_common(p_sim, sigma_flag=False)
    p_sim.add_argument("--sigma-grid", metavar="A:B:STEP", help="grid-offset grid (default -0.5:0.48:0.02)")
    p_sim.add_argument("--grid-points", type=int, default=1000, help="interior cells J (default 1000)")
    p_sim.add_argument("--final-time", type=float, default=0.3, help="time horizon T (default 0.3)")
    p_sim.add_argument("--velocity", type=float, default=1.0, help="advection velocity a (default 1)")
    return parser


def _merged(args, config: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return config.get(key.replace("_", "-"), config.get(key, default))


def _tolerances(args, config: dict) -> Tolerances:
    overrides = {}
    mapping = {
        "cluster_radius": "cluster_radius",
        "unit_circle_tol": "unit_circle_tol",
        "origin_tol": "origin_tol",
        "gamma_tol": "gamma_tol",
        "kernel_tol": "kernel_tol",
        "cauchy_tol": "cauchy_tol",
    }
    file_tols = config.get("tolerances", {})
    for attr in mapping:
        value = getattr(args, attr, None)
        if value is None:
            value = file_tols.get(attr)
        if value is not None:
            overrides[attr] = float(value)
    tols = DEFAULT_TOLS.replace(**overrides)
    tols.validate()
    return tols


def _scheme(args, config: dict) -> Scheme:
    lam = _merged(args, config, "lam", config.get("scheme", {}).get("lambda"))
    preset = _merged(args, config, "preset", config.get("scheme", {}).get("preset"))
    coeffs = _merged(args, config, "coefficients", config.get("scheme", {}).get("coefficients"))
    if lam is None:
        raise UsageError("a CFL number is required (--lambda)")
    descriptor = {"lambda": float(lam)}
    if coeffs is not None:
        descriptor["coefficients"] = list(coeffs)
    else:
        descriptor["preset"] = preset or "beam-warming"
    try:
        return scheme_from_descriptor(descriptor)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _boundary(args, config: dict, s: Scheme, sigma: float):
    silw = _merged(args, config, "silw")
    custom_path = _merged(args, config, "custom_b")
    file_bc = config.get("boundary")
    if silw is not None and custom_path is not None:
        raise UsageError("give either --silw or --custom-b, not both")
    try:
        if silw is not None:
            kd, d = int(silw[0]), int(silw[1])
            return silw_condition(s.r, kd, d, sigma)
        if custom_path is not None:
            with open(custom_path) as fh:
                payload = json.load(fh)
            bc = custom_condition(payload["b"])
            if bc.r != s.r:
                raise UsageError(f"custom boundary has {bc.r} ghost rows, scheme needs {s.r}")
            return bc
        if file_bc is not None:
            return boundary_from_descriptor(file_bc, s.r)
    except (ValueError, KeyError, OSError) as exc:
        raise UsageError(f"bad boundary condition: {exc}") from exc
    raise UsageError("a boundary condition is required (--silw KD D or --custom-b FILE)")


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _bw_scheme_family(lam: float) -> Scheme:
    return make_beam_warming(lam)


def _coeff_scheme_family(lam: float, coefficients=None) -> Scheme:
    return Scheme.from_coefficients(coefficients, lam)


def _silw_family(lam: float, sigma: float, kd: int = 2, d: int = 3, scheme_family=None) -> object:
    return silw_condition(scheme_family(lam).r, kd, d, sigma)


def _custom_family(lam: float, sigma: float, b=None):
    return custom_condition(b)


def run_cli(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse handles --help (exit 0) itself; remap usage failures to 1
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        config = {}
        if getattr(args, "config", None):
            with open(args.config) as fh:
                config = json.load(fh)

        tols = _tolerances(args, config)
        n0 = int(_merged(args, config, "samples", 1024))
        out = _merged(args, config, "out")

        if args.command == "check":
            s = _scheme(args, config)
            sigma = float(_merged(args, config, "sigma", 0.0))
            bc = _boundary(args, config, s, sigma)
            verdict = analyze(s, bc, tols=tols, n0=n0)
            _write(verdict.to_json() + "\n", out)
            return _STATUS_EXIT[verdict.status]

        if args.command == "curve":
            s = _scheme(args, config)
            sigma = float(_merged(args, config, "sigma", 0.0))
            bc = _boundary(args, config, s, sigma)
            if bc.r > s.r:
                bc = bc.restricted_to(s.r)
            rb = reduce_boundary(s, bc, tols)
            curve = sample_kl_curve(s, rb, n0=n0, normalize=not args.no_normalize)
            _write(curve_to_csv(curve), out)
            return EXIT_OK

        if args.command == "sweep":
            lam_spec = _merged(args, config, "lambda_grid")
            if lam_spec is None:
                raise UsageError("sweep needs --lambda-grid A:B:STEP")
            lambda_grid = parse_grid(lam_spec)
            sig_spec = _merged(args, config, "sigma_grid")
            sigma_grid = parse_grid(sig_spec) if sig_spec else np.array([0.0])
            if np.any(lambda_grid <= 0):
                raise UsageError("all CFL grid values must be positive")

            coeffs = _merged(args, config, "coefficients",
                             config.get("scheme", {}).get("coefficients"))
            if coeffs is not None:
                scheme_family = functools.partial(_coeff_scheme_family, coefficients=tuple(coeffs))
            else:
                preset = _merged(args, config, "preset",
                                 config.get("scheme", {}).get("preset", "beam-warming"))
                if preset != "beam-warming":
                    raise UsageError(f"unknown scheme preset {preset!r}")
                scheme_family = _bw_scheme_family

            silw = _merged(args, config, "silw")
            file_bc = config.get("boundary", {})
            if silw is not None:
                bc_family = functools.partial(
                    _silw_family, kd=int(silw[0]), d=int(silw[1]), scheme_family=scheme_family
                )
            elif "silw" in file_bc:
                bc_family = functools.partial(
                    _silw_family, kd=int(file_bc["silw"]["kd"]), d=int(file_bc["silw"]["d"]),
                    scheme_family=scheme_family,
                )
            else:
                custom_path = _merged(args, config, "custom_b")
                if custom_path is None:
                    raise UsageError("sweep needs --silw KD D or --custom-b FILE")
                with open(custom_path) as fh:
                    payload = json.load(fh)
                bc_family = functools.partial(_custom_family, b=tuple(map(tuple, payload["b"])))

            result = sweep(scheme_family, bc_family, lambda_grid, sigma_grid,
                           tols=tols, n0=n0, jobs=int(args.jobs))
            _write(result.to_csv(), out)
            return EXIT_OK

        if args.command == "simulate":
            s = _scheme(args, config)
            sig_spec = _merged(args, config, "sigma_grid")
            sigma_grid = parse_grid(sig_spec) if sig_spec else parse_grid("-0.5:0.48:0.02")
            silw = _merged(args, config, "silw")
            if silw is None:
                raise UsageError("simulate needs --silw KD D")
            kd, d = int(silw[0]), int(silw[1])
            pulse = GaussianPulse()
            scan = sigma_scan(
                s,
                bc_family=lambda sg: silw_condition(s.r, kd, d, sg),
                sigma_grid=sigma_grid,
                run_factory=lambda sg: IBVPRun.from_cfl(
                    s, J=int(args.grid_points), T=float(args.final_time),
                    a=float(args.velocity), sigma=sg, g=pulse,
                ),
            )
            _write(scan.to_csv(), out)
            return EXIT_OK

        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
