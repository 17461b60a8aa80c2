"""Command-line interface: distance sweeps, safe-distance solving, presets."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .compliance import (
    BUILTIN_LIMITS,
    ComplianceLimit,
    DistanceSearch,
    LimitUnreachableError,
    min_safe_distance,
    sweep,
)
from .exposure import ConvergenceError, QuadratureSpec
from .scenario import (
    ScenarioError,
    ScenarioFile,
    SweepGrid,
    emit_results,
    load_preset,
    load_scenario,
    preset_names,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wearemf",
        description="Link rate and RF exposure calculations for on-body wearable radios.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep_cmd = sub.add_parser(
        "sweep", help="evaluate a distance sweep and emit CSV or JSON")
    _add_scenario_options(sweep_cmd)
    sweep_cmd.add_argument("--from", dest="start_m", type=float, metavar="METERS",
                           help="sweep start distance (overrides the scenario grid)")
    sweep_cmd.add_argument("--to", dest="stop_m", type=float, metavar="METERS",
                           help="sweep stop distance")
    sweep_cmd.add_argument("--points", type=int, help="number of sweep points")
    sweep_cmd.add_argument("--quadrature-samples", dest="quadrature_samples", type=int,
                           metavar="N", help="override samples per quadrature axis")
    sweep_cmd.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    sweep_cmd.add_argument("--output", default="stdout", metavar="PATH|stdout")
    sweep_cmd.set_defaults(func=_run_sweep)

    safe_cmd = sub.add_parser(
        "safe-distance", help="solve the minimum compliant antenna-skin separation")
    _add_scenario_options(safe_cmd)
    safe_cmd.add_argument("--limit", required=True,
                          help="limit name (e.g. ICNIRP, FCC) or a SAR value in W/kg")
    safe_cmd.add_argument("--from", dest="start_m", type=float, metavar="METERS",
                          help="search bracket lower end (default 0.001)")
    safe_cmd.add_argument("--to", dest="stop_m", type=float, metavar="METERS",
                          help="search bracket upper end (default 1.0)")
    safe_cmd.add_argument("--quadrature-samples", dest="quadrature_samples", type=int,
                          metavar="N", help="override samples per quadrature axis")
    safe_cmd.add_argument("--output", default="stdout", metavar="PATH|stdout")
    safe_cmd.set_defaults(func=_run_safe_distance)

    presets_cmd = sub.add_parser("presets", help="list built-in scenario presets")
    presets_cmd.set_defaults(func=_run_presets)
    return parser


def _add_scenario_options(cmd: argparse.ArgumentParser) -> None:
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--scenario", metavar="PATH", help="scenario file to load")
    group.add_argument("--preset", metavar="NAME", help="built-in preset to load")


def _load(args: argparse.Namespace) -> ScenarioFile:
    if args.scenario is not None:
        loaded = load_scenario(Path(args.scenario))
    else:
        loaded = load_preset(args.preset)
    if args.quadrature_samples is not None:
        quadrature = QuadratureSpec(args.quadrature_samples,
                                    loaded.quadrature.convergence_tol)
        loaded = dataclasses.replace(loaded, quadrature=quadrature)
    return loaded


def _write(output: str, data: bytes) -> None:
    if output in ("stdout", "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(output).write_bytes(data)


def _run_sweep(args: argparse.Namespace) -> int:
    loaded = _load(args)
    overrides = (args.start_m, args.stop_m, args.points)
    if any(v is not None for v in overrides):
        if any(v is None for v in overrides):
            raise ScenarioError("--from, --to, and --points must be given together")
        grid = SweepGrid(start_m=args.start_m, stop_m=args.stop_m, points=args.points)
    elif loaded.sweep_grid is not None:
        grid = loaded.sweep_grid
    else:
        raise ScenarioError(
            "the scenario has no sweep section; pass --from, --to, and --points")
    rows = sweep(loaded.scenario, loaded.tissue, grid.resolve(), loaded.quadrature)
    _write(args.output, emit_results(rows, args.fmt))
    return 0


def _resolve_limit(spec: str, loaded: ScenarioFile) -> ComplianceLimit:
    try:
        value = float(spec)
    except ValueError:
        by_name = {limit.name: limit for limit in loaded.limits}
        by_name.update({name: lim for name, lim in BUILTIN_LIMITS.items()
                        if name not in by_name})
        if spec in by_name:
            return by_name[spec]
        known = ", ".join(sorted(by_name))
        raise ScenarioError(f"unknown limit '{spec}' (known: {known}, "
                            "or pass a SAR value in W/kg)") from None
    return ComplianceLimit(f"custom-{spec}", value, "user supplied")


def _run_safe_distance(args: argparse.Namespace) -> int:
    loaded = _load(args)
    limit = _resolve_limit(args.limit, loaded)
    defaults = DistanceSearch()
    search = DistanceSearch(
        d_lo_m=args.start_m if args.start_m is not None else defaults.d_lo_m,
        d_hi_m=args.stop_m if args.stop_m is not None else defaults.d_hi_m,
        tol_m=defaults.tol_m,
    )
    result = min_safe_distance(loaded.scenario, loaded.tissue, limit, search,
                               loaded.quadrature)
    line = result if isinstance(result, str) else f"{result:.8e}"
    _write(args.output, (line + "\n").encode("ascii"))
    return 0


def _run_presets(args: argparse.Namespace) -> int:
    _write("stdout", ("\n".join(preset_names()) + "\n").encode("ascii"))
    return 0


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns 0 on success, 1 on usage or input errors,
    2 on numerical failures (non-convergence, unreachable limit)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ConvergenceError, LimitUnreachableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ScenarioError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
