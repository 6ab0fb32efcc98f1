"""Command line front end.

Subcommands:
  model      movement-time sweeps and crossover distances to CSV
  simulate   run a simulated experiment manifest end to end
  calibrate  fit a boundary trace and radial pushes into a profile
  serve      run the TCP step service

Configuration problems (bad parameters, malformed input files) exit
with status 2; everything else propagates.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import calibration, models, protocol, serve, simkit
from .transfer import ConfigError


def _parse_pair(text: str, label: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"{label} must be two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def _model_params(args) -> models.ModelParams:
    overrides = {}
    if args.clutch_time is not None:
        overrides["clutch_time"] = args.clutch_time
    if args.utilization is not None:
        overrides["utilization"] = args.utilization
    if args.fitts_isotonic is not None:
        a, b = _parse_pair(args.fitts_isotonic, "--fitts-isotonic")
        overrides["fitts_isotonic"] = models.FittsCoefficients(a, b)
    if args.fitts_elastic is not None:
        a, b = _parse_pair(args.fitts_elastic, "--fitts-elastic")
        overrides["fitts_elastic"] = models.FittsCoefficients(a, b)
    profile = models.PRESETS[args.device]
    return models.ModelParams.for_profile(profile, **overrides)


def _cmd_model(args) -> int:
    profile = models.PRESETS[args.device]
    params = _model_params(args)
    widths = [float(w) for w in args.widths.split(",") if w]
    if not widths:
        raise ConfigError("--widths must name at least one target width")
    max_d = args.max_distance if args.max_distance is not None else 2.0 * profile.display_diagonal
    rows = list(models.sweep(widths, params, max_d, step=args.step))
    protocol.write_model_csv(args.out, rows, {
        "device": args.device,
        "operating_range": params.operating_range,
        "cd_gain": params.cd_gain,
        "utilization": params.utilization,
        "clutch_time": params.clutch_time,
        "max_distance": max_d,
        "step": args.step,
        "widths": widths,
    })
    print(f"wrote {len(rows)} predictions to {args.out}")
    for w in widths:
        cross = models.crossover_distance(w, params, max_d, step=args.step)
        if cross is None:
            print(f"W={w:g} mm: no crossover up to {max_d:g} mm")
        else:
            print(f"W={w:g} mm: hybrid overtakes clutching at D={cross:g} mm")
    return 0


def _cmd_simulate(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    if not isinstance(manifest, dict):
        raise ConfigError("manifest must be a JSON object")
    if args.seed is not None:
        manifest["seed"] = args.seed
    logs, rows = simkit.run_manifest(manifest, args.out)
    print(f"ran {len(logs)} trials, {len(rows)} conditions -> {args.out}")
    for row in rows:
        print(f"  {row['technique']:>13s} {row['transfer']:>13s} "
              f"D={row['distance_mm']:g} W={row['width_mm']:g}: "
              f"{row['selection_mean_s']:.3f} s "
              f"(95% CI +/- {row['selection_ci95_s']:.3f}, n={row['n']})")
    return 0


def _read_points(path) -> list[tuple[float, float]]:
    pts = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ConfigError(f"{path}: expected two columns (x_mm,y_mm)")
    return [(float(x), float(y)) for x, y in pts]


def _cmd_calibrate(args) -> int:
    boundary = _read_points(args.trace)
    pushes = _read_points(args.pushes)
    fit = calibration.fit_boundary(boundary)
    prof = calibration.build_force_profile(fit, pushes)
    prof.save(args.out)
    print(f"centre ({fit.centre[0]:.3f}, {fit.centre[1]:.3f}) mm, "
          f"radius {fit.radius:.3f} mm, rms residual {fit.rms_residual:.4f} mm")
    print(f"wrote profile to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    serve.serve_forever(args.host, args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posrate",
        description="Hybrid position/rate pointer control toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", help="movement-time model sweep to CSV")
    p.add_argument("--device", choices=sorted(models.PRESETS), default="laptop")
    p.add_argument("--widths", default="4", help="comma-separated target widths, mm")
    p.add_argument("--max-distance", type=float, default=None,
                   help="sweep upper bound, mm (default: twice the display diagonal)")
    p.add_argument("--step", type=float, default=1.0, help="sweep step, mm")
    p.add_argument("--clutch-time", type=float, default=None)
    p.add_argument("--utilization", type=float, default=None)
    p.add_argument("--fitts-isotonic", default=None, metavar="A,B",
                   help="intercept and throughput for aimed movements")
    p.add_argument("--fitts-elastic", default=None, metavar="A,B")
    p.add_argument("--out", default="model.csv")
    p.set_defaults(func=_cmd_model)

    p = sub.add_parser("simulate", help="run a simulated experiment manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the manifest seed")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("calibrate", help="fit a force profile from traces")
    p.add_argument("--trace", required=True, help="boundary trace CSV (x_mm,y_mm)")
    p.add_argument("--pushes", required=True, help="radial push extremes CSV (x_mm,y_mm)")
    p.add_argument("--out", default="profile.json")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("serve", help="run the TCP step service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8377)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, calibration.CalibrationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
