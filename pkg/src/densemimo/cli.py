"""Command line entry point: ``densemimo {sweep,theorem,pattern}``.

Settings resolve as: built-in defaults < YAML file given by ``--config`` < flags.
Failures print one line ``error: <Kind>: <message>`` to stderr and exit with 1.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np
import yaml

from . import io
from .array_geometry import ArrayConfig, beam_pattern
from .experiment import ExperimentConfig, ExperimentError, StudyConfig, run_sweep, run_theorem_study

# flag dest -> config field
_SWEEP_FIELDS = {
    "lt": "lt",
    "lr": "lr",
    "dt": "dt_list",
    "dr": "dr",
    "paths": "paths",
    "snr_db_start": "snr_db_start",
    "snr_db_stop": "snr_db_stop",
    "snr_db_step": "snr_db_step",
    "trials": "trials",
    "seed": "base_seed",
    "schemes": "schemes",
    "covariance": "covariance",
    "clip_eps": "clip_eps",
    "quad_order": "quad_order",
    "workers": "workers",
}
_STUDY_FIELDS = {
    "sizes": "sizes",
    "dts": "dt_list",
    "lt": "lt",
    "alpha": "alpha",
    "dt": "dt",
    "dr": "dr",
    "snr_db": "snr_db",
    "trials": "trials",
    "seed": "base_seed",
    "paths": "paths",
    "clip_eps": "clip_eps",
    "quad_order": "quad_order",
    "workers": "workers",
}


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _output_flags(p: argparse.ArgumentParser):
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML file with config fields")
    p.add_argument("--dr", type=float)
    p.add_argument("--paths", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--clip-eps", type=float, help="scale cosines into [-(1-eps), 1-eps]")
    p.add_argument("--quad-order", type=int, help="Gauss-Hermite nodes per real dimension")
    p.add_argument("--workers", type=int, help="worker processes for trials")
    _output_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="densemimo", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="ergodic rates versus normalized SNR")
    sw.add_argument("--lt", type=float)
    sw.add_argument("--lr", type=float)
    sw.add_argument("--dt", type=_float_list, help="comma-separated transmit separations")
    sw.add_argument("--snr-db-start", type=float)
    sw.add_argument("--snr-db-stop", type=float)
    sw.add_argument("--snr-db-step", type=float)
    sw.add_argument("--schemes", type=_str_list, help="subset of gaussian,qpsk,qam16")
    sw.add_argument("--covariance", choices=("auto", "dense", "critical"))
    _common_flags(sw)

    th = sub.add_parser("theorem", help="normalized-gap trends along size/separation ladders")
    th.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    th.add_argument("--sizes", type=_float_list, help="Lt ladder for studies 1 and 2")
    th.add_argument("--dts", type=_float_list, help="Dt ladder for study 3")
    th.add_argument("--lt", type=float, help="fixed Lt for study 3")
    th.add_argument("--alpha", type=float, help="load Lt / Lr")
    th.add_argument("--dt", type=float, help="transmit separation for studies 1 and 2")
    th.add_argument("--snr-db", type=float)
    _common_flags(th)

    pa = sub.add_parser("pattern", help="beam pattern |f(k/L - cos phi)|")
    pa.add_argument("--lt", type=float, default=4.0, help="array length L")
    pa.add_argument("--dt", type=float, default=0.5, help="separation")
    pa.add_argument("--k", type=int, default=0, help="beam index")
    pa.add_argument("--points", type=int, default=360, help="angles on [0, 2 pi)")
    _output_flags(pa)
    return parser


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ExperimentError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    if not isinstance(data, dict):
        raise ExperimentError(f"config {path} must be a mapping")
    return data


def _merge(args, mapping: dict) -> dict:
    values = _load_config(args.config)
    for dest, name in mapping.items():
        v = getattr(args, dest, None)
        if v is not None:
            values[name] = v
    return values


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text)


def cmd_sweep(args) -> None:
    cfg = ExperimentConfig.from_mapping(_merge(args, _SWEEP_FIELDS))
    text = io.emit(run_sweep(cfg), args.format, args.out)
    _write(text, args.out)


def cmd_theorem(args) -> None:
    values = _merge(args, _STUDY_FIELDS)
    try:
        cfg = StudyConfig(**values)
    except TypeError as exc:
        raise ExperimentError(str(exc)) from exc
    sizes = values.get("dt_list") if args.which == 3 else values.get("sizes")
    points = run_theorem_study(args.which, sizes, cfg)
    text = io.emit(points, args.format, args.out, columns=io.GAP_COLUMNS)
    _write(text, args.out)


def cmd_pattern(args) -> None:
    if args.points < 0:
        raise ExperimentError(f"points must be >= 0, got {args.points}")
    cfg = ArrayConfig(args.lt, args.dt)
    phi = 2 * math.pi * np.arange(args.points) / max(args.points, 1)
    rows = [{"phi": a, "magnitude": m} for a, m in beam_pattern(cfg, args.k, phi)]
    text = io.emit(rows, args.format, args.out, columns=io.PATTERN_COLUMNS)
    _write(text, args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    handler = {"sweep": cmd_sweep, "theorem": cmd_theorem, "pattern": cmd_pattern}[args.command]
    try:
        handler(args)
    except (ValueError, ArithmeticError, OSError, TypeError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
