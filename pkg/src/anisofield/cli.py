"""Command-line front end.

Six subcommands drive the library end to end: ``analyze`` (legitimacy,
exponents, differentiability report), ``variogram`` (table over lag
vectors), ``simulate`` (seeded synthesis over a grid), ``krige``
(predictions with variances at target sites), ``dims`` (fractal
dimension report), and ``verify`` (the built-in acceptance battery).

Exit codes: 0 success, 1 invalid model or parameters (or a failed
verify), 2 numerical failure, 3 unreadable or malformed files.

Flags override config-file values and the config file overrides
defaults: ``--config`` names a JSON object whose keys are the long flag
names with dashes replaced by underscores.  Every output embeds the
model, the seed, the resolved quadrature settings, and the tool
version; no timestamps, so identical inputs give byte-identical
outputs.
"""

import argparse
import dataclasses
import sys

import numpy as np

from . import __version__
from .errors import (AnisoFieldError, FileFormatError, ModelError)
from .fileio import (read_csv, read_json, write_field_afld, write_field_csv,
                     write_json, write_prediction_csv, write_variogram_csv)
from .fractal import dimension_report, gneiting_dimensions
from .kriging import Observations, krige
from .models import legitimacy_check, model_from_dict, model_to_dict
from .quadrature import QuadratureSpec
from .simulate import Grid, SynthesisSpec, multi_copy_field
from .smoothness import ms_derivative_report
from .variogram import gneiting_from_dict, gneiting_to_dict, variogram_table
from .verify import format_table, run_suites

_DEFAULTS = {
    "seed": 0,
    "lattice": 4096,
    "realizations": 1,
    "p": 1,
    "suite": "all",
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="anisofield",
        description="Spectral models with stationary increments: analysis, "
                    "variograms, simulation, kriging, fractal dimensions.")
    parser.add_argument("--version", action="version",
                        version=f"anisofield {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        p.add_argument("--config", metavar="FILE",
                       help="JSON object of default flag values")
        if model:
            p.add_argument("--model", metavar="FILE",
                           help="spectral model JSON document")
        p.add_argument("--truncation", type=float, metavar="L",
                       help="quadrature truncation half-width")
        p.add_argument("--panels", type=int, metavar="N",
                       help="quadrature panel budget per axis")
        p.add_argument("--tail-order", type=int, metavar="K",
                       help="tail boundary terms (0, 1 or 2)")
        p.add_argument("--rel-tol", type=float, metavar="TOL",
                       help="quadrature relative error tolerance")

    p = sub.add_parser("analyze", help="legitimacy, exponents and "
                                       "differentiability report")
    common(p)
    p.add_argument("--out", metavar="FILE", help="report JSON path")

    p = sub.add_parser("variogram", help="variogram table over lag vectors")
    common(p)
    p.add_argument("--lags", metavar="FILE",
                   help="CSV of lag vectors, columns h_1..h_N")
    p.add_argument("--out", metavar="FILE", help="output CSV path")

    p = sub.add_parser("simulate", help="seeded synthesis over a grid")
    common(p)
    p.add_argument("--grid", metavar="SPEC",
                   help="per-axis start:stop:count, comma separated; count "
                        "points from start with spacing (stop-start)/count")
    p.add_argument("--lattice", type=int, metavar="N",
                   help="frequency cells per axis (default 4096)")
    p.add_argument("--seed", type=int, metavar="S", help="base seed (default 0)")
    p.add_argument("--realizations", type=int, metavar="R",
                   help="independent copies (default 1)")
    p.add_argument("--threads", type=int, metavar="T",
                   help="evaluation threads (default ANISOFIELD_THREADS or 1)")
    p.add_argument("--format", choices=("csv", "afld"),
                   help="output format (default: afld when --out ends in "
                        ".afld or .afld1, else csv)")
    p.add_argument("--out", metavar="FILE", help="output path")

    p = sub.add_parser("krige", help="simple-kriging predictions")
    common(p)
    p.add_argument("--obs", metavar="FILE",
                   help="observations CSV, columns t_1..t_N,value")
    p.add_argument("--targets", metavar="FILE",
                   help="target sites CSV, columns t_1..t_N")
    p.add_argument("--out", metavar="FILE", help="output CSV path")

    p = sub.add_parser("dims", help="fractal dimension report")
    common(p, model=False)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--model", metavar="FILE",
                       help="spectral model JSON document")
    group.add_argument("--gneiting", metavar="FILE",
                       help="space-time covariance model JSON document")
    p.add_argument("--p", type=int, metavar="P",
                   help="number of independent copies (default 1)")
    p.add_argument("--out", metavar="FILE", help="report JSON path")

    p = sub.add_parser("verify", help="run the acceptance battery")
    p.add_argument("--config", metavar="FILE",
                   help="JSON object of default flag values")
    p.add_argument("--suite", metavar="NAME",
                   help="fbm, exponents, simulation, kriging, dims, "
                        "smoothness, derivative, modulus, or all (default)")
    return parser


def _resolve(args, name, required=False):
    """Flag value, else config-file value, else hard default."""
    value = getattr(args, name, None)
    if value is None:
        value = getattr(args, "_config", {}).get(name)
    if value is None:
        value = _DEFAULTS.get(name)
    if value is None and required:
        raise ModelError(f"missing required option --{name.replace('_', '-')}")
    return value


def _load_config(args):
    path = getattr(args, "config", None)
    config = read_json(path) if path else {}
    if not isinstance(config, dict):
        raise FileFormatError(f"{path}: config must be a JSON object")
    args._config = config


def _quad_spec(args):
    fields = {}
    for name in ("truncation", "panels", "tail_order", "rel_tol"):
        value = _resolve(args, name)
        if value is not None:
            fields[name] = value
    return QuadratureSpec(**fields)


def _load_model(args):
    path = _resolve(args, "model", required=True)
    model = model_from_dict(read_json(path))
    verdict = legitimacy_check(model)
    if not verdict.ok:
        raise ModelError(f"illegitimate model: {verdict.reason}")
    return model


def _parse_grid(spec):
    if not spec:
        raise ModelError("missing required option --grid")
    origin, spacing, shape = [], [], []
    for axis_spec in str(spec).split(","):
        parts = axis_spec.split(":")
        if len(parts) != 3:
            raise ModelError(
                f"grid axis {axis_spec!r} must look like start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ModelError(f"grid axis {axis_spec!r} is not numeric") from None
        if count < 1 or not stop > start:
            raise ModelError(
                f"grid axis {axis_spec!r} needs stop > start and count >= 1")
        origin.append(start)
        spacing.append((stop - start) / count)
        shape.append(count)
    return Grid(origin=tuple(origin), spacing=tuple(spacing), shape=tuple(shape))


def _provenance(quad, seed=None, model_doc=None, extra=None):
    doc = {"tool": "anisofield", "version": __version__,
           "quadrature": dataclasses.asdict(quad)}
    if seed is not None:
        doc["seed"] = int(seed)
    if model_doc is not None:
        doc["model"] = model_doc
    if extra:
        doc.update(extra)
    return doc


def _cmd_analyze(args):
    quad = _quad_spec(args)
    model = _load_model(args)
    report = ms_derivative_report(model, quad)
    exps = report.exponents
    doc = {
        "provenance": _provenance(quad, model_doc=model_to_dict(model)),
        "legitimate": True,
        "h": list(exps.h),
        "q": exps.q,
        "h_bar": list(exps.h_bar),
        "ms_differentiable": report.ms_differentiable,
        "sample_path_differentiable": report.sample_path_differentiable,
        "axes": [
            {"axis": j, "h": exps.h[j], "differentiable": report.exists[j],
             "margin": report.margins[j],
             "derivative_variance": report.derivative_variance[j]}
            for j in range(model.dims)
        ],
    }
    if model.kind == "stein":
        doc["noninteger_alpha"] = [
            j for j, a in enumerate(model.stein_alpha)
            if not float(a).is_integer()]
    out = _resolve(args, "out", required=True)
    write_json(out, doc)
    print(f"wrote {out}")
    return 0


def _cmd_variogram(args):
    quad = _quad_spec(args)
    model = _load_model(args)
    lags_path = _resolve(args, "lags", required=True)
    lags = read_csv(lags_path)
    if lags.shape[1] != model.dims:
        raise ModelError(
            f"lag rows have {lags.shape[1]} columns, model has {model.dims} axes")
    table = variogram_table(model, lags, quad)
    out = _resolve(args, "out", required=True)
    write_variogram_csv(out, table,
                        _provenance(quad, model_doc=model_to_dict(model)))
    print(f"wrote {out} ({len(table.values)} lags)")
    return 0


def _cmd_simulate(args):
    quad = _quad_spec(args)
    model = _load_model(args)
    grid = _parse_grid(_resolve(args, "grid", required=True))
    seed = int(_resolve(args, "seed"))
    lattice = int(_resolve(args, "lattice"))
    channels = int(_resolve(args, "realizations"))
    threads = _resolve(args, "threads")
    spec = SynthesisSpec(threads=None if threads is None else int(threads))
    sample = multi_copy_field(model, grid, lattice=lattice, channels=channels,
                              seed=seed, spec=spec)
    out = _resolve(args, "out", required=True)
    fmt = _resolve(args, "format")
    if fmt is None:
        fmt = "afld" if str(out).endswith((".afld", ".afld1")) else "csv"
    provenance = _provenance(quad, seed=seed, model_doc=model_to_dict(model))
    if fmt == "afld":
        write_field_afld(out, sample, provenance)
    else:
        write_field_csv(out, sample, {**provenance, **sample.metadata})
    print(f"wrote {out} ({grid.npoints} points x {channels} realizations, "
          f"{fmt})")
    return 0


def _cmd_krige(args):
    quad = _quad_spec(args)
    model = _load_model(args)
    obs_rows = read_csv(_resolve(args, "obs", required=True),
                        min_columns=model.dims + 1)
    if obs_rows.shape[1] != model.dims + 1:
        raise ModelError(
            f"observation rows need {model.dims + 1} columns "
            f"(t_1..t_{model.dims}, value)")
    obs = Observations(sites=obs_rows[:, :model.dims],
                       values=obs_rows[:, model.dims], model=model)
    targets = read_csv(_resolve(args, "targets", required=True))
    if targets.shape[1] != model.dims:
        raise ModelError(f"target rows need {model.dims} columns")
    predictions, variances = [], []
    for site in targets:
        result = krige(obs, site, quad)
        predictions.append(result.prediction)
        variances.append(result.variance)
    out = _resolve(args, "out", required=True)
    write_prediction_csv(out, targets, predictions, variances,
                         _provenance(quad, model_doc=model_to_dict(model)))
    print(f"wrote {out} ({len(predictions)} predictions)")
    return 0


def _marker_text(value):
    return value if isinstance(value, (int, float)) else repr(value)


def _cmd_dims(args):
    quad = _quad_spec(args)
    p = int(_resolve(args, "p"))
    gneiting_path = _resolve(args, "gneiting")
    if gneiting_path is not None:
        gm = gneiting_from_dict(read_json(gneiting_path))
        report = gneiting_dimensions(gm, p)
        model_doc = gneiting_to_dict(gm)
    else:
        model = _load_model(args)
        report = dimension_report(model, p)
        model_doc = model_to_dict(model)
    doc = {
        "provenance": _provenance(quad, model_doc=model_doc),
        "p": report.p,
        "h_bar_sorted": list(report.h_bar_sorted),
        "range_dim": report.range_dim,
        "graph_dim": report.graph_dim,
        "graph_argmin": report.graph_argmin,
        "level_dim": _marker_text(report.level_dim),
        "level_argmin": report.level_argmin,
        "level_qualifier": "holds with positive probability, not almost surely",
        "method": report.method,
    }
    out = _resolve(args, "out", required=True)
    write_json(out, doc)
    print(f"wrote {out}")
    return 0


def _cmd_verify(args):
    suite = str(_resolve(args, "suite"))
    results = run_suites([s.strip() for s in suite.split(",") if s.strip()])
    print(format_table(results))
    return 0 if all(r.passed for r in results) else 1


_HANDLERS = {
    "analyze": _cmd_analyze,
    "variogram": _cmd_variogram,
    "simulate": _cmd_simulate,
    "krige": _cmd_krige,
    "dims": _cmd_dims,
    "verify": _cmd_verify,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _load_config(args)
        return _HANDLERS[args.command](args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AnisoFieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
