"""Command-line interface.

Subcommands: ``fit``, ``compare``, ``sample``, ``eval`` and ``km``.  Results
go to stdout (or ``--output``) as CSV or as a JSON envelope with ``meta``
and ``result`` members.  Numbers are written with 17 significant digits so
a text round-trip reproduces the exact double.

Exit codes: 0 success, 2 usage error, 3 data error, 4 convergence failure,
5 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, inference, model_selection
from .core import BFWParams, bfw_sample
from .datasets import ingest
from .errors import (
    ConvergenceError,
    DataFormatError,
    DomainError,
    ExpansionStabilityError,
    NoInteriorModeError,
    NumericError,
    QuadratureAccuracyError,
    SaturationError,
    SeriesTermOverflowError,
)
from .flexible_weibull import FWParams
from .inference import OptimizerConfig, covariance_from_information, interval_bounds

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CONVERGENCE = 4
EXIT_NUMERIC = 5

_NUMERIC_ERRORS = (
    SaturationError,
    NumericError,
    QuadratureAccuracyError,
    SeriesTermOverflowError,
    ExpansionStabilityError,
    NoInteriorModeError,
    OverflowError,
    FloatingPointError,
    np.linalg.LinAlgError,
)


def _fmt(value):
    return format(float(value), ".17g")


def _json_value(value):
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bfw",
        description="Beta flexible Weibull lifetime model: fitting, comparison, "
        "sampling and curve evaluation.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", parents=[common], help="maximum-likelihood fit")
    fit.add_argument("--data", required=True, help="file of positive reals, or 'pumps'")
    fit.add_argument("--family", choices=("bfw", "fw", "weibull"), default="bfw")
    fit.add_argument("--level", type=float, default=0.95, help="confidence level")
    fit.add_argument("--starts", type=int, default=16, help="multi-start count (bfw)")
    fit.add_argument("--tol", type=float, default=1e-6, help="score tolerance (bfw)")
    fit.add_argument("--weibull-form", choices=("scale", "rate"), default="scale")

    compare = sub.add_parser("compare", parents=[common], help="criteria comparison table")
    compare.add_argument("--data", required=True)
    compare.add_argument("--families", default="bfw,fw,weibull")
    compare.add_argument("--starts", type=int, default=16)
    compare.add_argument("--tol", type=float, default=1e-6)
    compare.add_argument("--weibull-form", choices=("scale", "rate"), default="scale")

    sample = sub.add_parser("sample", parents=[common], help="draw random variates")
    sample.add_argument("--n", type=int, required=True)
    sample.add_argument("--params", required=True, help="alpha,beta,p,q")
    sample.add_argument("--seed", type=int, required=True)

    ev = sub.add_parser("eval", parents=[common], help="distribution curves on a grid")
    ev.add_argument("--family", choices=("bfw", "fw", "weibull"), default="bfw")
    ev.add_argument("--params", required=True, help="comma-separated family parameters")
    ev.add_argument("--grid", required=True, help="lo:hi:count, strictly positive")
    ev.add_argument("--weibull-form", choices=("scale", "rate"), default="scale")

    km = sub.add_parser("km", parents=[common], help="empirical step curves")
    km.add_argument("--data", required=True)
    return parser


def _parse_params(text, count, label):
    parts = [part.strip() for part in text.split(",") if part.strip()]
    if len(parts) != count:
        raise DomainError(f"--params expects {count} values for {label}, got {len(parts)}")
    try:
        return [float(part) for part in parts]
    except ValueError as exc:
        raise DomainError(f"--params: {exc}") from None


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError("--grid expects lo:hi:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise DomainError(f"--grid: {exc}") from None
    if count < 1:
        raise DomainError("--grid count must be at least 1")
    if lo <= 0.0 or hi <= 0.0 or hi < lo:
        raise DomainError("--grid endpoints must be strictly positive with lo <= hi")
    return np.linspace(lo, hi, count)


def _family_estimates(args, values):
    """Map a flat parameter vector to the family's named estimates."""
    if args.family == "bfw":
        params = BFWParams(*values)
        return {"alpha": params.alpha, "beta": params.beta, "p": params.p, "q": params.q}
    if args.family == "fw":
        params = FWParams(*values)
        return {"alpha": params.alpha, "beta": params.beta}
    if args.weibull_form == "scale":
        shape, scale = values
        if shape <= 0 or scale <= 0:
            raise DomainError("weibull parameters must be strictly positive")
        return {"shape": shape, "scale": scale}
    rate, shape = values
    if rate <= 0 or shape <= 0:
        raise DomainError("weibull parameters must be strictly positive")
    return {"rate": rate, "shape": shape}


def _get_family(args):
    kwargs = {}
    if getattr(args, "weibull_form", None):
        kwargs["weibull_parameterization"] = args.weibull_form
    if getattr(args, "starts", None) is not None and args.family == "bfw":
        kwargs["optimizer_config"] = OptimizerConfig(starts=args.starts, score_tol=args.tol)
    return model_selection.get_family(args.family, **kwargs)


def _weibull_shape_scale(estimates):
    shape = estimates["shape"]
    if "scale" in estimates:
        return shape, estimates["scale"]
    return shape, estimates["rate"] ** (-1.0 / shape)


def _weibull_covariance(data, estimates):
    """Observed information by finite differences of the analytic gradient,
    reported in the requested parameterization via the delta method."""
    shape, scale = _weibull_shape_scale(estimates)
    theta = np.array([shape, scale])
    info = np.empty((2, 2))
    for j in range(2):
        step = 1e-6 * theta[j]
        hi = theta.copy()
        hi[j] += step
        lo = theta.copy()
        lo[j] -= step
        g_hi = model_selection.weibull_loglik_grad(data.times, *hi)[1]
        g_lo = model_selection.weibull_loglik_grad(data.times, *lo)[1]
        info[:, j] = -(g_hi - g_lo) / (2.0 * step)
    info = 0.5 * (info + info.T)
    cov, cond = covariance_from_information(info)
    if cov is not None and "rate" in estimates:
        rate = estimates["rate"]
        jac = np.array([
            [-math.log(scale) * rate, -shape * rate / scale],
            [1.0, 0.0],
        ])
        cov = jac @ cov @ jac.T
    return cov, cond


def _run_fit(args):
    data = ingest(args.data)
    meta = _meta(args, seed=None)
    if args.family == "bfw":
        config = OptimizerConfig(starts=args.starts, score_tol=args.tol, level=args.level)
        result = inference.fit_mle(data, config)
        estimates = {
            "alpha": result.estimates.alpha,
            "beta": result.estimates.beta,
            "p": result.estimates.p,
            "q": result.estimates.q,
        }
        ll = result.log_likelihood
        covariance = result.covariance
        condition = result.condition_number
        intervals = inference.confidence_intervals(result, args.level) \
            if result.covariance is not None else (None,) * 4
        converged = result.converged
        extra = {
            "converged": converged,
            "iterations": result.iterations,
            "multistart_best_of": result.multistart_best_of,
            "score": [float(s) for s in result.score_at_optimum],
        }
        family = _get_family(args)
    else:
        family = _get_family(args)
        estimates, ll = family.fit(data)
        if args.family == "fw":
            params = (estimates["alpha"], estimates["beta"], 1.0, 1.0)
            info = inference.observed_information(data, params)[:2, :2]
            covariance, condition = covariance_from_information(info)
            grad = inference.score(data, params)[:2]
        else:
            covariance, condition = _weibull_covariance(data, estimates)
            shape, scale = _weibull_shape_scale(estimates)
            grad = model_selection.weibull_loglik_grad(data.times, shape, scale)[1]
        converged = bool(np.max(np.abs(grad)) <= 1e-5)
        values = np.array(list(estimates.values()))
        intervals = (
            interval_bounds(values, np.diag(covariance), args.level)
            if covariance is not None
            else (None,) * len(values)
        )
        extra = {"converged": converged, "score": [float(g) for g in grad]}
    criteria = model_selection.information_criteria(ll, family.parameter_count, data.n)
    ks = model_selection.ks_statistic(data, lambda x: family.cdf(x, estimates))
    names = list(estimates)
    result_obj = {
        "model": family.name,
        "estimates": estimates,
        "log_likelihood": ll,
        "minus_two_ll": -2.0 * ll,
        "aic": criteria.aic,
        "aicc": criteria.aicc,
        "bic": criteria.bic,
        "hqic": criteria.hqic,
        "ks": ks,
        "covariance": None if covariance is None else [[float(v) for v in row] for row in covariance],
        "condition_number": condition,
        "ci": {
            "level": args.level,
            **{
                name: (None if interval is None else [interval[0], interval[1]])
                for name, interval in zip(names, intervals)
            },
        },
        **extra,
    }
    exit_code = EXIT_OK if extra["converged"] else EXIT_CONVERGENCE
    return meta, result_obj, _render_fit_csv(result_obj), exit_code


def _render_fit_csv(result):
    lines = ["field,value"]

    def put(field, value):
        if value is None:
            lines.append(f"{field},")
        elif isinstance(value, bool):
            lines.append(f"{field},{str(value).lower()}")
        elif isinstance(value, (int, float)):
            lines.append(f"{field},{_fmt(value)}")
        else:
            lines.append(f"{field},{value}")

    put("model", result["model"])
    for name, value in result["estimates"].items():
        put(f"estimate.{name}", value)
    for key in ("log_likelihood", "minus_two_ll", "aic", "aicc", "bic", "hqic", "ks"):
        put(key, result[key])
    names = list(result["estimates"])
    if result["covariance"] is not None:
        for i, row in enumerate(result["covariance"]):
            for j, value in enumerate(row):
                put(f"covariance.{names[i]}.{names[j]}", value)
    put("condition_number", result.get("condition_number"))
    put("ci.level", result["ci"]["level"])
    for name in names:
        interval = result["ci"][name]
        if interval is None:
            put(f"ci.{name}.lower", None)
            put(f"ci.{name}.upper", None)
        else:
            put(f"ci.{name}.lower", interval[0])
            put(f"ci.{name}.upper", interval[1])
    put("converged", result["converged"])
    for i, value in enumerate(result.get("score", [])):
        put(f"score.{i}", value)
    if "iterations" in result:
        put("iterations", result["iterations"])
        put("multistart_best_of", result["multistart_best_of"])
    return "\n".join(lines) + "\n"


def _run_compare(args):
    data = ingest(args.data)
    names = [name.strip() for name in args.families.split(",") if name.strip()]
    if not names:
        raise DomainError("--families must name at least one family")
    families = []
    for name in names:
        kwargs = {"weibull_parameterization": args.weibull_form}
        if name.lower() == "bfw":
            kwargs["optimizer_config"] = OptimizerConfig(starts=args.starts, score_tol=args.tol)
        families.append(model_selection.get_family(name, **kwargs))
    table = model_selection.compare_models(data, families)
    rows = []
    for row in table.rows:
        rows.append(
            {
                "model": row.model,
                "estimates": row.estimates,
                "log_likelihood": _json_value(row.log_likelihood),
                "minus_two_ll": _json_value(row.minus_two_ll),
                "aic": _json_value(row.aic),
                "aicc": _json_value(row.aicc),
                "bic": _json_value(row.bic),
                "hqic": _json_value(row.hqic),
                "ks": _json_value(row.ks),
                "error": row.error,
            }
        )
    result = {"label": table.label, "n": table.n, "rows": rows}
    lines = ["model,parameters,log_likelihood,minus_two_ll,aic,aicc,bic,hqic,ks,error"]
    for row in table.rows:
        params = (
            ";".join(f"{k}={_fmt(v)}" for k, v in row.estimates.items())
            if row.estimates
            else ""
        )
        cells = [row.model, params]
        for value in (
            row.log_likelihood, row.minus_two_ll, row.aic, row.aicc, row.bic, row.hqic, row.ks,
        ):
            cells.append(_fmt(value))
        cells.append(row.error or "")
        lines.append(",".join(cells))
    return _meta(args, seed=None), result, "\n".join(lines) + "\n", EXIT_OK


def _run_sample(args):
    if args.n < 0:
        raise DomainError("--n must be non-negative")
    values = _parse_params(args.params, 4, "bfw")
    params = BFWParams(*values)
    draws = bfw_sample(args.n, params, args.seed)
    result = {"values": [float(v) for v in draws]}
    csv_text = "".join(_fmt(v) + "\n" for v in draws)
    return _meta(args, seed=args.seed), result, csv_text, EXIT_OK


def _run_eval(args):
    grid = _parse_grid(args.grid)
    count = {"bfw": 4, "fw": 2, "weibull": 2}[args.family]
    estimates = _family_estimates(args, _parse_params(args.params, count, args.family))
    family = _get_family(args)
    pdf = np.asarray(family.pdf(grid, estimates), dtype=float)
    cdf = np.asarray(family.cdf(grid, estimates), dtype=float)
    survival = 1.0 - cdf
    if np.any(survival <= 0.0):
        raise SaturationError("survival underflowed to zero on the requested grid")
    hazard = pdf / survival
    columns = ["x", "pdf", "cdf", "survival", "hazard"]
    rows = np.column_stack([grid, pdf, cdf, survival, hazard])
    result = {"columns": columns, "rows": [[float(v) for v in row] for row in rows]}
    lines = [",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return _meta(args, seed=None), result, "\n".join(lines) + "\n", EXIT_OK


def _run_km(args):
    data = ingest(args.data)
    emp = model_selection.ecdf(data)
    km = model_selection.kaplan_meier(data)
    times = np.concatenate(([0.0], emp.times))
    ecdf_vals = np.concatenate(([emp.initial_value], emp.values))
    km_vals = np.concatenate(([km.initial_value], km.values))
    columns = ["time", "ecdf", "km_survival"]
    rows = np.column_stack([times, ecdf_vals, km_vals])
    result = {"columns": columns, "rows": [[float(v) for v in row] for row in rows]}
    lines = [",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return _meta(args, seed=None), result, "\n".join(lines) + "\n", EXIT_OK


_COMMANDS = {
    "fit": _run_fit,
    "compare": _run_compare,
    "sample": _run_sample,
    "eval": _run_eval,
    "km": _run_km,
}


def _meta(args, seed):
    config = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in ("command",) and not key.startswith("_")
    }
    return {
        "command": args.command,
        "version": __version__,
        "seed": seed,
        "config": config,
    }


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _write(args, text):
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="\n") as handle:
            handle.write(text)


def _emit(args, meta, result, csv_text):
    if args.format == "json":
        envelope = {"meta": _sanitize(meta), "result": _sanitize(result)}
        _write(args, json.dumps(envelope, indent=2, allow_nan=False) + "\n")
    else:
        _write(args, csv_text)


def _fail(args, code, exc):
    sys.stderr.write(f"bfw: error: {exc}\n")
    if getattr(args, "format", "csv") == "json":
        envelope = {
            "meta": _sanitize(_meta(args, seed=getattr(args, "seed", None))),
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _write(args, json.dumps(envelope, indent=2, allow_nan=False) + "\n")
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        meta, result, csv_text, exit_code = _COMMANDS[args.command](args)
    except (DataFormatError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        return _fail(args, EXIT_DATA, exc)
    except ConvergenceError as exc:
        return _fail(args, EXIT_CONVERGENCE, exc)
    except DomainError as exc:
        return _fail(args, EXIT_USAGE, exc)
    except _NUMERIC_ERRORS as exc:
        return _fail(args, EXIT_NUMERIC, exc)
    _emit(args, meta, result, csv_text)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
