"""Command-line interface: ``mlefit {sample,fit,mc,eval}``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical
non-convergence (the partial result is still printed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import distributions as dist
from . import harness
from .configfile import load_experiment_config
from .errors import ConvergenceError, DomainError, NonConvergenceError
from .estimators import (
    estimate_gml_fractional,
    estimate_gml_logmoment,
    estimate_ml_fractional,
    estimate_ml_logmoment,
    log_summary,
    ml_confidence_intervals,
)
from .sampling import RngStream, sample_gml, sample_ml
from .special_fn import mittag_leffler

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3

SEED_ENV = "MLEFIT_SEED"
MC_HEADER = "# mlefit-mc v1"
MC_COLUMNS = (
    "alpha_true",
    "param2_true",
    "n",
    "estimator",
    "bias_p1",
    "se_bias_p1",
    "rmse_p1",
    "bias_p2",
    "se_bias_p2",
    "rmse_p2",
    "failures",
)


class UsageError(Exception):
    pass


def _fmt17(x: float) -> str:
    return format(x, ".17g")


def _fmt15(x: float) -> str:
    return format(x, ".15g")


def _round15(x: float) -> float:
    return float(_fmt15(x))


def _resolve_seed(seed: int | None, required: bool) -> int | None:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    if required:
        raise UsageError(f"a seed is required: pass --seed or set {SEED_ENV}")
    return None


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _make_params(args):
    if args.dist == "ml":
        if args.delta is None:
            raise UsageError("--delta is required for --dist ml")
        return dist.MLParams(args.alpha, args.delta)
    if args.beta is None:
        raise UsageError("--beta is required for --dist gml")
    return dist.GMLParams(args.alpha, args.beta)


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args) -> int:
    params = _make_params(args)
    if args.n < 1:
        raise UsageError(f"--n must be a positive integer, got {args.n}")
    seed = _resolve_seed(args.seed, required=False)
    rng = RngStream(seed) if seed is not None else RngStream.from_entropy()
    sampler = sample_ml if args.dist == "ml" else sample_gml
    values = sampler(rng, params, args.n)
    out, close = _open_out(args.out)
    try:
        out.write("".join(_fmt17(v) + "\n" for v in values))
    finally:
        if close:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# fit


def read_data(stream) -> list[float]:
    data = []
    for lineno, raw in enumerate(stream, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            value = float(text.replace("−", "-"))
        except ValueError:
            raise UsageError(f"line {lineno}: cannot parse {text!r} as a number") from None
        if not value > 0.0 or not math.isfinite(value):
            raise UsageError(f"line {lineno}: datum must be positive")
        data.append(value)
    if len(data) < 2:
        raise UsageError(f"need at least 2 data values, got {len(data)}")
    return data


def _fit(args, data):
    if args.dist == "ml":
        if args.method == "log":
            return estimate_ml_logmoment(log_summary(data))
        return estimate_ml_fractional(data)
    if args.method == "log":
        return estimate_gml_logmoment(log_summary(data), args.psi_mode)
    return estimate_gml_fractional(data)


def cmd_fit(args) -> int:
    if args.ci_level is not None:
        if args.dist != "ml":
            raise UsageError("confidence intervals are only available for --dist ml")
        if not 0.0 < args.ci_level < 1.0:
            raise UsageError(f"--ci-level must be in (0, 1), got {args.ci_level}")
    if args.input is None or args.input == "-":
        data = read_data(sys.stdin)
    else:
        with open(args.input) as fh:
            data = read_data(fh)

    status = EXIT_OK
    try:
        fit = _fit(args, data)
    except NonConvergenceError as exc:
        fit, status = exc.result, EXIT_NONCONVERGENCE
        print(f"warning: {exc}", file=sys.stderr)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        payload = {
            "dist": args.dist,
            "alpha": None,
            "second_param": None,
            "method": args.method,
            "clamped": False,
            "converged": False,
        }
        print(json.dumps(payload))
        return EXIT_NONCONVERGENCE

    payload = {"dist": args.dist, **fit.as_dict()}
    if args.ci_level is not None:
        cis = ml_confidence_intervals(fit, len(data), args.ci_level)
        payload["ci"] = {
            "level": args.ci_level,
            "alpha": cis["alpha_ci"].as_list(),
            "delta": cis["delta_ci"].as_list(),
        }
    print(json.dumps(payload))
    return status


# ---------------------------------------------------------------------------
# mc


def _mc_rows(reports, estimators):
    for rep in reports:
        for method in estimators:
            s = rep.stats[method]
            yield {
                "alpha_true": rep.cell.param1,
                "param2_true": rep.cell.param2,
                "n": rep.cell.n,
                "estimator": method.value,
                "bias_p1": s.bias_p1,
                "se_bias_p1": s.se_bias_p1,
                "rmse_p1": s.rmse_p1,
                "bias_p2": s.bias_p2,
                "se_bias_p2": s.se_bias_p2,
                "rmse_p2": s.rmse_p2,
                "failures": s.failures,
            }


def _csv_value(v):
    if isinstance(v, float):
        return _fmt17(v)
    return str(v)


def format_mc_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(MC_HEADER + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(MC_COLUMNS)
    for row in rows:
        writer.writerow([_csv_value(row[c]) for c in MC_COLUMNS])
    return buf.getvalue()


def format_mc_long(rows) -> str:
    """Tidy long format: one line per (cell, estimator, parameter, metric)."""
    buf = io.StringIO()
    buf.write(MC_HEADER + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(("alpha_true", "param2_true", "n", "estimator", "parameter", "metric", "value"))
    for row in rows:
        key = [_csv_value(row[c]) for c in ("alpha_true", "param2_true", "n", "estimator")]
        for param in ("p1", "p2"):
            for metric in ("bias", "se_bias", "rmse"):
                writer.writerow(key + [param, metric, _fmt17(row[f"{metric}_{param}"])])
        writer.writerow(key + ["all", "failures", str(row["failures"])])
    return buf.getvalue()


def format_mc_json(rows) -> str:
    def clean(v):
        return None if isinstance(v, float) and math.isnan(v) else v

    return json.dumps([{k: clean(v) for k, v in row.items()} for row in rows], indent=2) + "\n"


def format_mc_pretty(rows, distribution) -> str:
    second = "delta" if distribution is harness.Distribution.ML else "beta"
    head = f"{'alpha':>6} {second:>7} {'n':>6} {'est':>5} {'bias_a':>9} {'rmse_a':>9} " \
           f"{'bias_' + second[0]:>10} {'rmse_' + second[0]:>10} {'fail':>5}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(
            f"{r['alpha_true']:>6g} {r['param2_true']:>7g} {r['n']:>6d} {r['estimator']:>5} "
            f"{r['bias_p1']:>9.3f} {r['rmse_p1']:>9.3f} {r['bias_p2']:>10.3f} {r['rmse_p2']:>10.3f} "
            f"{r['failures']:>5d}"
        )
    return "\n".join(lines) + "\n"


def build_mc_config(args) -> harness.ExperimentConfig:
    seed = _resolve_seed(args.seed, required=True)
    replicates = args.replicates
    if args.quick:
        replicates = harness.QUICK_REPLICATES
    overrides = {}
    if args.estimators:
        overrides["estimators"] = tuple(e.strip() for e in args.estimators.split(","))
    if args.psi_mode is not None:
        overrides["psi_mode"] = args.psi_mode
    if args.ddof is not None:
        overrides["ddof"] = args.ddof

    if args.table == "custom":
        if args.sizes:
            raise UsageError("--sizes applies only to --table 1 or 2")
        if not args.config:
            raise UsageError("--table custom requires --config FILE")
        cfg = load_experiment_config(args.config, seed)
        fields = {
            "distribution": cfg.distribution,
            "cells": cfg.cells,
            "master_seed": seed,
            "replicates": replicates if replicates is not None else cfg.replicates,
            "estimators": cfg.estimators,
            "psi_mode": cfg.psi_mode,
            "ddof": cfg.ddof,
        }
        fields.update(overrides)
        config = harness.ExperimentConfig(**fields)
    else:
        sizes = harness.TABLE_SIZES
        if args.sizes:
            try:
                sizes = tuple(int(s) for s in args.sizes.split(","))
            except ValueError:
                raise UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
        config = harness.table_config(
            int(args.table),
            seed,
            replicates if replicates is not None else harness.DEFAULT_REPLICATES,
            sizes=sizes,
            **overrides,
        )
    return config


def cmd_mc(args) -> int:
    if args.threads < 1:
        raise UsageError(f"--threads must be at least 1, got {args.threads}")
    config = build_mc_config(args)
    reports = harness.run_experiment(config, workers=args.threads)
    rows = list(_mc_rows(reports, config.estimators))
    if args.plot_data:
        text = format_mc_long(rows)
    elif args.format == "json":
        text = format_mc_json(rows)
    elif args.format == "pretty":
        text = format_mc_pretty(rows, config.distribution)
    else:
        text = format_mc_csv(rows)
    out, close = _open_out(args.out)
    try:
        out.write(text)
    finally:
        if close:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for --fn {args.fn}")


def cmd_eval(args) -> int:
    fn = args.fn
    if fn == "mlf":
        _need(args, "alpha", "nu", "tau")
        value = mittag_leffler(args.alpha, args.nu, args.tau)
    elif fn == "ml-pdf":
        _need(args, "alpha", "delta", "t")
        value = dist.ml_pdf(dist.MLParams(args.alpha, args.delta), args.t)
    elif fn == "gml-cdf":
        _need(args, "alpha", "beta", "x")
        value = dist.gml_cdf(dist.GMLParams(args.alpha, args.beta), args.x)
    elif fn == "ml-moment":
        _need(args, "alpha", "delta", "q")
        value = dist.ml_fractional_moment(dist.MLParams(args.alpha, args.delta), args.q)
    elif fn == "gml-moment":
        _need(args, "alpha", "beta", "q")
        value = dist.gml_fractional_moment(dist.GMLParams(args.alpha, args.beta), args.q)
    else:  # log-moments
        _need(args, "dist", "alpha")
        if args.dist == "ml":
            _need(args, "delta")
            moments = dist.ml_log_moments(dist.MLParams(args.alpha, args.delta))
        else:
            _need(args, "beta")
            moments = dist.gml_log_moments(dist.GMLParams(args.alpha, args.beta))
        print(json.dumps({k: _round15(v) for k, v in moments.as_dict().items()}))
        return EXIT_OK
    print(_fmt15(value))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlefit",
        description="Log-moment and fractional-moment estimation for Mittag-Leffler laws.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw ML or GML variates")
    p.add_argument("--dist", choices=("ml", "gml"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, help="ML scale")
    p.add_argument("--beta", type=float, help="GML shape")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, help=f"random seed (falls back to ${SEED_ENV}, then OS entropy)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit", help="estimate parameters from one positive datum per line")
    p.add_argument("--dist", choices=("ml", "gml"), required=True)
    p.add_argument("--method", choices=("log", "frac"), default="log")
    p.add_argument("--input", help="data file (default stdin)")
    p.add_argument("--ci-level", type=float, help="confidence level for ML intervals, e.g. 0.95")
    p.add_argument("--psi-mode", choices=("accurate", "paper"), default="accurate")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("mc", help="Monte Carlo bias/RMSE tables")
    p.add_argument("--table", choices=("1", "2", "custom"), required=True)
    p.add_argument("--config", help="experiment file for --table custom")
    p.add_argument("--replicates", type=int, help=f"default {harness.DEFAULT_REPLICATES}")
    p.add_argument("--quick", action="store_true", help=f"use {harness.QUICK_REPLICATES} replicates")
    p.add_argument("--seed", type=int, help=f"master seed (falls back to ${SEED_ENV}; required)")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--format", choices=("csv", "json", "pretty"), default="csv")
    p.add_argument("--plot-data", action="store_true", help="emit tidy long-format CSV")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--sizes", help="comma-separated sample sizes (tables 1 and 2 only)")
    p.add_argument("--estimators", help="comma-separated subset of log,frac")
    p.add_argument("--psi-mode", choices=("accurate", "paper"))
    p.add_argument("--ddof", type=int, choices=(0, 1), help="log-variance divisor n - ddof")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("eval", help="evaluate special functions and moments")
    p.add_argument(
        "--fn", choices=("mlf", "ml-pdf", "gml-cdf", "ml-moment", "gml-moment", "log-moments"), required=True
    )
    p.add_argument("--dist", choices=("ml", "gml"))
    for name in ("alpha", "nu", "tau", "delta", "beta", "t", "x", "q"):
        p.add_argument(f"--{name}", type=float)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "replicates", None) is not None and args.replicates < 1:
            raise UsageError(f"--replicates must be at least 1, got {args.replicates}")
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
