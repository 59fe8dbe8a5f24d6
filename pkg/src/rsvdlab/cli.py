"""Command-line front end: predict, simulate, sweep and bounds subcommands.

Output is plain ``key = value`` lines at full precision so runs can be
diffed. Exit status discipline: 0 on success, 1 on a domain or solver
error, 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bounds import bound_report
from .experiments import (
    ConfigError,
    ExperimentConfig,
    _split_filters,
    emit_dat,
    load_config,
    run_sweep,
)
from .filters import IDENTITY, parse_filter
from .predict import solve_filtered, solve_theta_tilde
from .spectra import (
    bilevel_profile,
    load_profile,
    powerlaw_profile,
    uniform_profile,
)

__all__ = ["main"]


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _parse_bilevel(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected R,M,A,B")
    try:
        return int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad bilevel spec: {text!r}") from None


def _parse_powerlaw(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected ALPHA,M")
    try:
        return float(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad powerlaw spec: {text!r}") from None


def _parse_uniform(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected S,M")
    try:
        return float(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad uniform spec: {text!r}") from None


def _parse_filter_arg(text: str):
    try:
        return parse_filter(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_filters_arg(text: str):
    try:
        return _split_filters(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_k_grid(text: str):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k grid: {text!r}") from None


def _parse_bool(text: str):
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _add_ensemble_options(parser: argparse.ArgumentParser, required: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--bilevel", type=_parse_bilevel, metavar="R,M,A,B")
    group.add_argument("--powerlaw", type=_parse_powerlaw, metavar="ALPHA,M")
    group.add_argument("--uniform", type=_parse_uniform, metavar="S,M")
    group.add_argument("--profile", metavar="PATH")


def _build_profile(args):
    if args.bilevel is not None:
        r, m, a, b = args.bilevel
        return bilevel_profile(r, m, a, b)
    if args.powerlaw is not None:
        alpha, m = args.powerlaw
        return powerlaw_profile(alpha, m)
    if args.uniform is not None:
        s, m = args.uniform
        return uniform_profile(s, m)
    if args.profile is not None:
        return load_profile(args.profile)
    raise ConfigError("an ensemble option is required")


def _cmd_predict(args) -> int:
    profile = _build_profile(args)
    if args.filter is None:
        pred = solve_theta_tilde(profile, args.k)
        print(f"theta_tilde = {_fmt(pred.theta_tilde)}")
    else:
        pred = solve_filtered(profile, args.k, args.filter)
        print(f"theta_tilde = {_fmt(pred.theta_tilde)}")
        print(f"theta0 = {_fmt(pred.theta0)}")
    print(f"residual = {_fmt(pred.residual)}")
    print(f"iterations = {pred.iterations}")
    return 0


def _cmd_simulate(args) -> int:
    profile = _build_profile(args)
    cfg = ExperimentConfig(
        profile=profile,
        n=args.n,
        d=args.d,
        k_grid=(args.k,),
        filters=(args.filter,),
        trials=args.trials,
        base_seed=args.seed,
    )
    table = run_sweep(cfg)
    print(f"mean = {_fmt(table.mean[0, 0])}")
    print(f"stderr = {_fmt(table.stderr[0, 0])}")
    print(f"prediction = {_fmt(table.prediction[0, 0])}")
    return 0


def _cmd_sweep(args) -> int:
    inline = [
        args.bilevel, args.powerlaw, args.uniform, args.profile,
        args.n, args.d, args.k_grid, args.filters, args.trials,
        args.seed, args.out,
    ]
    if args.config is not None:
        if any(value is not None for value in inline):
            raise ConfigError("--config excludes inline sweep options")
        cfg = load_config(args.config)
    else:
        missing = [
            name
            for name, value in (
                ("--n", args.n),
                ("--d", args.d),
                ("--k-grid", args.k_grid),
                ("--filters", args.filters),
                ("--trials", args.trials),
                ("--seed", args.seed),
                ("--out", args.out),
            )
            if value is None
        ]
        if missing:
            raise ConfigError(f"missing key: {', '.join(missing)}")
        cfg = ExperimentConfig(
            profile=_build_profile(args),
            n=args.n,
            d=args.d,
            k_grid=args.k_grid,
            filters=args.filters,
            trials=args.trials,
            base_seed=args.seed,
            resample_matrix=args.resample_matrix,
            out_path=args.out,
        )
    table = run_sweep(cfg)
    emit_dat(table, cfg.out_path)
    print(f"out = {cfg.out_path}")
    print(f"rows = {len(table.k_grid)}")
    print(f"cols = {2 * len(table.filters) + 3}")
    return 0


def _cmd_bounds(args) -> int:
    profile = _build_profile(args)
    report = bound_report(profile, args.k, r=args.r, spec=args.filter)
    print(f"lower = {_fmt(report.lower)}")
    if report.prop1 is not None:
        print(f"prop1 = {_fmt(report.prop1)}")
    print(f"prop1_best = {_fmt(report.prop1_best)}")
    print(f"prop1_best_r = {report.prop1_best_r}")
    if report.halko_tropp is not None:
        print(f"halko_tropp = {_fmt(report.halko_tropp)}")
    if report.prop2 is not None:
        print(f"prop2 = {_fmt(report.prop2)}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsvdlab",
        description=(
            "Randomized low-rank approximation: asymptotic error predictions, "
            "Monte-Carlo simulation, and error bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    predict = sub.add_parser("predict", help="solve the fixed-point error prediction")
    _add_ensemble_options(predict, required=True)
    predict.add_argument("--k", type=int, required=True, metavar="K")
    predict.add_argument("--filter", type=_parse_filter_arg, metavar="F")
    predict.set_defaults(func=_cmd_predict)

    simulate = sub.add_parser("simulate", help="Monte-Carlo error at one sketch size")
    _add_ensemble_options(simulate, required=True)
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--d", type=int, required=True)
    simulate.add_argument("--k", type=int, required=True, metavar="K")
    simulate.add_argument("--filter", type=_parse_filter_arg, default=IDENTITY, metavar="F")
    simulate.add_argument("--trials", type=int, required=True, metavar="R")
    simulate.add_argument("--seed", type=int, required=True)
    simulate.set_defaults(func=_cmd_simulate)

    sweep = sub.add_parser("sweep", help="full (k, filter) sweep written as a .dat table")
    sweep.add_argument("--config", metavar="PATH")
    _add_ensemble_options(sweep, required=False)
    sweep.add_argument("--n", type=int)
    sweep.add_argument("--d", type=int)
    sweep.add_argument("--k-grid", type=_parse_k_grid, metavar="K1,K2,...")
    sweep.add_argument("--filters", type=_parse_filters_arg, metavar="F1,F2,...")
    sweep.add_argument("--trials", type=int, metavar="R")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--resample-matrix", type=_parse_bool, default=True, metavar="BOOL")
    sweep.add_argument("--out", metavar="PATH")
    sweep.set_defaults(func=_cmd_sweep)

    bounds = sub.add_parser("bounds", help="lower and upper error bounds")
    _add_ensemble_options(bounds, required=True)
    bounds.add_argument("--k", type=int, required=True, metavar="K")
    bounds.add_argument("--r", type=int, metavar="R")
    bounds.add_argument("--filter", type=_parse_filter_arg, metavar="F")
    bounds.set_defaults(func=_cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OverflowError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
