"""Command-line interface: occupancy tables, budget predictions,
matrix regularization, and Monte Carlo sweeps.

Summaries go to standard output as key=value lines; CSV payloads go to
--out files (or to standard output, with the summary moved to standard
error, when --out is omitted).  Exit codes: 0 success, 1 I/O failure,
2 domain or usage error, 3 regularization result not positive-definite.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np
from scipy.special import ndtr

from . import corr, occupancy, predictor, sim, spectral

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_NOT_PD = 3

# mean_lambda0 is the only reported float computed through BLAS; fixed
# absolute rounding keeps the CSV byte-identical across BLAS thread
# counts (their noise is ~1e-12) without losing anything meaningful.
_LAMBDA_DECIMALS = 9


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with _single_threaded_blas():
            return args.handler(args)
    except (ValueError, corr.TooManyDegenerateRedrawsError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bootcorr",
        description="Regularize singular correlation matrices by bootstrap averaging.",
    )
    sub = parser.add_subparsers(required=True, metavar="command")

    p = sub.add_parser("occupancy", help="distinct-column distribution table for one t")
    p.add_argument("t", type=int, help="number of features (>= 2)")
    p.add_argument("--samples", type=int, default=0, help="sampled draws for the empirical CDF")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV output path (default: CSV on stdout)")
    p.add_argument("--plot", help="also render the distribution figure to this file")
    p.set_defaults(handler=_cmd_occupancy)

    p = sub.add_parser("predict", help="positive-definiteness probability and budgets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="evaluate the probability at this replicate count")
    group.add_argument("--alpha", type=float, help="confidence target; reports every budget")
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("regularize", help="bootstrap-average the correlation matrix of a CSV")
    p.add_argument("input", help="CSV data matrix, rows = objects, columns = features")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="number of bootstrap replicates")
    group.add_argument("--auto-k", action="store_true", help="choose k = min(ceil(k_plus), n)")
    p.add_argument("--alpha", type=float, default=0.01, help="confidence for --auto-k")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV output path for the averaged matrix")
    p.add_argument("--transpose", action="store_true",
                   help="input holds objects in columns; transpose after reading")
    p.set_defaults(handler=_cmd_regularize)

    p = sub.add_parser("simulate", help="Monte Carlo sweep of the PD transition in k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV output path (default: CSV on stdout)")
    p.add_argument("--plot", help="also render the transition figure to this file")
    p.set_defaults(handler=_cmd_simulate)

    return parser


def _cmd_occupancy(args) -> int:
    if args.t < 2:
        raise ValueError("t must be at least 2 (the normal model is degenerate at t=1)")
    if args.samples < 0:
        raise ValueError("--samples must be nonnegative")
    dist = occupancy.occupancy_pmf(args.t)
    mean, variance = occupancy.exact_moments(args.t)
    mean_approx, variance_approx = occupancy.approx_moments(args.t)
    sd = math.sqrt(variance)
    u = np.arange(1, args.t + 1)
    columns = {"u": u, "exact_pmf": dist.pmf, "normal_cdf": np.asarray(ndtr((u - mean) / sd))}
    summary = {
        "t": args.t,
        "samples": args.samples,
        "seed": args.seed,
        "mean_exact": mean,
        "variance_exact": variance,
        "mean_approx": mean_approx,
        "variance_approx": variance_approx,
    }
    sweep = None
    if args.samples > 0:
        sweep = sim.run_occupancy_sweep(args.t, args.samples, args.seed)
        columns["empirical_cdf"] = sweep.ecdf
        summary["ks_distance"] = sweep.ks_distance
    rows = (_format_row(row) for row in zip(*columns.values()))
    _emit_csv(args.out, list(columns), rows, summary)
    if args.plot:
        from . import plots

        plots.plot_occupancy(dist, args.plot,
                             unique_counts=None if sweep is None else sweep.unique_counts)
    return EXIT_OK


def _cmd_predict(args) -> int:
    if args.k is not None:
        probability = predictor.prob_pd(args.n, args.t, args.k)
        _print_summary({"n": args.n, "t": args.t, "k": args.k, "prob_pd": probability})
        return EXIT_OK
    budget = predictor.bootstrap_budget(args.n, args.t, alpha=args.alpha)
    _print_summary({
        "n": args.n,
        "t": args.t,
        "alpha": args.alpha,
        "a": budget.a,
        "k_plus": budget.k_plus,
        "k_plus_ceil": math.ceil(budget.k_plus),
        "k_star": budget.k_star,
        "k_limit": budget.k_limit,
        "k_upper": budget.k_upper,
        "recommended_k": budget.recommended,
    })
    return EXIT_OK


def _cmd_regularize(args) -> int:
    values = _read_matrix_csv(args.input)
    if args.transpose:
        values = values.T
    data = corr.DataMatrix(values)
    summary = {"n": data.n, "t": data.t}
    if args.auto_k:
        budget = predictor.bootstrap_budget(data.n, data.t, alpha=args.alpha)
        k = budget.recommended
        summary.update(alpha=args.alpha, k_plus=budget.k_plus, k_upper=budget.k_upper)
    else:
        if args.k < 1:
            raise ValueError("--k must be a positive integer")
        k = args.k
    summary["k"] = k
    summary["seed"] = args.seed
    average = corr.average_correlation(data, k, args.seed)
    verdict = spectral.is_positive_definite(average.matrix)
    summary["smallest_eigenvalue"] = verdict.smallest
    summary["positive_definite"] = verdict.is_pd
    summary["redraws"] = average.redraws
    rows = (_format_row(row) for row in average.matrix.values)
    _emit_csv(args.out, None, rows, summary)
    return EXIT_OK if verdict.is_pd else EXIT_NOT_PD


def _cmd_simulate(args) -> int:
    if args.k_min > args.k_max:
        raise ValueError("--k-min must not exceed --k-max")
    config = sim.SimulationConfig(
        n=args.n,
        t=args.t,
        k_values=tuple(range(args.k_min, args.k_max + 1)),
        trials=args.trials,
        seed=args.seed,
    )
    report = sim.run_pd_sweep(config)
    budget = predictor.bootstrap_budget(args.n, args.t, alpha=0.01)
    summary = {
        "n": args.n,
        "t": args.t,
        "trials": args.trials,
        "seed": args.seed,
        "k_plus": budget.k_plus,
        "k_star": budget.k_star,
        "k_limit": budget.k_limit,
    }
    header = ["k", "empirical_pd_frequency", "predicted_prob", "mean_lambda0", "redraws"]
    rows = (
        [
            str(point.k),
            _format_float(point.empirical_pd_frequency),
            _format_float(point.predicted),
            _format_lambda(point.mean_lambda0),
            str(point.redraws),
        ]
        for point in report.per_k
    )
    _emit_csv(args.out, header, rows, summary)
    if args.plot:
        from . import plots

        plots.plot_pd_sweep(report, budget=budget, path=args.plot)
    return EXIT_OK


def _read_matrix_csv(path) -> np.ndarray:
    """Parse a rectangular CSV of finite decimals; a non-numeric first row
    is treated as a header and skipped."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.rstrip("\r\n") for line in handle]
    rows = [line.split(",") for line in lines if line.strip()]
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    start = 0
    try:
        [float(field) for field in rows[0]]
    except ValueError:
        start = 1
    if start == len(rows):
        raise ValueError(f"{path}: no data rows")
    width = len(rows[start])
    parsed = np.empty((len(rows) - start, width))
    for i, row in enumerate(rows[start:]):
        if len(row) != width:
            raise ValueError(f"{path}: row {start + i + 1} has {len(row)} fields, expected {width}")
        try:
            parsed[i] = [float(field) for field in row]
        except ValueError as error:
            raise ValueError(f"{path}: row {start + i + 1}: {error}") from None
    if not np.isfinite(parsed).all():
        raise ValueError(f"{path}: matrix entries must be finite decimals")
    return parsed


def _emit_csv(out_path, header, rows, summary) -> None:
    """CSV to the file (summary on stdout) or to stdout (summary on stderr)."""
    if out_path is None:
        _write_csv(sys.stdout, header, rows)
        _print_summary(summary, stream=sys.stderr)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            _write_csv(handle, header, rows)
        _print_summary(summary)


def _write_csv(handle, header, rows) -> None:
    if header is not None:
        handle.write(",".join(header) + "\n")
    for row in rows:
        handle.write(",".join(row) + "\n")


def _format_row(values) -> list[str]:
    return [_format_float(value) for value in values]


def _format_float(value) -> str:
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value)) if float(int(value)) == value else repr(value)
    return repr(value)


def _format_lambda(value: float) -> str:
    return f"{round(value, _LAMBDA_DECIMALS) + 0.0:.{_LAMBDA_DECIMALS}f}"


def _print_summary(summary: dict, stream=None) -> None:
    stream = sys.stdout if stream is None else stream
    for key, value in summary.items():
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        print(f"{key}={text}", file=stream)


def _single_threaded_blas():
    """Limit BLAS pools so outputs do not depend on the thread count."""
    try:
        from threadpoolctl import threadpool_limits

        return threadpool_limits(limits=1)
    except Exception:
        import contextlib

        return contextlib.nullcontext()


if __name__ == "__main__":
    sys.exit(main())
