"""Command-line interface: ``plspress <command> [options]``."""

import argparse
import logging
import os
import sys

import numpy as np

from . import BACKEND, __version__
from .errors import PlsPressError
from .experiments import error_decay, timing_scaling
from .fileio import dumps, hardware_fingerprint, load_dataset, save_simulation, write_csv
from .modelselect import select_gamma, select_R, sensitivity_experiment
from .pls import center, fit_pls
from .press import loocv_pls_full, press_pls
from .simgen import SimConfig, draw_j, make_rng, simulate

log = logging.getLogger("plspress")

SENSITIVITY_COLUMNS = ["n", "p", "q", "mode", "trials", "ratio", "se", "seed",
                       "hits_press", "hits_loocv", "agreement", "failures"]


def _int_list(text):
    vals = [int(v) for v in text.replace(",", " ").split()]
    if not vals:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return vals


def _resolved(args):
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _emit(args, payload, name):
    """Write `payload` as JSON to ``--out/<name>.json`` or stdout."""
    text = dumps({"config": _resolved(args), "backend": BACKEND, **payload})
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, name + ".json"), "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_csv(args, columns, rows, name, extra_header=None):
    header = {"config": _resolved(args), "backend": BACKEND, **(extra_header or {})}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, name + ".csv"), "w", newline="") as fh:
            write_csv(fh, columns, rows, header)
    else:
        write_csv(sys.stdout, columns, rows, header)


def _data(args):
    X, Y = load_dataset(args.data, args.x, args.y)
    return center(X, Y)


def cmd_simulate(args):
    j = args.j
    if args.sparse and j is None:
        j = draw_j(make_rng(args.seed, (0,)))
    config = SimConfig(
        n=args.n, p=args.p, q=args.q, R_true=args.r, sparsity_j=j,
        noise_sd=args.noise_sd, seed=args.seed, factor_corr=args.factor_corr,
    )
    sim = simulate(config)
    out = args.out or "."
    save_simulation(out, sim)
    log.info("wrote X.csv, Y.csv, truth.json to %s", out)


def cmd_fit(args):
    data = _data(args)
    fit = fit_pls(data, args.r)
    y_norm = float(np.linalg.norm(data.Y))
    _emit(args, {
        "R": fit.R,
        "g": fit.g,
        "D": fit.d,
        "beta_fro": float(np.linalg.norm(fit.beta)),
        "residual_fro": float(np.linalg.norm(fit.Ey_resid)),
        "relative_residual": float(np.linalg.norm(fit.Ey_resid)) / y_norm if y_norm else 0.0,
        "inner_residual_fro": float(np.linalg.norm(fit.H_resid)),
    }, "fit")


def _press_payload(res, args):
    payload = {"press_value": res.press_value, "method": res.method, "elapsed": res.elapsed,
               "n": int(res.loo_residuals.shape[0])}
    if args.residuals:
        payload["loo_residuals"] = res.loo_residuals
    return payload


def cmd_press(args):
    data = _data(args)
    res = press_pls(fit_pls(data, args.r), data)
    if args.format == "csv":
        _emit_csv(args, ["press_value", "method", "elapsed", "n"], [_press_payload(res, args)], "press")
    else:
        _emit(args, _press_payload(res, args), "press")


def cmd_loocv(args):
    data = _data(args)
    res = loocv_pls_full(data, args.r)
    if args.format == "csv":
        _emit_csv(args, ["press_value", "method", "elapsed", "n"], [_press_payload(res, args)], "loocv")
    else:
        _emit(args, _press_payload(res, args), "loocv")


def _emit_selection(args, res, name):
    if args.format == "csv":
        rows = [{"candidate": g, "score": s} for g, s in zip(res.grid, res.scores)]
        _emit_csv(args, ["candidate", "score"], rows, name,
                  {"chosen": res.chosen, "method": res.method, "elapsed": res.elapsed})
    else:
        _emit(args, res.to_dict(), name)


def cmd_select_r(args):
    data = _data(args)
    _emit_selection(args, select_R(data, args.r_max or min(10, data.p, data.q), args.method), "select_r")


def cmd_select_gamma(args):
    data = _data(args)
    _emit_selection(args, select_gamma(data, args.grid_size, args.method), "select_gamma")


def cmd_bench_sensitivity(args):
    sim_options = {}
    if args.cov is not None:
        sim_options["cov_schedule"] = tuple(args.cov)
    if args.noise_sd is not None:
        sim_options["noise_sd"] = args.noise_sd
    rows = []
    for n in args.n:
        for p in args.p:
            rec = sensitivity_experiment(args.mode, n, p, p, args.trials, args.seed,
                                         sim_options=sim_options, n_jobs=args.jobs,
                                         grid_size=args.grid_size)
            rows.append(rec.row())
    if args.format == "json":
        _emit(args, {"rows": rows}, "sensitivity")
    else:
        _emit_csv(args, SENSITIVITY_COLUMNS, rows, "sensitivity")


def cmd_bench_timing(args):
    rows = timing_scaling(args.n, args.p, args.q, args.r, args.repeats, args.seed, args.threads)
    header = {"hardware": hardware_fingerprint(),
              "methodology": f"median of {args.repeats} repeats after one excluded warm-up"}
    if args.format == "json":
        _emit(args, {"rows": rows, **header}, "timing")
    else:
        _emit_csv(args, ["method", "n", "seconds", "repeats"], rows, "timing", header)


def cmd_bench_error(args):
    rows, slope = error_decay(args.n, args.p, args.q, args.r, args.seeds, args.seed)
    meds = [r["median_gap"] for r in rows]
    summary = {"slope_vs_sqrt_log_n_over_n": slope,
               "strictly_decreasing": bool(all(b < a for a, b in zip(meds, meds[1:])))}
    if args.format == "json":
        _emit(args, {"rows": rows, **summary}, "error")
    else:
        _emit_csv(args, ["n", "median_gap", "mean_gap", "max_gap", "seeds", "rate"], rows,
                  "error", summary)


def build_parser():
    parser = argparse.ArgumentParser(prog="plspress", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, stochastic=False, fmt=True):
        p.add_argument("--out", help="output directory (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        if stochastic:
            p.add_argument("--seed", type=int, required=True)

    def data_args(p):
        p.add_argument("--data", help="directory containing X.csv and Y.csv")
        p.add_argument("--x", help="path to X.csv")
        p.add_argument("--y", help="path to Y.csv")

    p = sub.add_parser("simulate", help="generate a synthetic dataset")
    common(p, stochastic=True, fmt=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--sparse", action="store_true", help="sparse X-weights, j drawn from U(1, 2)")
    p.add_argument("--j", type=float, help="sparsity divisor (implies sparse mode)")
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--factor-corr", type=float, default=0.9)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit a PLS model and report it")
    common(p)
    data_args(p)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_fit)

    for name, func, helptext in (("press", cmd_press, "analytic PRESS"),
                                 ("loocv", cmd_loocv, "full leave-one-out CV")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        data_args(p)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--residuals", action="store_true", help="include per-row residuals")
        p.set_defaults(func=func)

    p = sub.add_parser("select-r", help="choose the number of factors")
    common(p)
    data_args(p)
    p.add_argument("--r-max", type=int)
    p.add_argument("--method", choices=("press", "loocv_full"), default="press")
    p.set_defaults(func=cmd_select_r)

    p = sub.add_parser("select-gamma", help="choose the sparsity penalty")
    common(p)
    data_args(p)
    p.add_argument("--grid-size", type=int, default=100)
    p.add_argument("--method", choices=("press", "loocv_full"), default="press")
    p.set_defaults(func=cmd_select_gamma)

    p = sub.add_parser("bench-sensitivity", help="PRESS vs LOOCV selection sensitivity")
    common(p, stochastic=True)
    p.set_defaults(format="csv")
    p.add_argument("--mode", choices=("select_R", "select_gamma"), default="select_R")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--p", type=_int_list, required=True, help="p = q values")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--grid-size", type=int, default=100)
    p.add_argument("--cov", type=float, nargs="+", help="latent covariance schedule override")
    p.add_argument("--noise-sd", type=float)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_bench_sensitivity)

    p = sub.add_parser("bench-timing", help="wall time of PRESS and LOOCV against n")
    common(p, stochastic=True)
    p.set_defaults(format="csv")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--p", type=int, default=50)
    p.add_argument("--q", type=int, default=50)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bench_timing)

    p = sub.add_parser("bench-error", help="PRESS vs LOOCV approximation error against n")
    common(p, stochastic=True)
    p.set_defaults(format="csv")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--p", type=int, default=20)
    p.add_argument("--q", type=int, default=20)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--seeds", type=int, default=20)
    p.set_defaults(func=cmd_bench_error)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (PlsPressError, ValueError, OSError) as exc:
        print(f"plspress {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
