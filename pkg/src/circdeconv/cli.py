"""Command-line interface.

Exit codes: 0 success, 2 bad flags, 3 bad input data or config,
4 numeric precondition failed, 5 a simulation replication aborted.
"""

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path

from . import io
from .estimator import CircularDeconvolution
from .exceptions import DataFormatError, PreconditionError, ReplicationError
from .selection import EMPIRICAL_PENALTY, KNOWN_PENALTY, known_bounds, upper_dimension
from .simulation import ExperimentConfig, rate_regression, run_experiment
from .spectral import weighted_norm_sq
from .weights import ClassSpec, diagnostic_bounds, make_weights, parse_omega, parse_weights, rate_oracle

log = logging.getLogger("circdeconv")

EXIT_FLAGS, EXIT_DATA, EXIT_NUMERIC, EXIT_REPLICATION = 2, 3, 4, 5


class FlagError(Exception):
    pass


def _parse_mode(text):
    if text in ("known", "empirical"):
        return text, None
    if text.startswith("fixed:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise FlagError(f"bad fixed cut-off in {text!r}") from None
        if k < 1:
            raise FlagError("fixed cut-off must be >= 1")
        return "fixed", k
    raise FlagError(f"--mode must be fixed:k, known or empirical, got {text!r}")


def cmd_estimate(args):
    mode, k = _parse_mode(args.mode)
    if mode == "empirical" and (args.lam is not None or args.d is not None):
        raise FlagError("lambda not allowed in empirical mode")
    if mode == "known" and (args.lam is None or args.d is None):
        raise FlagError("known mode requires --lambda and --d")
    try:
        omega = parse_omega(args.omega)
        lam = parse_weights(args.lam) if args.lam is not None else None
    except ValueError as exc:
        raise FlagError(str(exc)) from None
    if args.grid < 1 or args.s < 0:
        raise FlagError("--grid must be >= 1 and --s >= 0")

    y = io.read_sample_file(args.y)
    eps = io.read_sample_file(args.eps)
    if args.penalty_const is not None:
        penalty = args.penalty_const
    else:
        penalty = KNOWN_PENALTY if mode == "known" else EMPIRICAL_PENALTY
    resolved = {"mode": mode, "k": k, "omega": args.omega, "lambda": args.lam, "d": args.d,
                "s": args.s, "grid": args.grid, "penalty_const": penalty,
                "strict": args.strict, "n": y.size, "m": eps.size}
    log.info("estimate: %s", json.dumps(resolved))

    est = CircularDeconvolution(mode=mode, k=k, omega=omega, lambda_weights=lam, d=args.d,
                                s=args.s, penalty_const=args.penalty_const, strict=args.strict)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        est.fit(y.values, eps.values)
    for w in caught:
        log.warning("%s", w.message)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_estimate_json(out / "estimate.json", est.estimate_)
    x, values = est.grid(args.grid)
    io.write_grid_csv(out / "grid.csv", x, values)
    summary = {"k_hat": est.k_, "mode": mode, "n": y.size, "m": eps.size,
               "min_grid_value": float(values.min()),
               "weighted_norm_sq": weighted_norm_sq(est.estimate_.spectrum, omega)}
    if est.selection_ is not None:
        io.write_trace_csv(out / "selection_trace.csv", est.selection_)
        sel = est.selection_.summary()
        sel.update({"tables": est.selection_.tables.summary()})
        io.write_json(out / "selection.json", sel)
        summary["cap"] = est.selection_.search_cap
    io.write_json(out / "summary.json", summary)
    io.write_manifest(out, list(args.argv), inputs=[args.y, args.eps],
                      resolved=resolved, penalty_const=penalty, seed=None)

    if args.verify:
        reread = io.read_estimate_json(out / "estimate.json")
        again = weighted_norm_sq(reread.spectrum, omega)
        if again != summary["weighted_norm_sq"]:
            raise PreconditionError("round-trip check failed: weighted norms differ")
        log.info("round-trip verified: weighted norm %s", io.fmt(again))
    print(json.dumps(summary))
    return 0


def cmd_oracle(args):
    try:
        gamma = make_weights("sobolev", args.p)
        lam = make_weights(args.family, args.a)
        omega = make_weights("derivative", args.s)
        cls = ClassSpec(gamma=gamma, lam=lam, omega=omega, r=args.r, d=args.d)
    except ValueError as exc:
        raise FlagError(str(exc)) from None
    if args.n < 1 or args.m < 1:
        raise FlagError("--n and --m must be >= 1")
    log.info("oracle: %s", json.dumps({k: v for k, v in vars(args).items() if k != "func"}))
    res = rate_oracle(cls, args.n, args.m, k_max=args.k_max)
    N, M = known_bounds(omega, lam, args.d, args.n, args.m)
    N_l, M_l, zeta_d = diagnostic_bounds(cls, args.n, args.m, N=N, M=M)
    out = res.to_dict()
    out.update({"N_n": N, "M_m": M, "N_l": N_l, "M_l": M_l, "zeta_d": zeta_d,
                "N_u": upper_dimension(omega, args.n)})
    print(json.dumps(out))
    return 0


def _load_config(path, overrides=None):
    data = io.load_config_file(path)
    env_seed = os.environ.get("CIRCDECONV_SEED")
    if env_seed is not None:
        try:
            data["seed"] = int(env_seed)
        except ValueError:
            raise DataFormatError(f"CIRCDECONV_SEED is not an integer: {env_seed!r}") from None
    if overrides:
        data.update(overrides)
    return ExperimentConfig.from_dict(data)


def _write_report(out, report, stem="report"):
    io.write_json(out / f"{stem}.json", report.to_dict())
    io.write_replications_csv(out / f"{stem.replace('report', 'replications')}.csv", report)


def cmd_simulate(args):
    cfg = _load_config(args.config)
    log.info("simulate: %s", json.dumps(cfg.to_dict()))
    report = run_experiment(cfg, jobs=args.jobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_report(out, report)
    io.write_manifest(out, list(args.argv), inputs=[args.config],
                      config=cfg.to_dict(), seed=cfg.seed, penalty_const=cfg.penalty_const)
    print(json.dumps({"mean_risk": report.mean, "stderr": report.stderr,
                      "oracle_mean_risk": report.oracle_mean_risk}))
    return 0


SWEEP_KEYS = {"base", "n_grid", "m_rule", "expected_exponent", "tolerance", "scale",
              "synthetic_risk"}


def _load_sweep(path):
    sweep = io.load_config_file(path)
    unknown = set(sweep) - SWEEP_KEYS
    if unknown:
        raise DataFormatError(f"unknown sweep keys: {sorted(unknown)}")
    grid = sweep.get("n_grid")
    if not isinstance(grid, list) or not grid:
        raise DataFormatError("sweep needs a non-empty n_grid")
    if any(not isinstance(n, int) or n < 2 for n in grid) or grid != sorted(set(grid)):
        raise DataFormatError("n_grid must be strictly increasing integers >= 2")
    if "expected_exponent" not in sweep:
        raise DataFormatError("sweep needs expected_exponent")
    if "synthetic_risk" not in sweep and "base" not in sweep:
        raise DataFormatError("sweep needs a base config")
    return sweep


def cmd_rates(args):
    sweep = _load_sweep(args.sweep)
    grid = sweep["n_grid"]
    expected = float(sweep["expected_exponent"])
    tol = float(sweep.get("tolerance", 0.15))
    scale = sweep.get("scale", "log")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log.info("rates: %s", json.dumps(sweep))

    if "synthetic_risk" in sweep:
        # test hook: bypass simulation with risks c * n^exponent
        syn = sweep["synthetic_risk"]
        risks = [float(syn["c"]) * n ** float(syn["exponent"]) for n in grid]
        seeds = None
    else:
        base = dict(sweep["base"])
        env_seed = os.environ.get("CIRCDECONV_SEED")
        if env_seed is not None:
            base["seed"] = int(env_seed)
        risks = []
        for n in grid:
            cfg = ExperimentConfig.from_dict(
                {**base, "n": n, "m_rule": sweep.get("m_rule", "n"), "m": None})
            report = run_experiment(cfg, jobs=args.jobs)
            _write_report(out, report, stem=f"report_n{n}")
            risks.append(report.mean)
        seeds = base.get("seed", 0)
    try:
        slope, intercept, r2 = rate_regression(grid, risks, scale=scale)
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None
    summary = {"slope": slope, "intercept": intercept, "r2": r2,
               "expected_exponent": expected, "tolerance": tol,
               "pass": abs(slope - expected) <= tol,
               "n_grid": grid, "mean_risks": risks, "scale": scale}
    io.write_json(out / "rates.json", summary)
    io.write_manifest(out, list(args.argv), inputs=[args.sweep], sweep=sweep,
                      seed=seeds)
    print(json.dumps(summary))
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="circdeconv", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="log warnings only")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("estimate", help="estimate a density from two sample files")
    p.add_argument("--y", required=True, help="contaminated sample file")
    p.add_argument("--eps", required=True, help="error sample file")
    p.add_argument("--omega", default="const", help="const or sobolev:s")
    p.add_argument("--mode", required=True, help="fixed:k, known or empirical")
    p.add_argument("--lambda", dest="lam", help="os:a or ss:a (known mode)")
    p.add_argument("--d", type=float, help="corridor constant (known mode)")
    p.add_argument("--s", type=int, default=0, help="derivative order of the grid output")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--penalty-const", type=float)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--verify", action="store_true",
                   help="re-read estimate.json and check the weighted norm round-trips")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("oracle", help="minimax rate quantities for a weight class")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--family", choices=["os", "ss"], required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k-max", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="Monte Carlo risk for one configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rates", help="risk over an n-grid and a fitted rate slope")
    p.add_argument("--sweep", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_rates)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr,
                        force=True)
    try:
        return args.func(args)
    except FlagError as exc:
        print(f"circdeconv: error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (DataFormatError, OSError) as exc:
        print(f"circdeconv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ReplicationError as exc:
        print(f"circdeconv: replication aborted: {exc}", file=sys.stderr)
        return EXIT_REPLICATION
    except (PreconditionError, ValueError) as exc:
        print(f"circdeconv: numeric precondition failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
