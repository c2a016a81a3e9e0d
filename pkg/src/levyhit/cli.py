"""Batch command-line interface.

Subcommands: classify, oracle, simulate, estimate, study-exit, study-rate,
study-lln, study-clt, study-noclt.  Every run that writes files also writes
a manifest recording the config hash, seed, library version and a sha256
per output, so results can be replayed and checked byte for byte.  Worker
count comes from LEVYHIT_WORKERS (results are identical for any value).

Exit codes: 0 success, 2 validation error (bad config, schema, parameters),
3 numeric failure (quadrature, classification, unresolvable signal).
Errors are printed as one-line diagnostics on stderr.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    config_as_dict,
    float_list,
    load_config,
    model_from_config,
    require_seed,
    run_section,
    scheme_from_config,
    time_change_from_config,
)
from .errors import (
    BarrierViolationError,
    LevyHitError,
    MonotonicityError,
    ParameterError,
    SchemaError,
)
from .estimators import estimate_bg_index, estimate_time_change, v_epsilon
from .functionals import ONE, as_functional
from .models import (
    BrownianLimit,
    DriftLimit,
    StableLimit,
    classify,
)
from .oracles import (
    covariance_C,
    expected_exit_time,
    expected_overshoot_functional,
    limit_law,
    m_of_f,
    mc_exit_moments,
    standard_symmetric_stable,
)
from .seriesio import (
    canonical_json,
    ingest_series,
    write_manifest,
    write_report,
    write_series,
)
from .simulate import simulate_observations
from .studies import (
    resolve_workers,
    study_clt,
    study_exit_convergence,
    study_lln,
    study_noclt_bound,
    study_rate,
)

_VALIDATION_ERRORS = (SchemaError, ParameterError, MonotonicityError,
                      BarrierViolationError, FileNotFoundError, KeyError)


def _print(obj):
    sys.stdout.write(canonical_json(obj) + "\n")


def _diag(exc: BaseException):
    detail = str(exc).replace("\n", " ")
    sys.stderr.write(f'error kind={type(exc).__name__} detail="{detail}"\n')


def _finish(outdir, command, cfg, seed, files):
    if outdir is None:
        return
    files = [Path(f) for f in files]
    write_manifest(Path(outdir), command, cfg, seed, files,
                   resolve_workers(None), __version__)


def _cmd_classify(args) -> int:
    cp = load_config(args.model)
    model = model_from_config(cp)
    cls = classify(model)
    out = {"condition": cls.condition, "alpha": cls.alpha,
           "limit": type(cls.limit).__name__}
    lim = cls.limit
    if isinstance(lim, BrownianLimit):
        out["variance"] = lim.variance
    elif isinstance(lim, DriftLimit):
        out["gamma0"] = lim.gamma0
    else:
        out.update(c_plus=lim.c_plus, c_minus=lim.c_minus,
                   gamma_star=lim.gamma_star)
    _print(out)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / "classification.json"
        path.write_text(canonical_json(out) + "\n")
        _finish(outdir, "classify", config_as_dict(cp), None, [path])
    return 0


def _oracle_law(args):
    if args.law == "stable":
        if args.alpha is None:
            raise ParameterError("--alpha is required for stable laws")
        if args.c is None:
            return standard_symmetric_stable(args.alpha)
        return limit_law(StableLimit(args.alpha, args.c, args.c))
    if args.law == "brownian":
        return limit_law(BrownianLimit(args.variance))
    if args.law == "drift":
        return limit_law(DriftLimit(args.gamma0))
    raise ParameterError(f"unknown law {args.law!r}")


def _cmd_oracle(args) -> int:
    law = _oracle_law(args)
    f = as_functional(args.f)
    record = {"law": args.law, "alpha": args.alpha, "quantity": args.quantity,
              "seed": args.seed, "n_paths": None, "se": 0.0}
    if args.quantity == "exit-time":
        record["value"] = expected_exit_time(law)
    elif args.quantity == "overshoot-functional":
        record["value"] = expected_overshoot_functional(law, f)
        record["f"] = f.label
    elif args.quantity == "m":
        record["value"], record["se"] = m_of_f(law, f)
        record["f"] = f.label
    elif args.quantity == "mc-exit-moment":
        est, se = mc_exit_moments(law, k=args.k, f=f, n_paths=args.n_paths,
                                  seed=args.seed)
        record.update(value=est, se=se, n_paths=args.n_paths, k=args.k,
                      f=f.label)
    elif args.quantity == "covariance":
        fs = [as_functional(lbl) for lbl in args.f_list.split(",")]
        C, Cse = covariance_C(law, fs, n_paths=args.n_paths, seed=args.seed)
        record.update(value=C.tolist(), se=Cse.tolist(), n_paths=args.n_paths,
                      f=[g.label for g in fs])
    else:
        raise ParameterError(f"unknown quantity {args.quantity!r}")
    _print(record)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / "oracle.json"
        path.write_text(canonical_json(record) + "\n")
        _finish(outdir, "oracle", vars(args), args.seed, [path])
    return 0


def _cmd_simulate(args) -> int:
    cp = load_config(args.config)
    model = model_from_config(cp)
    tc = time_change_from_config(cp)
    scheme = scheme_from_config(cp)
    run = run_section(cp)
    seed = require_seed(run)
    eps = float(run["eps"])
    horizon = float(run["horizon"])
    tc_dt = float(run.get("tc_dt", 1e-3))
    replicate = int(run.get("replicate", 0))

    series = simulate_observations(model, tc, eps, horizon, seed,
                                   replicate=replicate, scheme=scheme,
                                   tc_dt=tc_dt)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    meta = {"seed": seed, "replicate": replicate,
            "model": dict(cp["model"]) if "model" in cp else {},
            "time_change": dict(cp["time_change"]) if "time_change" in cp else {}}
    try:
        meta["alpha"] = classify(model).alpha
    except LevyHitError:
        pass
    files = write_series(series, outdir / "series.csv", meta)
    _print({"n_observations": len(series), "eps": eps, "horizon": horizon,
            "files": [str(f) for f in files]})
    _finish(outdir, "simulate", config_as_dict(cp), seed, files)
    return 0


def _cmd_estimate(args) -> int:
    series = ingest_series(args.input)
    files = []
    outdir = None
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
    if args.what == "bg-index":
        alpha_hat = estimate_bg_index(series, t=args.t)
        summary = {
            "alpha_hat": alpha_hat,
            "n_crossings": int(v_epsilon(series, ONE)(args.t if args.t is not None
                                                      else series.horizon)),
            "eps": series.eps,
            "horizon": series.horizon,
        }
        _print(summary)
        if outdir:
            path = outdir / "bg_index.json"
            path.write_text(canonical_json(summary) + "\n")
            files.append(path)
    elif args.what == "time-change":
        if args.model is None:
            raise ParameterError("time-change estimation needs --model for the law")
        model = model_from_config(load_config(args.model))
        cls = classify(model)
        shat = estimate_time_change(series, cls, alpha_override=args.alpha)
        summary = {"alpha": cls.alpha, "n_crossings": len(series),
                   "eps": series.eps, "horizon": series.horizon,
                   "s_hat_final": float(shat(series.horizon)),
                   "mode": "plug-in-heuristic" if args.alpha is not None else "classified"}
        _print(summary)
        if outdir:
            path = outdir / "time_change.csv"
            lines = ["t,value"] + [
                f"{repr(float(t))},{repr(float(v))}"
                for t, v in zip(shat.times, shat.values)
            ]
            path.write_text("\n".join(lines) + "\n")
            jpath = outdir / "time_change.json"
            jpath.write_text(canonical_json(summary) + "\n")
            files.extend([path, jpath])
    else:
        raise ParameterError(f"unknown estimator {args.what!r}")
    if outdir:
        _finish(outdir, f"estimate-{args.what}", {"input": str(args.input)},
                None, files)
    return 0


def _study_common(args):
    cp = load_config(args.config)
    model = model_from_config(cp)
    scheme = scheme_from_config(cp)
    run = run_section(cp)
    seed = require_seed(run)
    return cp, model, scheme, run, seed


def _write_study(args, cp, report, seed) -> int:
    outdir = Path(args.out)
    files = write_report(report, outdir, plot_data=args.plot_data)
    _print({"kind": report.kind, "verdicts": report.verdicts,
            "config_hash": report.config_hash,
            "runtime_s": round(report.runtime_s, 3),
            "files": [str(f) for f in files]})
    _finish(outdir, f"study-{report.kind}", config_as_dict(cp), seed, files)
    return 0


def _cmd_study_exit(args) -> int:
    cp, model, scheme, run, seed = _study_common(args)
    report = study_exit_convergence(
        model, float_list(run, "eps_grid"), n_paths=int(run["n_paths"]),
        k_list=[int(k) for k in run.get("k_list", "1").split(",")],
        f_list=[as_functional(lbl.strip())
                for lbl in run.get("f_list", "one").split(",")],
        seed=seed, scheme=scheme, n_oracle=int(run.get("n_oracle", 100_000)),
        workers=args.workers,
    )
    return _write_study(args, cp, report, seed)


def _cmd_study_rate(args) -> int:
    cp, model, scheme, run, seed = _study_common(args)
    beta = float(run["beta"]) if "beta" in run else None
    report = study_rate(
        model, float_list(run, "eps_grid"), n_paths=int(run.get("n_paths", 20_000)),
        seed=seed, scheme=scheme, n_max=int(run.get("n_max", 1_280_000)),
        delta=float(run.get("delta", 0.1)), beta=beta,
        budget_s=float(run.get("budget_s", 900.0)), workers=args.workers,
    )
    return _write_study(args, cp, report, seed)


def _cmd_study_lln(args) -> int:
    cp, model, scheme, run, seed = _study_common(args)
    tc = time_change_from_config(cp)
    report = study_lln(
        model, tc, float_list(run, "eps_grid"), n_reps=int(run["n_reps"]),
        seed=seed,
        f_list=[as_functional(lbl.strip())
                for lbl in run.get("f_list", "one,pow2").split(",")],
        horizon=float(run.get("horizon", 1.0)), scheme=scheme,
        tc_dt=float(run.get("tc_dt", 1e-3)), workers=args.workers,
    )
    return _write_study(args, cp, report, seed)


def _cmd_study_clt(args) -> int:
    cp, model, scheme, run, seed = _study_common(args)
    tc = time_change_from_config(cp)
    report = study_clt(
        model, tc, eps=float(run["eps"]), n_reps=int(run["n_reps"]), seed=seed,
        f_list=[as_functional(lbl.strip())
                for lbl in run.get("f_list", "one").split(",")],
        horizon=float(run.get("horizon", 1.0)), scheme=scheme,
        tc_dt=float(run.get("tc_dt", 1e-3)),
        n_oracle=int(run.get("n_oracle", 100_000)), workers=args.workers,
    )
    return _write_study(args, cp, report, seed)


def _cmd_study_noclt(args) -> int:
    cp, model, scheme, run, seed = _study_common(args)
    tc = time_change_from_config(cp)
    deltas = tuple(float_list(run, "deltas")) if "deltas" in run else (0.05, 0.1)
    report = study_noclt_bound(
        model, tc, float_list(run, "eps_grid"), n_reps=int(run["n_reps"]),
        seed=seed, f=as_functional(run.get("f", "pow2")),
        beta=float(run["beta"]) if "beta" in run else None, deltas=deltas,
        horizon=float(run.get("horizon", 1.0)), scheme=scheme,
        tc_dt=float(run.get("tc_dt", 1e-3)), workers=args.workers,
    )
    return _write_study(args, cp, report, seed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="levyhit",
        description="Levy processes observed at first hitting times of "
                    "symmetric barriers: simulation, estimation, studies.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="limit-regime classification of a model")
    c.add_argument("--model", required=True, help="config file with a [model] section")
    c.add_argument("--out", default=None)
    c.set_defaults(fn=_cmd_classify)

    o = sub.add_parser("oracle", help="closed-form / MC limit-law oracles")
    o.add_argument("--law", required=True, choices=["stable", "brownian", "drift"])
    o.add_argument("--alpha", type=float, default=None)
    o.add_argument("--c", type=float, default=None,
                   help="per-side Levy coefficient; default: unit-scale law")
    o.add_argument("--variance", type=float, default=1.0)
    o.add_argument("--gamma0", type=float, default=1.0)
    o.add_argument("--quantity", required=True,
                   choices=["exit-time", "overshoot-functional", "m",
                            "mc-exit-moment", "covariance"])
    o.add_argument("--f", default="one", help="functional label: one, pow1, pow2, ...")
    o.add_argument("--f-list", default="one")
    o.add_argument("--k", type=int, default=1)
    o.add_argument("--n-paths", type=int, default=100_000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out", default=None)
    o.set_defaults(fn=_cmd_oracle)

    s = sub.add_parser("simulate", help="write an observation series")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_simulate)

    e = sub.add_parser("estimate", help="run estimators on a series CSV")
    e.add_argument("--input", required=True)
    e.add_argument("--what", required=True, choices=["bg-index", "time-change"])
    e.add_argument("--t", type=float, default=None)
    e.add_argument("--model", default=None)
    e.add_argument("--alpha", type=float, default=None,
                   help="plug-in alpha override (heuristic mode)")
    e.add_argument("--out", default=None)
    e.set_defaults(fn=_cmd_estimate)

    for name, fn in [("study-exit", _cmd_study_exit), ("study-rate", _cmd_study_rate),
                     ("study-lln", _cmd_study_lln), ("study-clt", _cmd_study_clt),
                     ("study-noclt", _cmd_study_noclt)]:
        q = sub.add_parser(name, help=f"{name.replace('-', ' ')} study")
        q.add_argument("--config", required=True)
        q.add_argument("--out", required=True)
        q.add_argument("--plot-data", action="store_true")
        q.add_argument("--workers", type=int, default=None,
                       help="override LEVYHIT_WORKERS")
        q.set_defaults(fn=fn)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except _VALIDATION_ERRORS as exc:
        _diag(exc)
        return 2
    except LevyHitError as exc:
        _diag(exc)
        return 3


def main():  # console entry point
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
