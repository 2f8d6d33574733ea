"""Command-line front end.

Subcommands::

    analyze    full report on a dataset: cell stats, validity diagnostics,
               per-menu identified sets, robust bound, confidence intervals
    simulate   draw from the double-hurdle generator and write CSV
    test       validity diagnostics only
    ci         bound estimates with confidence intervals
    replicate  check built-in benchmark targets

Reports are JSON (UTF-8), deterministic given the input bytes, the flags,
and the seed.  Input problems exit with status 2 and a one-line
diagnostic; an empty identified set is a result, not an error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np
import pandas as pd

from . import __version__
from .benchmarks import DEFAULT_SEED, TARGETS, run_target
from .bounds_a1 import identified_set_a1
from .bounds_a2 import identified_set_a2
from .bounds_a3 import identified_set_a3
from .data import Sample, cell_stats, load_csv
from .errors import IVBoundsError, MissingDataError
from .inference import bound_estimates
from .robust import robust_bound
from .sets import Entry, IdentifiedSet, Interval
from .simulate import TYPE_LABELS, DgpConfig, simulate
from .validity import exclusion_check, late_inequality_slack, overlap_statistic

SCHEMA_VERSION = 1


# --- serialization helpers --------------------------------------------------

def _entry_json(e: Entry):
    if e.is_empty:
        return {"kind": "empty"}
    return {"kind": e.kind, "lo": e.lo, "hi": e.hi}


def _interval_json(iv: Interval | None):
    return None if iv is None else {"lo": iv.lo, "hi": iv.hi}


def _set_json(s: IdentifiedSet):
    return {
        "menu": s.menu.code,
        "case": s.case_tag,
        "empty": s.is_empty,
        "entries": {k: _entry_json(v) for k, v in s.entries.items()},
        "linked_constraints": list(s.linked_constraints),
    }


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, allow_nan=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {out}")
    else:
        print(text)


def _load(args) -> Sample:
    columns = {"y": args.y, "d": args.d, "z": args.z}
    return load_csv(args.data, columns=columns, outcome_kind=args.outcome_kind)


def _outcome_range(args):
    if args.y_min is None and args.y_max is None:
        return None
    if args.y_min is None or args.y_max is None:
        raise ValueError("--y-min and --y-max must be given together")
    return (args.y_min, args.y_max)


# --- subcommands ------------------------------------------------------------

def _cmd_analyze(args) -> int:
    sample = _load(args)
    outcome_range = _outcome_range(args)
    st = cell_stats(sample)
    slacks = late_inequality_slack(sample, args.bins)
    overlap = overlap_statistic(sample, args.bins)
    a1 = identified_set_a1(sample, outcome_range, args.bins)
    a2 = identified_set_a2(sample, args.grid, outcome_range, args.bins)
    a3 = identified_set_a3(sample, outcome_range)
    rb = robust_bound(sample, outcome_range, args.grid, args.bins)

    try:
        er = exclusion_check(sample)
        er_json = {
            "mu_10a": er.mu_10a,
            "id_set_mu_11a": _interval_json(er.id_set_mu_11a),
            "mu_01n": er.mu_01n,
            "id_set_mu_00n": _interval_json(er.id_set_mu_00n),
            "reject_er": er.reject_er,
            "relabeled": er.relabeled,
        }
    except IVBoundsError as exc:
        # degenerate first stage or an empty pure cell: no check to run
        er_json = {"unavailable": str(exc)}

    inf_sample, relabeled = sample, False
    if st.first_stage < 0:
        inf_sample, relabeled = sample.relabel_instrument(), True
    try:
        est = bound_estimates(inf_sample, level=args.level)
        inf_json = {
            "level": args.level,
            "relabeled_instrument": relabeled,
            "bounds": {
                key: {
                    "lb": b.lb, "ub": b.ub, "se_lb": b.se_lb, "se_ub": b.se_ub,
                    "c_bar": b.c_bar, "ci": _interval_json(b.ci),
                }
                for key, b in est.items()
            },
        }
    except IVBoundsError as exc:
        inf_json = {"unavailable": str(exc)}

    db = rb.a2_detail.defier_bounds if rb.a2_detail is not None else None
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "version": __version__,
        "input": {
            "path": args.data,
            "columns": {"y": args.y, "d": args.d, "z": args.z},
            "n": sample.n,
            "outcome_kind": sample.outcome_kind,
            "outcome_range": list(outcome_range) if outcome_range else
                [float(sample.y.min()), float(sample.y.max())],
            "bins": args.bins,
            "grid_points": args.grid,
        },
        "cell_stats": {
            "count": st.count.tolist(),
            "prob": st.prob.tolist(),
            "cond_mean": st.cond_mean.tolist(),
            "arm_mean_y": st.arm_mean_y.tolist(),
            "first_stage": st.first_stage,
            "itt": st.itt,
            "iv_estimand": st.iv_estimand,
        },
        "validity": {
            "slack_d0": slacks.slack_d0,
            "slack_d1": slacks.slack_d1,
            "overlap_statistic": overlap,
        },
        "defier_share": None if db is None else {
            "lower": db.lower, "upper": db.upper,
            "lower_source": db.lower_source,
            "overlap_ok": db.overlap_ok, "empty": db.is_empty,
        },
        "menus": {
            "A1": _set_json(a1),
            "A2": {
                "summary": _set_json(a2.summary),
                "grid_size": int(a2.grid.size),
                "skipped": a2.skipped,
            },
            "A3": _set_json(a3),
        },
        "er_check": er_json,
        "inference": inf_json,
        "robust": {
            "active_menus": [m.code for m in rb.active_menus],
            "entries": {k: _entry_json(v) for k, v in rb.entries.items()},
            "disconnected": sorted(rb.disconnected),
            "diagnostics": rb.diagnostics,
        },
    }
    _emit(report, args.out)
    return 0


def _cmd_test(args) -> int:
    sample = _load(args)
    slacks = late_inequality_slack(sample, args.bins)
    overlap = overlap_statistic(sample, args.bins)
    a1 = identified_set_a1(sample, None, args.bins)
    a2 = identified_set_a2(sample, args.grid, None, args.bins)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "test",
        "validity": {
            "slack_d0": slacks.slack_d0,
            "slack_d1": slacks.slack_d1,
            "overlap_statistic": overlap,
        },
        "menus_data_consistent": {
            "A1": not a1.is_empty,
            "A2": not a2.is_empty,
            "A3": True,
        },
    }
    _emit(report, args.out)
    return 0


def _cmd_ci(args) -> int:
    sample = _load(args)
    st = cell_stats(sample)
    relabeled = False
    if st.first_stage < 0:
        sample, relabeled = sample.relabel_instrument(), True
    est = bound_estimates(sample, level=args.level)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "ci",
        "level": args.level,
        "relabeled_instrument": relabeled,
        "n": sample.n,
        "bounds": {
            key: {
                "lb": b.lb, "ub": b.ub, "se_lb": b.se_lb, "se_ub": b.se_ub,
                "c_bar": b.c_bar, "ci": _interval_json(b.ci),
            }
            for key, b in est.items()
        },
    }
    _emit(report, args.out)
    return 0


def _cmd_simulate(args) -> int:
    cfg = DgpConfig(n=args.n, seed=args.seed, rho=args.rho,
                    beta_scale=args.beta_scale, u_scale=args.u_scale)
    res = simulate(cfg)
    frame = pd.DataFrame({"y": res.sample.y, "d": res.sample.d, "z": res.sample.z})
    frame.to_csv(args.out, index=False)
    print(f"wrote {args.out} ({args.n} rows)")
    if args.emit_latents:
        la = res.latents
        sidecar = _latents_path(args.out)
        pd.DataFrame({
            "D0": la.d0, "D1": la.d1,
            "T": np.asarray(TYPE_LABELS, dtype=object)[la.t],
            "Y1": la.y1, "Y0": la.y0,
        }).to_csv(sidecar, index=False)
        print(f"wrote {sidecar}")
    return 0


def _latents_path(out: str) -> str:
    stem, dot, ext = out.rpartition(".")
    return f"{stem}.latents.{ext}" if dot else f"{out}.latents"


def _cmd_replicate(args) -> int:
    sample = None
    if args.which == "card":
        if not args.data:
            raise MissingDataError(
                "the card target needs --data pointing at the returns-to-schooling "
                "extract (log wage, four-year-college treatment, proximity instrument)"
            )
        sample = load_csv(args.data, columns={"y": args.y, "d": args.d, "z": args.z})
    if args.which == "figure2" and args.bands_out:
        from .benchmarks import effect_bands

        checks, band_c, band_df = effect_bands(
            seed=args.seed, n=args.n or 1_000_000, grid_points=args.grid
        )
        series = np.column_stack([band_c, band_df[:, 1:]])
        header = "p_df,theta_c_lo,theta_c_hi,theta_df_lo,theta_df_hi"
        np.savetxt(args.bands_out, series, delimiter=",", header=header, comments="")
        print(f"wrote band series to {args.bands_out}")
    else:
        checks = run_target(args.which, seed=args.seed, n=args.n,
                            grid_points=args.grid, sample=sample)
    for c in checks:
        print(c.row())
    n_fail = sum(not c.passed for c in checks)
    print(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    if args.out:
        _emit({
            "schema_version": SCHEMA_VERSION,
            "command": "replicate",
            "target": args.which,
            "checks": [
                {"name": c.name, "observed": c.observed, "expected": c.expected,
                 "tol": c.tol, "passed": c.passed}
                for c in checks
            ],
        }, args.out)
    return 1 if n_fail else 0


# --- parser -----------------------------------------------------------------

def _add_dataset_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="path to a CSV dataset")
    p.add_argument("--y", default="y", help="outcome column name")
    p.add_argument("--d", default="d", help="treatment column name (binary)")
    p.add_argument("--z", default="z", help="instrument column name (binary)")
    p.add_argument("--outcome-kind", default="auto",
                   choices=("auto", "discrete", "continuous"),
                   help="override the discrete/continuous classification")
    p.add_argument("--bins", type=int, default=None,
                   help="histogram bins for continuous-outcome diagnostics")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ivbounds",
        description="Identified sets and misspecification-robust bounds for "
                    "randomized experiments with noncompliance.",
    )
    parser.add_argument("--version", action="version", version=f"ivbounds {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full identified-set report for a dataset")
    _add_dataset_flags(p)
    p.add_argument("--y-min", type=float, default=None, help="logical outcome minimum")
    p.add_argument("--y-max", type=float, default=None, help="logical outcome maximum")
    p.add_argument("--grid", type=int, default=101, help="defier-share grid points")
    p.add_argument("--level", type=float, default=0.95, help="confidence level")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("test", help="validity diagnostics only")
    _add_dataset_flags(p)
    p.add_argument("--grid", type=int, default=101, help="defier-share grid points")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("ci", help="bound estimates with confidence intervals")
    _add_dataset_flags(p)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_ci)

    p = sub.add_parser("simulate", help="draw from the double-hurdle generator")
    p.add_argument("--rho", type=float, default=0.0,
                   help="latent cost / instrument-shock correlation")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--beta-scale", type=float, default=5.0)
    p.add_argument("--u-scale", type=float, default=0.5)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--emit-latents", action="store_true",
                   help="write a latent-state sidecar CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("replicate", help="check built-in benchmark targets")
    p.add_argument("which", choices=TARGETS, help="benchmark target")
    p.add_argument("--data", default=None, help="dataset for the card target")
    p.add_argument("--y", default="lwage")
    p.add_argument("--d", default="college")
    p.add_argument("--z", default="nearc4")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--n", type=int, default=None, help="override the simulation size")
    p.add_argument("--grid", type=int, default=41)
    p.add_argument("--out", default=None, help="also write the checks as JSON")
    p.add_argument("--bands-out", default=None,
                   help="figure2 only: write the effect-band series as CSV")
    p.set_defaults(func=_cmd_replicate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IVBoundsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
