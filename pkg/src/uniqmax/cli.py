"""Command-line front end: every operation as a subcommand with CSV/JSON
output.

Data rows are deterministic functions of the resolved parameters; the
manifest metadata line records those parameters (plus version and
timestamp) so any output can be reproduced byte-for-byte.

Exit codes: 0 ok, 2 usage error, 3 mathematical domain error,
4 feasibility/resource error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__, asymptotics, enumeration, montecarlo
from . import pmf as pmf_mod
from . import serialize
from .errors import DomainError, FeasibilityError, ModelSpecError
from .models import (PayoffModel, make_chess, make_classic, make_uniform,
                     parse_model_json)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_FEASIBILITY = 4


def resolve_model(spec: str, model_file: str | None) -> PayoffModel:
    if model_file is not None:
        try:
            text = Path(model_file).read_text(encoding="utf-8")
        except OSError as exc:
            raise ModelSpecError(f"cannot read model file {model_file}: {exc}")
        return parse_model_json(text)
    if spec == "classic":
        return make_classic()
    if spec.startswith("chess:"):
        token = spec.split(":", 1)[1]
        try:
            p = Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise ModelSpecError(f"invalid draw probability {token!r} in {spec!r}")
        return make_chess(p)
    if spec.startswith("uniform:"):
        token = spec.split(":", 1)[1]
        try:
            k = int(token)
        except ValueError:
            raise ModelSpecError(f"invalid lattice size {token!r} in {spec!r}")
        return make_uniform(k)
    raise ModelSpecError(
        f"unknown model {spec!r}; expected classic, chess:<p_draw>, "
        "uniform:<k> or --model-file")


def parse_grid(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ModelSpecError(f"grid must be n1:n2:step, got {text!r}")
    try:
        lo, hi, step = (int(p) for p in parts)
    except ValueError:
        raise ModelSpecError(f"grid must contain integers, got {text!r}")
    if step < 1 or hi < lo:
        raise ModelSpecError(f"grid must be ascending with step >= 1, got {text!r}")
    return list(range(lo, hi + 1, step))


def parse_x_grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise ModelSpecError(f"x-grid must be comma-separated floats, got {text!r}")


def _n_values(args) -> list[int]:
    if args.grid is not None:
        return parse_grid(args.grid)
    if args.n is None:
        raise ModelSpecError("one of --n or --grid is required")
    return [args.n]


def _rational(value: Fraction) -> str:
    return str(value)


def _manifest(args, model: PayoffModel | None, **params) -> tuple[str, str]:
    payload = {
        "subcommand": args.command,
        "params": params,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if model is not None:
        payload["params"]["model"] = model.label
        if getattr(args, "model_file", None):
            payload["params"]["model_file"] = args.model_file
    payload["params"]["out"] = args.out
    return "manifest", json.dumps(payload)


def _write(args, text: str) -> None:
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# --- subcommand implementations ---------------------------------------------

def cmd_exact_r(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    records = []
    for n in ns:
        report = enumeration.exact_unique_max(model, n)
        records.append({
            "op": "exact-r", "model": model.label, "n": n,
            "r_n": _rational(report.r_n),
            "p_tie_at_max": _rational(report.p_tie_at_max),
        })
    meta = [_manifest(args, model, n=ns)]
    return serialize.records_text(meta, records)


def cmd_census(args) -> str:
    model = resolve_model(args.model, args.model_file)
    table = enumeration.score_census(model, args.n)
    header, rows = enumeration.census_rows(table)
    meta = [_manifest(args, model, n=args.n),
            ("model", model.label), ("n", str(args.n)), ("k", str(model.k))]
    return serialize.csv_text(meta, header, rows)


def cmd_nd_check(args) -> str:
    model = resolve_model(args.model, args.model_file)
    report = enumeration.nd_inequality_check(model, args.n)
    header = ["x", "joint_cdf", "product_cdf", "gap"]
    rows = [[str(x), _rational(lhs), _rational(rhs), _rational(lhs - rhs)]
            for x, lhs, rhs in report.rows]
    meta = [_manifest(args, model, n=args.n),
            ("model", model.label), ("n", str(args.n)),
            ("max_gap", _rational(report.max_gap)),
            ("ok", str(report.ok).lower())]
    return serialize.csv_text(meta, header, rows)


def _resolve_y_threshold(model, args, n) -> float:
    if args.y_threshold is not None:
        return args.y_threshold
    return pmf_mod.threshold(model, n, args.epsilon).t_n_lattice


def cmd_wn_dist(args) -> str:
    model = resolve_model(args.model, args.model_file)
    yt = _resolve_y_threshold(model, args, args.n)
    dist = enumeration.wn_distribution_exact(model, args.n, yt)
    header = ["w", "prob_num", "prob_den"]
    rows = [[str(w), str(p.numerator), str(p.denominator)]
            for w, p in dist.items()]
    meta = [_manifest(args, model, n=args.n, y_threshold=yt),
            ("model", model.label), ("n", str(args.n)),
            ("y_threshold", repr(yt))]
    return serialize.csv_text(meta, header, rows)


def cmd_pmf(args) -> str:
    model = resolve_model(args.model, args.model_file)
    dist = pmf_mod.score_pmf(model, args.games, args.mode)
    header, rows = pmf_mod.pmf_rows(dist)
    meta = [_manifest(args, model, games=args.games, mode=args.mode)]
    meta.extend(pmf_mod.pmf_metadata(model, dist))
    return serialize.csv_text(meta, header, rows)


def cmd_threshold(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    records = []
    for n in ns:
        thr = pmf_mod.threshold(model, n, args.epsilon)
        records.append({
            "op": "threshold", "model": model.label, "n": n,
            "epsilon": args.epsilon, "x_n": thr.x_n, "t_n": thr.t_n,
            "t_n_lattice": thr.t_n_lattice,
        })
    meta = [_manifest(args, model, n=ns, epsilon=args.epsilon)]
    return serialize.records_text(meta, records)


def cmd_wn_exact(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    records = []
    for n in ns:
        yt = _resolve_y_threshold(model, args, n)
        value = pmf_mod.expected_wn_exact(model, n, yt, args.mode)
        records.append({
            "op": "wn-exact", "model": model.label, "n": n,
            "epsilon": args.epsilon, "y_threshold": yt, "mode": args.mode,
            "e_wn": _rational(value) if args.mode == "exact" else value,
        })
    meta = [_manifest(args, model, n=ns, epsilon=args.epsilon, mode=args.mode,
                      y_threshold=args.y_threshold)]
    return serialize.records_text(meta, records)


def cmd_wn_bound(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    records = []
    for n in ns:
        value = pmf_mod.expected_wn_upper(model, n, args.epsilon, args.mode)
        records.append({
            "op": "wn-bound", "model": model.label, "n": n,
            "epsilon": args.epsilon, "mode": args.mode,
            "rhs_n": _rational(value) if args.mode == "exact" else value,
        })
    meta = [_manifest(args, model, n=ns, epsilon=args.epsilon, mode=args.mode)]
    return serialize.records_text(meta, records)


def cmd_prop1_bound(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    records = []
    for n in ns:
        value = pmf_mod.prop1_lower_bound(model, n, args.epsilon, args.mode)
        records.append({
            "op": "prop1-bound", "model": model.label, "n": n,
            "epsilon": args.epsilon, "mode": args.mode, "bound": value,
        })
    meta = [_manifest(args, model, n=ns, epsilon=args.epsilon, mode=args.mode)]
    return serialize.records_text(meta, records)


def _mc_record(op: str, model, n: int, epsilon, est) -> dict:
    return {
        "op": op, "model": model.label, "n": n, "epsilon": epsilon,
        "seed": est.seed, "reps": est.reps, "estimate": est.estimate,
        "ci": [est.ci_low, est.ci_high],
    }


def _mc_config(args) -> montecarlo.McConfig:
    try:
        return montecarlo.McConfig(seed=args.seed, reps=args.reps,
                                   confidence=args.confidence)
    except ValueError as exc:
        raise ModelSpecError(str(exc))


def cmd_mc_unique(args) -> str:
    model = resolve_model(args.model, args.model_file)
    cfg = _mc_config(args)
    ns = _n_values(args)
    records = [_mc_record("mc-unique", model, n, None,
                          montecarlo.estimate_unique_max(model, n, cfg))
               for n in ns]
    meta = [_manifest(args, model, n=ns, seed=cfg.seed, reps=cfg.reps,
                      confidence=cfg.confidence)]
    return serialize.records_text(meta, records)


def cmd_mc_exceed(args) -> str:
    model = resolve_model(args.model, args.model_file)
    cfg = _mc_config(args)
    ns = _n_values(args)
    records = [_mc_record(
        "mc-exceed", model, n, args.epsilon,
        montecarlo.estimate_exceed_threshold(model, n, args.epsilon, cfg,
                                             y_threshold=args.y_threshold))
        for n in ns]
    meta = [_manifest(args, model, n=ns, epsilon=args.epsilon, seed=cfg.seed,
                      reps=cfg.reps, confidence=cfg.confidence,
                      y_threshold=args.y_threshold)]
    return serialize.records_text(meta, records)


def cmd_mc_collision_free(args) -> str:
    model = resolve_model(args.model, args.model_file)
    cfg = _mc_config(args)
    ns = _n_values(args)
    records = [_mc_record(
        "mc-collision-free", model, n, args.epsilon,
        montecarlo.estimate_collision_free(model, n, args.epsilon, cfg,
                                           y_threshold=args.y_threshold))
        for n in ns]
    meta = [_manifest(args, model, n=ns, epsilon=args.epsilon, seed=cfg.seed,
                      reps=cfg.reps, confidence=cfg.confidence,
                      y_threshold=args.y_threshold)]
    return serialize.records_text(meta, records)


def _ratio_csv(args, model, diag) -> str:
    header, rows = asymptotics.ratio_rows(diag)
    meta = [_manifest(args, model, grid=diag.n_grid, epsilon=diag.epsilon,
                      mode=getattr(args, "mode", "float")),
            ("quantity", diag.quantity), ("model", model.label),
            ("epsilon", repr(diag.epsilon))]
    return serialize.csv_text(meta, header, rows)


def cmd_tail_compare(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    return _ratio_csv(args, model, asymptotics.tail_compare(
        model, ns, args.epsilon, args.mode))


def cmd_llt_compare(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    return _ratio_csv(args, model, asymptotics.llt_compare(model, ns, args.mode))


def cmd_claim2(args) -> str:
    model = resolve_model(args.model, args.model_file)
    x_grid = parse_x_grid(args.x_grid)
    report = asymptotics.claim2_check(model, args.n, x_grid)
    header, rows = asymptotics.claim2_rows(report)
    meta = [_manifest(args, model, n=args.n, x_grid=x_grid),
            ("model", model.label), ("n", str(args.n)),
            ("violations", str(len(report.violations)))]
    return serialize.csv_text(meta, header, rows)


def cmd_claim3_compare(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    return _ratio_csv(args, model, asymptotics.claim3_compare(
        model, ns, args.epsilon, args.mode))


def cmd_rhs_compare(args) -> str:
    model = resolve_model(args.model, args.model_file)
    ns = _n_values(args)
    return _ratio_csv(args, model, asymptotics.rhs_compare(
        model, ns, args.epsilon, args.mode))


COMMANDS = {
    "exact-r": cmd_exact_r,
    "census": cmd_census,
    "nd-check": cmd_nd_check,
    "wn-dist": cmd_wn_dist,
    "pmf": cmd_pmf,
    "threshold": cmd_threshold,
    "wn-exact": cmd_wn_exact,
    "wn-bound": cmd_wn_bound,
    "prop1-bound": cmd_prop1_bound,
    "mc-unique": cmd_mc_unique,
    "mc-exceed": cmd_mc_exceed,
    "mc-collision-free": cmd_mc_collision_free,
    "tail-compare": cmd_tail_compare,
    "llt-compare": cmd_llt_compare,
    "claim2": cmd_claim2,
    "claim3-compare": cmd_claim3_compare,
    "rhs-compare": cmd_rhs_compare,
}


def _add_model_args(p):
    p.add_argument("--model", default="classic",
                   help="classic | chess:<p_draw> | uniform:<k>")
    p.add_argument("--model-file", default=None,
                   help="path to a JSON model-spec document")
    p.add_argument("--out", default="-", help="output path (default stdout)")


def _add_n_or_grid(p, required=True):
    p.add_argument("--n", type=int, default=None, help="tournament size")
    p.add_argument("--grid", default=None,
                   help="n1:n2:step, expanded in ascending order")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniqmax",
        description="Round-robin tournaments: exact, asymptotic and Monte "
                    "Carlo analysis of maximum-score uniqueness.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, n_mode="grid", epsilon=False, mode=False,
            mc=False, y_threshold=False):
        p = sub.add_parser(name, help=help_text)
        _add_model_args(p)
        if n_mode == "grid":
            _add_n_or_grid(p)
        elif n_mode == "single":
            p.add_argument("--n", type=int, required=True, help="tournament size")
        if epsilon:
            p.add_argument("--epsilon", type=float, default=1.0,
                           help="threshold slack parameter (> 0)")
        if mode:
            p.add_argument("--mode", choices=("exact", "float"),
                           default="exact", help="arithmetic mode")
        if y_threshold:
            p.add_argument("--y-threshold", type=float, default=None,
                           help="explicit threshold in Y-units (overrides epsilon)")
        if mc:
            p.add_argument("--seed", type=int, default=1, help="RNG seed")
            p.add_argument("--reps", type=int, default=100_000,
                           help="number of replications")
            p.add_argument("--confidence", type=float, default=0.95,
                           help="CI confidence level")
        return p

    add("exact-r", "exact unique-maximum probability by enumeration")
    add("census", "exact score-sequence census", n_mode="single")
    add("nd-check", "joint-vs-product CDF inequality at every lattice point",
        n_mode="single")
    add("wn-dist", "exact distribution of ties above a threshold",
        n_mode="single", epsilon=True, y_threshold=True)
    p = add("pmf", "single-player score PMF export", n_mode="none", mode=True)
    p.add_argument("--games", type=int, required=True,
                   help="number of games summed")
    add("threshold", "score threshold t_n and its Y-lattice image",
        epsilon=True)
    add("wn-exact", "exact expected tie count above the threshold",
        epsilon=True, mode=True, y_threshold=True)
    add("wn-bound", "closed-window upper bound on the expected tie count",
        epsilon=True, mode=True)
    add("prop1-bound", "lower bound on P(max score exceeds t_n)",
        epsilon=True, mode=True)
    add("mc-unique", "Monte Carlo estimate of the unique-maximum probability",
        mc=True)
    add("mc-exceed", "Monte Carlo estimate of P(max score > t_n)",
        epsilon=True, mc=True, y_threshold=True)
    add("mc-collision-free", "Monte Carlo estimate of P(no ties above t_n)",
        epsilon=True, mc=True, y_threshold=True)
    add("tail-compare", "exact marginal tail vs closed form", epsilon=True)
    add("llt-compare", "local-limit sup error vs 1/sqrt(m) over a games grid")
    p = add("claim2", "point-mass monotonicity check on a shift grid",
            n_mode="single")
    p.add_argument("--x-grid", default="0.5,1.0,1.5,2.0,2.5",
                   help="comma-separated positive shifts")
    add("claim3-compare", "exact threshold-cell mass vs closed form",
        epsilon=True)
    add("rhs-compare", "exact pairwise-tie bound vs closed form", epsilon=True)

    # compare subcommands run in float mode unless asked otherwise
    for name in ("tail-compare", "llt-compare", "claim3-compare", "rhs-compare"):
        sub.choices[name].add_argument(
            "--mode", choices=("exact", "float"), default="float",
            help="arithmetic mode for the exact side")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except ModelSpecError as exc:
        print(f"uniqmax: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"uniqmax: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FeasibilityError as exc:
        print(f"uniqmax: feasibility error: {exc}", file=sys.stderr)
        return EXIT_FEASIBILITY
    _write(args, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
