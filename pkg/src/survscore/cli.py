"""Command-line workbench: estimation, scoring, testing, censoring, plots.

Subcommands: km, scores, pseudo, test, censor, plot, compare.  Tabular
output is CSV (or JSON with --format json) on stdout unless --output is
given; test results are JSON; plot and compare write an SVG plus a sibling
CSV of the plotted coordinates.  Numbers are printed with 6 significant
digits.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .censoring import inject_censoring
from .curves import km_fit
from .dataset import TrialDataset, build_risk_table, parse_dataset, split_by_arm
from .km_tests import milestone_test, rmst_test
from .logrank import WeightSpec, compute_scores, compute_weights, standardize, wlrt_test
from .permutation import EXACT_ASSIGNMENT_LIMIT, exact_perm_p, mc_perm_p
from .pseudo import EstimandSpec, pseudo_test, pseudo_values, standardize_pseudo
from .svgplot import PlotPanel, render_svg

BACKEND_FLAGS = {"km": "km", "exp": "exponential", "pwexp": "piecewise"}
DEFAULT_BREAKPOINTS = (2.0, 4.0, 6.0, 8.0)


def _fmt(x) -> str:
    return f"{float(x):.6g}"


def _jsonable(x):
    x = float(x)
    return float(f"{x:.6g}") if math.isfinite(x) else None


def _load(args) -> TrialDataset:
    return parse_dataset(Path(args.input).read_text(encoding="utf-8"))


def _emit(text: str, args) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _tabulate(rows, columns, fmt) -> str:
    """rows of dicts -> CSV or a JSON list, with 6-significant-digit numbers."""
    if fmt == "json":
        out = [
            {c: _jsonable(v) if isinstance(v, float) else v for c, v in row.items()}
            for row in rows
        ]
        return json.dumps(out, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        cells = (row[c] for c in columns)
        writer.writerow(
            ["" if v is None else _fmt(v) if isinstance(v, float) else v for v in cells]
        )
    return buffer.getvalue()


def _parse_breakpoints(text: str) -> tuple[float, ...]:
    try:
        cuts = tuple(float(part) for part in text.replace(":", ",").split(",") if part)
    except ValueError:
        raise ValueError(f"bad breakpoints {text!r}: expected comma-separated numbers") from None
    return cuts


def _weight_spec(kind: str, args) -> WeightSpec:
    if kind == "logrank":
        return WeightSpec.logrank()
    if kind == "fh":
        return WeightSpec.fleming_harrington(args.rho, args.gamma)
    if args.sstar is None:
        raise ValueError(f"the modest test ({kind}) requires --sstar")
    return WeightSpec.modest(args.sstar)


def _estimand_spec(args) -> EstimandSpec:
    return EstimandSpec(
        kind=args.estimand,
        tau=args.tau,
        kappa=args.kappa,
        tau1=args.tau1,
        tau2=args.tau2,
        log_scale=args.ahsw_scale == "log",
        backend=BACKEND_FLAGS[args.backend],
        breakpoints=_parse_breakpoints(args.breakpoints),
        pooling=args.pooling,
    )


def parse_method_spec(text: str):
    """Parse 'name:key=value,...' into a weight or estimand spec.

    Score methods: logrank | fh:rho=..,gamma=.. | mw:sstar=..
    Pseudo methods: rmst:tau=.. | milestone:kappa=.. | wmst:tau1=..,tau2=..
    | ahsw:tau=..[,log=on|off], each optionally with backend=km|exp|pwexp,
    breakpoints=2:4:6:8, pooling=arm|pooled.
    """
    name, _, rest = text.partition(":")
    name = name.strip()
    options = {}
    if rest:
        for pair in rest.split(","):
            key, sep, value = pair.partition("=")
            if not sep:
                raise ValueError(f"bad method spec {text!r}: expected key=value, got {pair!r}")
            options[key.strip()] = value.strip()

    def take_float(key, default=None):
        raw = options.pop(key, None)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ValueError(f"bad method spec {text!r}: {key} must be a number") from None

    if name in ("logrank", "fh", "mw"):
        if name == "logrank":
            spec = WeightSpec.logrank()
        elif name == "fh":
            spec = WeightSpec.fleming_harrington(take_float("rho", 0.0), take_float("gamma", 0.0))
        else:
            s_star = take_float("sstar")
            if s_star is None:
                raise ValueError(f"bad method spec {text!r}: mw requires sstar=")
            spec = WeightSpec.modest(s_star)
        if options:
            raise ValueError(f"bad method spec {text!r}: unknown keys {sorted(options)}")
        return "score", spec

    if name not in ("rmst", "milestone", "wmst", "ahsw"):
        raise ValueError(f"bad method spec {text!r}: unknown method {name!r}")
    backend = options.pop("backend", "km")
    if backend not in BACKEND_FLAGS:
        raise ValueError(f"bad method spec {text!r}: backend must be km, exp or pwexp")
    breakpoints = options.pop("breakpoints", None)
    pooling = options.pop("pooling", "arm")
    log_flag = options.pop("log", "on")
    if log_flag not in ("on", "off"):
        raise ValueError(f"bad method spec {text!r}: log must be on or off")
    spec = EstimandSpec(
        kind=name,
        tau=take_float("tau"),
        kappa=take_float("kappa"),
        tau1=take_float("tau1"),
        tau2=take_float("tau2"),
        log_scale=log_flag == "on",
        backend=BACKEND_FLAGS[backend],
        breakpoints=_parse_breakpoints(breakpoints) if breakpoints else DEFAULT_BREAKPOINTS,
        pooling=pooling,
    )
    if options:
        raise ValueError(f"bad method spec {text!r}: unknown keys {sorted(options)}")
    return "pseudo", spec


def _build_panel(ds: TrialDataset, parsed) -> PlotPanel:
    kind, spec = parsed
    if kind == "score":
        rt = build_risk_table(ds)
        weights = compute_weights(rt, km_fit(ds), spec)
        values = standardize(compute_scores(rt, weights, spec)).scaled
    else:
        values = standardize_pseudo(pseudo_values(ds, spec)).scaled
    return PlotPanel.from_values(spec.describe(), ds.times, values, ds.arms, ds.events)


def _panel_csv(panels_with_points, with_method: bool) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = ["time", "arm", "event", "scaled_value"]
    writer.writerow((["method"] if with_method else []) + header)
    for panel in panels_with_points:
        for p in panel.points:
            row = [_fmt(p.time), p.arm, 0 if p.censored else 1, _fmt(p.value)]
            writer.writerow(([panel.title] if with_method else []) + row)
    return buffer.getvalue()


def cmd_km(args) -> int:
    ds = _load(args)
    rows = []
    if args.pooled:
        groups = [("pooled", ds)]
    else:
        arm0, arm1 = split_by_arm(ds)
        groups = [(0, arm0), (1, arm1)]
    for label, sub in groups:
        curve = km_fit(sub)
        rows.append({"time": 0.0, "survival": 1.0, "arm": label})
        for t, v in zip(curve.jump_times, curve.values):
            rows.append({"time": t, "survival": v, "arm": label})
    _emit(_tabulate(rows, ["time", "survival", "arm"], args.format), args)
    return 0


def cmd_scores(args) -> int:
    ds = _load(args)
    spec = _weight_spec(args.test, args)
    rt = build_risk_table(ds)
    pooled = km_fit(ds)
    weights = compute_weights(rt, pooled, spec)
    scores = standardize(compute_scores(rt, weights, spec))

    order = sorted(range(ds.n), key=lambda k: ds.subjects[k].time)
    rows = []
    for k in order:
        s = ds.subjects[k]
        j = rt.interval_index(s.time)  # number of event times <= s.time; >= 1 for events
        rows.append(
            {
                "time": s.time,
                "arm": s.arm,
                "event": s.event,
                "survival": pooled.left(s.time),
                "weight": weights[j - 1] if j >= 1 else None,
                "score": scores.raw[k],
                "scaled_score": scores.scaled[k],
            }
        )
    columns = ["time", "arm", "event", "survival", "weight", "score", "scaled_score"]
    _emit(_tabulate(rows, columns, args.format), args)
    return 0


def cmd_pseudo(args) -> int:
    ds = _load(args)
    ps = standardize_pseudo(pseudo_values(ds, _estimand_spec(args)))
    rows = []
    for s, loo, value, scaled in zip(ds.subjects, ps.loo, ps.values, ps.scaled):
        rows.append(
            {
                "time": s.time,
                "arm": s.arm,
                "event": s.event,
                "loo_estimate": loo,
                "pseudo": value,
                "scaled_pseudo": scaled,
            }
        )
    columns = ["time", "arm", "event", "loo_estimate", "pseudo", "scaled_pseudo"]
    _emit(_tabulate(rows, columns, args.format), args)
    return 0


def cmd_test(args) -> int:
    ds = _load(args)
    permutable = None  # (values, benefit_direction)
    if args.method in ("logrank", "fh", "mw"):
        result = wlrt_test(ds, _weight_spec(args.method, args))
        permutable = (result.per_subject.raw, "lower")
    elif args.method == "rmst":
        if args.tau is None:
            raise ValueError("--method rmst requires --tau")
        result = rmst_test(ds, args.tau)
    elif args.method == "milestone":
        if args.kappa is None:
            raise ValueError("--method milestone requires --kappa")
        result = milestone_test(ds, args.kappa)
    else:
        if args.estimand is None:
            raise ValueError("--method pseudo requires --estimand")
        ps = pseudo_values(ds, _estimand_spec(args))
        result = pseudo_test(ps)
        permutable = (ps.values, "lower" if ps.spec.kind == "ahsw" else "upper")

    p_one_sided = result.p_one_sided
    if args.flip_direction:
        p_one_sided = 1.0 - p_one_sided

    payload = {
        "method": result.method,
        "statistic": _jsonable(result.statistic),
        "variance": _jsonable(result.variance),
        "z": _jsonable(result.z),
        "p_one_sided": _jsonable(p_one_sided),
        "warnings": list(result.warnings),
    }
    if args.perm:
        if permutable is None:
            raise ValueError(
                "permutation inference needs per-subject values; "
                "use a score method or --method pseudo"
            )
        values, direction = permutable
        if args.flip_direction:
            direction = "upper" if direction == "lower" else "lower"
        if args.perm == "exact":
            p = exact_perm_p(values, ds.arms, direction)
            payload["permutation"] = {
                "mode": "exact",
                "direction": direction,
                "assignments": math.comb(ds.n, ds.n_arm1),
                "p": _jsonable(p),
            }
        else:
            mc = mc_perm_p(values, ds.arms, args.replicates, args.seed, direction)
            payload["permutation"] = {
                "mode": "monte_carlo",
                "direction": direction,
                "replicates": mc.replicates,
                "seed": mc.seed,
                "p": _jsonable(mc.p),
                "std_error": _jsonable(mc.std_error),
            }
    _emit(json.dumps(payload, indent=2) + "\n", args)
    return 0


def cmd_censor(args) -> int:
    ds = _load(args)
    censored = inject_censoring(ds, args.max, args.seed)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["time", "arm", "event"])
    for s in censored.subjects:
        writer.writerow([_fmt(s.time), s.arm, s.event])
    _emit(buffer.getvalue(), args)
    return 0


def cmd_plot(args) -> int:
    ds = _load(args)
    panel = _build_panel(ds, parse_method_spec(args.spec))
    out = Path(args.output)
    out.write_text(render_svg([panel]), encoding="utf-8")
    out.with_suffix(".csv").write_text(_panel_csv([panel], with_method=False), encoding="utf-8")
    return 0


def cmd_compare(args) -> int:
    if len(args.spec) < 2:
        raise ValueError("compare needs at least two --spec methods")
    ds = _load(args)
    panels = [_build_panel(ds, parse_method_spec(s)) for s in args.spec]
    out = Path(args.output)
    out.write_text(render_svg(panels, columns=args.columns), encoding="utf-8")
    out.with_suffix(".csv").write_text(_panel_csv(panels, with_method=True), encoding="utf-8")
    return 0


def _add_weight_flags(parser, with_selector: bool):
    if with_selector:
        parser.add_argument("--test", choices=["logrank", "fh", "mw"], default="logrank",
                            help="weight function (default: logrank)")
    parser.add_argument("--rho", type=float, default=0.0, help="Fleming-Harrington rho")
    parser.add_argument("--gamma", type=float, default=0.0, help="Fleming-Harrington gamma")
    parser.add_argument("--sstar", type=float, default=None,
                        help="floor s* in (0,1] for the modest (mw) test")


def _add_estimand_flags(parser, required: bool):
    parser.add_argument("--estimand", choices=["rmst", "milestone", "wmst", "ahsw"],
                        required=required)
    parser.add_argument("--tau", type=float, default=None, help="horizon for rmst/ahsw")
    parser.add_argument("--kappa", type=float, default=None, help="milestone time")
    parser.add_argument("--tau1", type=float, default=None, help="wmst window start")
    parser.add_argument("--tau2", type=float, default=None, help="wmst window end")
    parser.add_argument("--backend", choices=sorted(BACKEND_FLAGS), default="km")
    parser.add_argument("--breakpoints", default="2,4,6,8",
                        help="piecewise-exponential breakpoints (default: 2,4,6,8)")
    parser.add_argument("--pooling", choices=["arm", "pooled"], default="arm",
                        help="fit per arm (default) or on the pooled sample")
    parser.add_argument("--ahsw-scale", choices=["log", "ratio"], default="log")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="input CSV (time,arm,event)")
    common.add_argument("--output", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    parser = argparse.ArgumentParser(
        prog="survscore",
        description="Per-subject scores and pseudo-values for two-arm survival tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("km", parents=[common], help="Kaplan-Meier curves as CSV")
    p.add_argument("--pooled", action="store_true", help="pool both arms into one curve")
    p.set_defaults(func=cmd_km)

    p = sub.add_parser("scores", parents=[common], help="weighted log-rank scores per subject")
    _add_weight_flags(p, with_selector=True)
    p.set_defaults(func=cmd_scores)

    p = sub.add_parser("pseudo", parents=[common], help="jackknife pseudo-values per subject")
    _add_estimand_flags(p, required=True)
    p.set_defaults(func=cmd_pseudo)

    p = sub.add_parser("test", parents=[common], help="run a test, result as JSON")
    p.add_argument("--method", choices=["rmst", "milestone", "logrank", "fh", "mw", "pseudo"],
                   required=True)
    _add_weight_flags(p, with_selector=False)
    _add_estimand_flags(p, required=False)
    p.add_argument("--perm", choices=["exact", "mc"], default=None,
                   help=f"add a permutation p-value (exact up to {EXACT_ASSIGNMENT_LIMIT} "
                        "assignments)")
    p.add_argument("--replicates", type=int, default=10_000, help="Monte-Carlo replicates")
    p.add_argument("--seed", type=int, default=0, help="Monte-Carlo seed")
    p.add_argument("--flip-direction", action="store_true",
                   help="test the opposite one-sided alternative")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("censor", parents=[common], help="inject uniform censoring")
    p.add_argument("--max", type=float, default=26.0,
                   help="upper bound of the Uniform(0, max) censoring draw (default: 26)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_censor)

    p = sub.add_parser("plot", parents=[common], help="one method panel as SVG + CSV")
    p.add_argument("--spec", required=True, help="method spec, e.g. 'mw:sstar=0.5'")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("compare", parents=[common],
                       help="aligned panels for several methods as SVG + CSV")
    p.add_argument("--spec", action="append", required=True,
                   help="method spec; repeat for each panel")
    p.add_argument("--columns", type=int, default=3, help="panels per row (default: 3)")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("plot", "compare") and not args.output:
        print("error: plot and compare require --output", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
