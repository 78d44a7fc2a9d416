"""Command-line interface.

Exit codes: 0 success, 1 failed verification, 2 usage or domain error,
3 divergent subordination (``sigma (1 - alpha) >= 1``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .errors import DivergenceError, DomainError, EvaluationOverflowError, FracflowError
from .intermittency import (
    SCHEMA_VERSION,
    Partition,
    Thresholds,
    aggregate_verdict,
    classify,
    classify_moments,
    partitions_of,
)
from .models import (
    ContactModel,
    FrontIndicatorModel,
    PolynomialModel,
    PureBirthModel,
    StretchedExpModel,
    front_position_numeric,
    front_subordinated_density,
    subordinated_corr,
    subordinated_corr_log,
)
from .specfun import mittag_leffler, wright_median, wright_moment, wright_pdf, wright_tail_eval
from .subordination import QuadratureSpec, check_convergence, subordinate_correlations, subordinate_density

OUTDIR_ENV = "FRACFLOW_OUTDIR"
DEFAULT_LOG_GRID = "log:1:1e6:61"

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (inclusive), ``log:start:stop:points``, a
    comma-separated list, or a single number."""
    text = text.strip()
    try:
        if text.startswith("log:"):
            _, a, b, n = text.split(":")
            a, b, n = float(a), float(b), int(n)
            if not (0 < a < b and n >= 2):
                raise UsageError(f"log grid needs 0 < start < stop and points >= 2: {text!r}")
            out = np.logspace(math.log10(a), math.log10(b), n)
            out[0], out[-1] = a, b
            return out
        if ":" in text:
            a, b, h = (float(v) for v in text.split(":"))
            if not (h > 0 and b >= a):
                raise UsageError(f"grid needs step > 0 and stop >= start: {text!r}")
            n = int(math.floor((b - a) / h + 1e-9))
            return np.round(a + h * np.arange(n + 1), 12)
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}") from exc


def fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _destination(args, default_name: str) -> Path | None:
    if args.out:
        return Path(args.out)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir:
        return Path(outdir) / default_name
    return None


def emit_table(args, name: str, columns: Sequence[str], rows: Sequence[Sequence], meta: dict) -> Path | None:
    """Write the table as CSV or JSON to ``--out``, ``$FRACFLOW_OUTDIR`` or stdout."""
    dest = _destination(args, f"{name}.{args.format}")
    buf = io.StringIO()
    if args.format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    else:
        doc = {"schema_version": SCHEMA_VERSION, "command": name,
               **{k: _json_value(v) for k, v in meta.items()},
               "columns": list(columns),
               "rows": [[_json_value(v) for v in r] for r in rows]}
        buf.write(json.dumps(doc, indent=1) + "\n")
    _write(dest, buf.getvalue())
    return dest


def emit_json(args, name: str, doc: dict) -> Path | None:
    dest = _destination(args, f"{name}.json")
    _write(dest, json.dumps(doc, indent=1, default=_json_value) + "\n")
    return dest


def _write(dest: Path | None, text: str) -> None:
    if dest is None:
        sys.stdout.write(text)
        return
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(text)


def _plot(args, dest: Path | None, x, series: dict, xlabel: str, ylabel: str, **kw) -> None:
    if not getattr(args, "plot", False):
        return
    if dest is None:
        raise UsageError(f"--plot needs --out or ${OUTDIR_ENV} to place the figure")
    from .plotting import figure_path, line_figure

    line_figure(figure_path(dest), x, series, xlabel, ylabel, **kw)


def _alpha(text: str) -> float:
    a = float(text)
    if not (0 < a <= 1):
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {text}")
    return a


def _add_output(p: argparse.ArgumentParser, plot: bool = True) -> None:
    p.add_argument("--out", help=f"output file (default: stdout, or ${OUTDIR_ENV}/<command>.<format>)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    if plot:
        p.add_argument("--plot", action="store_true", help="also write a PNG figure next to the table")


def _add_model(p: argparse.ArgumentParser, front: bool = True) -> None:
    choices = ["pure-birth", "contact", "stretched-exp", "polynomial"] + (["front"] if front else [])
    p.add_argument("--model", required=True, choices=choices)
    p.add_argument("--z", type=float, default=1.0, help="pure-birth intensity")
    p.add_argument("--rho0", type=float, default=1.0, help="pure-birth initial density")
    p.add_argument("--C", type=float, default=1.0, help="contact amplitude")
    p.add_argument("--beta", type=float, default=1.0, help="contact / stretched-exp rate")
    p.add_argument("--sigma", type=float, default=1.0, help="stretched-exp exponent")
    p.add_argument("--p", type=int, default=1, help="polynomial degree")
    p.add_argument("--v", type=float, default=1.0, help="front speed")


def build_model(args):
    return {
        "pure-birth": lambda: PureBirthModel(args.z, args.rho0),
        "contact": lambda: ContactModel(args.C, args.beta),
        "stretched-exp": lambda: StretchedExpModel(args.beta, args.sigma),
        "polynomial": lambda: PolynomialModel(args.p),
        "front": lambda: FrontIndicatorModel(args.v),
    }[args.model]()


def _guard(model, alpha: float) -> None:
    if isinstance(model, StretchedExpModel):
        check_convergence(alpha, model.flow().growth_class)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_specfun(args) -> int:
    a = args.alpha
    rows = []
    if args.function == "median":
        if a == 1.0:
            raise UsageError("the median needs alpha < 1")
        rows.append((a, wright_median(a), 0.0, "brentq"))
        return _specfun_out(args, rows, "alpha")
    if args.function == "moment":
        for d in parse_grid(args.delta):
            rows.append((float(d), wright_moment(a, d), 0.0, "closed_form"))
        return _specfun_out(args, rows, "delta")
    grid = parse_grid(args.grid or {"ml": "-5:5:0.5", "wright": "0:8:0.1", "tail": "0:8:0.1"}[args.function])
    for x in grid:
        x = float(x)
        if args.function == "ml":
            try:
                r = mittag_leffler(a, x)
                rows.append((x, r.value, r.abs_error_estimate, r.regime))
            except EvaluationOverflowError:
                rows.append((x, math.inf, math.nan, "overflow"))
        elif args.function == "wright":
            r = wright_pdf(a, x)
            rows.append((x, r.value, r.abs_error_estimate, r.regime))
        else:
            r = wright_tail_eval(a, x)
            rows.append((x, r.value, r.abs_error_estimate, r.regime))
    return _specfun_out(args, rows, {"ml": "z", "wright": "t", "tail": "s"}[args.function])


def _specfun_out(args, rows, arg_name: str) -> int:
    dest = emit_table(args, f"specfun-{args.function}", ("argument", "value", "error_estimate", "regime"),
                      rows, {"function": args.function, "alpha": args.alpha, "argument": arg_name})
    if len(rows) > 1:
        _plot(args, dest, [r[0] for r in rows], {args.function: [r[1] for r in rows]}, arg_name,
              args.function, title=f"alpha = {args.alpha:g}")
    return EXIT_OK


def cmd_subordinate(args) -> int:
    model = build_model(args)
    a = args.alpha
    _guard(model, a)
    spec = QuadratureSpec(rel_tol=args.rel_tol)
    rows = []
    times = parse_grid(args.t)
    if isinstance(model, FrontIndicatorModel):
        xs = parse_grid(args.x)
        flow = model.flow()
        for t in times:
            for x in xs:
                t, x = float(t), float(x)
                classical = float(model.density(t, x))
                closed = front_subordinated_density(model, a, t, x)
                quad = subordinate_density(a, flow, t, np.array([x]), spec)
                rows.append((t, x, classical, closed, quad, abs(closed - quad)))
        columns = ("t", "x", "classical", "subordinated_closed_form", "subordinated_quadrature", "abs_diff")
    else:
        seq = model.correlation_sequence()
        n = args.n
        for t in times:
            t = float(t)
            try:
                classical = float(model.correlation(n, t))
                closed = subordinated_corr(model, a, n, t)
                quad = subordinate_correlations(a, seq, n, t, spec)
            except EvaluationOverflowError:
                classical = closed = quad = math.inf
            diff = abs(closed - quad) if math.isfinite(closed) else math.nan
            rows.append((t, classical, closed, quad, diff))
        columns = ("t", "classical", "subordinated_closed_form", "subordinated_quadrature", "abs_diff")
    dest = emit_table(args, f"subordinate-{args.model}", columns, rows,
                      {"model": args.model, "alpha": a})
    if not isinstance(model, FrontIndicatorModel) and len(rows) > 1:
        _plot(args, dest, [r[0] for r in rows],
              {"classical": [r[1] for r in rows], "closed form": [r[2] for r in rows],
               "quadrature": [r[3] for r in rows]}, "t", "correlation", logy=True,
              markers={"quadrature": "o"}, title=f"{args.model}, alpha = {a:g}")
    elif len(times) == 1 and len(rows) > 1:
        _plot(args, dest, [r[1] for r in rows],
              {"classical": [r[2] for r in rows], "closed form": [r[3] for r in rows],
               "quadrature": [r[4] for r in rows]}, "x", "density", markers={"quadrature": "o"},
              title=f"front, alpha = {a:g}, t = {times[0]:g}")
    return EXIT_OK


def cmd_front(args) -> int:
    model = FrontIndicatorModel(args.v)
    a = args.alpha
    if a == 1.0:
        raise UsageError("the front law needs alpha < 1")
    flow = model.flow()
    s_a = wright_median(a)
    rows = []
    for t in parse_grid(args.t):
        t = float(t)
        law = 1.0 + s_a * model.v * t ** a
        numeric = front_position_numeric(model, a, t)
        rows.append((t, numeric, law, subordinate_density(a, flow, t, np.array([law]))))
    dest = emit_table(args, "front", ("t", "front_position", "front_law", "density_at_front"), rows,
                      {"alpha": a, "v": args.v, "median": s_a})
    if len(rows) > 1:
        _plot(args, dest, [r[0] for r in rows],
              {"quadrature root": [r[1] for r in rows], "1 + s v t^alpha": [r[2] for r in rows]},
              "t", "front position", markers={"quadrature root": "o"}, title=f"alpha = {a:g}")
    return EXIT_OK


def cmd_intermittency(args) -> int:
    model = build_model(args)
    a = args.alpha
    _guard(model, a)
    corr_log = lambda n, t: subordinated_corr_log(model, a, n, t)
    grid = parse_grid(args.t)
    thr = Thresholds(divergence_log=args.divergence_log, flat_eps=args.flat_eps)
    run = classify_moments if args.moments else classify
    if args.all_partitions:
        parts = [p for n in range(2, args.all_partitions + 1) for p in partitions_of(n)]
    else:
        parts = [Partition.parse(args.partition)]
    reports = [run(corr_log, p, grid, thr, workers=args.workers) for p in parts]
    if len(reports) == 1:
        doc = {**reports[0].to_dict(), "model": args.model, "alpha": a}
    else:
        doc = {"schema_version": SCHEMA_VERSION, "model": args.model, "alpha": a,
               "verdict": aggregate_verdict(reports),
               "partitions_checked": [str(p) for p in parts],
               "note": f"finite partition set: all partitions of n <= {args.all_partitions}",
               "reports": [r.to_dict() for r in reports]}
    dest = emit_json(args, f"intermittency-{args.model}", doc)
    if args.plot:
        x = [t for t, _ in reports[0].ratio_trace]
        _plot(args, dest, x, {str(r.partition): [v for _, v in r.ratio_trace] for r in reports[:8]},
              "t", "log ratio", logx=True, title=f"{args.model}, alpha = {a:g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import CHECKS, VerifyOptions, run_checks

    names = args.only or None
    if names:
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    scale = -1.0 if args.corrupt_tolerances else args.tolerance_scale
    opts = VerifyOptions(alphas=tuple(args.alpha) if args.alpha else None, seed=args.seed,
                         mc_samples=args.mc_samples, tolerance_scale=scale)
    results = run_checks(names, opts)
    rows = [(r.check, r.case, r.measured, r.tolerance, "pass" if r.passed else "FAIL") for r in results]
    emit_table(args, "verify", ("check", "case", "measured", "tolerance", "status"), rows,
               {"seed": args.seed, "passed": all(r.passed for r in results)})
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_sample(args) -> int:
    from .configspace import Window, sample_poisson_many, write_configurations_csv

    lo, hi = [], []
    for spec in args.box:
        try:
            a, b = (float(v) for v in spec.split(":"))
        except ValueError as exc:
            raise UsageError(f"--box expects lo:hi, got {spec!r}") from exc
        lo.append(a)
        hi.append(b)
    window = Window(np.array(lo), np.array(hi), args.intensity)
    configs = sample_poisson_many(window, args.n_samples, args.seed)
    dest = _destination(args, "samples.csv")
    if dest is None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sample", "index"] + [f"x{i}" for i in range(window.dim)])
        for s, g in enumerate(configs):
            for i, p in enumerate(g.points):
                w.writerow([s, i] + [fmt(float(v)) for v in p])
        sys.stdout.write(buf.getvalue())
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        write_configurations_csv(dest, configs)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracflow", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("specfun", help="Mittag-Leffler and Wright function tables")
    p.add_argument("function", choices=("ml", "wright", "tail", "median", "moment"))
    p.add_argument("--alpha", type=_alpha, required=True)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--z", dest="grid", help="argument grid for ml")
    grid.add_argument("--t", dest="grid", help="argument grid for wright")
    grid.add_argument("--s", dest="grid", help="argument grid for tail")
    p.add_argument("--delta", default="0.5,1,2,3", help="moment orders")
    _add_output(p)
    p.set_defaults(func=cmd_specfun)

    p = sub.add_parser("subordinate", help="closed-form vs quadrature subordination of a model")
    _add_model(p)
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--t", default="0:5:0.5", help="time grid")
    p.add_argument("--n", type=int, default=1, help="correlation order")
    p.add_argument("--x", default="0:4:0.25", help="space grid (front model)")
    p.add_argument("--rel-tol", type=float, default=1e-10, help="quadrature relative tolerance")
    _add_output(p)
    p.set_defaults(func=cmd_subordinate)

    p = sub.add_parser("front", help="front position of the subordinated indicator density")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--t", default="1,10,100", help="time grid")
    _add_output(p)
    p.set_defaults(func=cmd_front)

    p = sub.add_parser("intermittency", help="classify a model's correlation ratios")
    _add_model(p, front=False)
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--partition", default="1+1", help="e.g. 1+1 or 3+2+1")
    p.add_argument("--all-partitions", type=int, metavar="N",
                   help="classify every partition of 2..N instead")
    p.add_argument("--t", default=DEFAULT_LOG_GRID, help="time grid (log-spaced, >= 3 decades)")
    p.add_argument("--moments", action="store_true", help="use moment ratios instead of correlations")
    p.add_argument("--divergence-log", type=float, default=Thresholds.divergence_log)
    p.add_argument("--flat-eps", type=float, default=Thresholds.flat_eps)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help=f"output file (default: stdout, or ${OUTDIR_ENV}/intermittency-<model>.json)")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_intermittency, format="json")

    p = sub.add_parser("verify", help="run the identity checks")
    p.add_argument("--only", nargs="+", metavar="CHECK")
    p.add_argument("--alpha", type=_alpha, nargs="+")
    p.add_argument("--seed", type=int, default=20240611)
    p.add_argument("--mc-samples", type=int, default=100_000)
    p.add_argument("--tolerance-scale", type=float, default=1.0)
    p.add_argument("--corrupt-tolerances", action="store_true", help=argparse.SUPPRESS)
    _add_output(p, plot=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="Poisson point-process samples on a box")
    p.add_argument("--box", nargs="+", default=["0:1"], help="lo:hi per dimension")
    p.add_argument("--intensity", type=float, default=1.0)
    p.add_argument("--n-samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        # fail before the computation, not after the table is printed
        if getattr(args, "plot", False) and _destination(args, "plot") is None:
            raise UsageError(f"--plot needs --out or ${OUTDIR_ENV} to place the figure")
        return args.func(args)
    except DivergenceError as exc:
        print(f"fracflow: divergent: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (UsageError, DomainError, EvaluationOverflowError) as exc:
        print(f"fracflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracflowError as exc:
        print(f"fracflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
