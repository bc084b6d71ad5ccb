"""Command-line front end: ``polycons <subcommand> [options]``.

Exit status is 0 on success, 1 on usage or input errors and 2 when a
numerical step fails (non-centerable spectrum, divergent design, solver
failure, violated record invariants).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import experiments as ex
from .filters import FilterError, cap_filter, design, factor_steps, resolve_gain, robustness_caps
from .graph import (
    Graph,
    GraphError,
    edge_count_for_density,
    gen_erdos_renyi,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_star,
)
from .precondition import OptimizeOptions, optimize_fssc, optimize_p2
from .sim import (
    Failure,
    Schedule,
    SimulationError,
    initial_state,
    run_memory_slot,
    run_p2,
    run_standard,
)
from .spectral import SpectrumError, WeightMatrix, spectrum, weight_matrix

log = logging.getLogger("polycons")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
FLOAT_FMT = ".10g"

SWEEP_HELP = "CSV columns: " + ",".join(ex.SWEEP_COLUMNS) + (
    ". One row per (density, trial) followed by one median row per density "
    "(seed column = 'median'). Times are seconds per phase (0 under --no-timestamp)."
)
PARTITION_COLUMNS = [
    "row",
    "diameter",
    "seed",
    "edge_count",
    "density",
    "mu_fssc_sq",
    "mu2_at_fssc",
    "mu2_preconditioned",
    "lower_bound",
    "ratio",
    "bound_reached",
    "trials",
    "ratio_min",
    "ratio_q1",
    "ratio_median",
    "ratio_q3",
    "ratio_max",
]
TRACE_COLUMNS = ["step", "deviation", "mean_drift"]

_ACTION_ALIASES = {
    "minus": "minus",
    "-": "minus",
    "m": "minus",
    "plus": "plus",
    "+": "plus",
    "p": "plus",
    "skip": "skip",
    "s": "skip",
    "0": "skip",
    "standard": "standard",
    "std": "standard",
}


class UsageError(Exception):
    """Bad command-line input; maps to exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ output


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), FLOAT_FMT)
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return "" if v is None else str(v)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _timestamp_line(args) -> str:
    if getattr(args, "no_timestamp", False):
        return ""
    now = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return f"# polycons {__version__} generated {now}\n"


def render_csv(columns: Sequence[str], rows: Sequence[dict], args, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    buf.write(_timestamp_line(args))
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def render_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, default=_json_default) + "\n"


def _document_rows(doc: dict) -> tuple[list[str], list[dict]]:
    """Flatten a JSON document to ``key,value`` rows (lists expand to ``key[k]``)."""
    rows = []
    for k, v in doc.items():
        if isinstance(v, (list, tuple, np.ndarray)):
            rows.extend({"key": f"{k}[{i}]", "value": x} for i, x in enumerate(v))
        elif isinstance(v, dict):
            rows.extend({"key": f"{k}.{kk}", "value": vv} for kk, vv in v.items())
        else:
            rows.append({"key": k, "value": v})
    return ["key", "value"], rows


def _edge_rows(doc: dict) -> tuple[list[str], list[dict]]:
    weighted = any(len(e) == 3 for e in doc["edges"])
    cols = ["i", "j", "w"] if weighted else ["i", "j"]
    return cols, [dict(zip(cols, e)) for e in doc["edges"]]


def write_output(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def emit_document(args, doc: dict, comments: Sequence[str] = ()) -> None:
    if args.format == "json":
        write_output(args, render_json(doc))
        return
    cols, rows = _edge_rows(doc) if "edges" in doc else _document_rows(doc)
    write_output(args, render_csv(cols, rows, args, comments))


def emit_table(args, columns: Sequence[str], rows: Sequence[dict]) -> None:
    if args.format == "json":
        write_output(args, render_json([{c: r.get(c) for c in columns} for r in rows]))
    else:
        write_output(args, render_csv(columns, rows, args))


# ------------------------------------------------------------------ input


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def load_weighted(path: str) -> WeightMatrix:
    """Weighted-graph JSON, or the ``precondition`` output wrapping one under ``weights``."""
    data = _read_json(path)
    if isinstance(data, dict) and "weights" in data:
        data = data["weights"]
    try:
        if any(len(e) != 3 for e in data["edges"]):
            raise UsageError(f"{path}: weighted-graph edges must be [i, j, w]")
        return WeightMatrix.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed weighted-graph JSON ({exc})") from exc


def load_graph(path: str) -> Graph:
    data = _read_json(path)
    if isinstance(data, dict) and "weights" in data:
        data = data["weights"]
    try:
        return Graph.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed graph JSON ({exc})") from exc


def parse_a(text: str):
    if text in ("unit", "balanced"):
        return text
    try:
        a = float(text)
    except ValueError:
        raise UsageError(f"--a must be unit, balanced or a number, got {text!r}") from None
    if not a > 0.0:
        raise UsageError("--a must be positive")
    return a


def parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def parse_pattern(text: str) -> tuple[str, ...]:
    out = []
    for tok in text.replace(";", ",").split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        if tok not in _ACTION_ALIASES:
            raise UsageError(f"unknown step action {tok!r}")
        out.append(_ACTION_ALIASES[tok])
    if not out:
        raise UsageError("empty step pattern")
    return tuple(out)


def parse_edges(text: str) -> tuple[tuple[int, int], ...]:
    """``0-1,1-3`` (``:`` also accepted inside a pair)."""
    edges = []
    for tok in text.replace(";", ",").split(","):
        tok = tok.strip()
        if not tok:
            continue
        parts = tok.replace(":", "-").split("-")
        if len(parts) != 2:
            raise UsageError(f"bad edge {tok!r}; expected i-j")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise UsageError(f"bad edge {tok!r}; expected integers") from None
    if not edges:
        raise UsageError("failure spec lists no edges")
    return tuple(edges)


def parse_failure(tokens: Sequence[str], seed: int) -> Failure:
    """``edges=<list> mode=permanent|resonant|random:<p> [on=plus|minus] [seed=<int>]``."""
    fields = {}
    for tok in " ".join(tokens).split():
        if "=" not in tok:
            raise UsageError(f"bad --fail token {tok!r}; expected key=value")
        k, v = tok.split("=", 1)
        fields[k.strip()] = v.strip()
    unknown = set(fields) - {"edges", "mode", "on", "seed"}
    if unknown:
        raise UsageError(f"unknown --fail keys {sorted(unknown)}")
    if "edges" not in fields:
        raise UsageError("--fail needs edges=<list>")
    edges = parse_edges(fields["edges"])
    mode = fields.get("mode", "permanent")
    prob = 0.0
    if mode.startswith("random:"):
        try:
            prob = float(mode.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad random failure probability in {mode!r}") from None
        mode = "random"
    if mode not in ("permanent", "resonant", "random"):
        raise UsageError(f"unknown failure mode {mode!r}")
    on = fields.get("on", "plus")
    if on not in ("plus", "minus"):
        raise UsageError("on= must be plus or minus")
    try:
        fseed = int(fields.get("seed", seed))
        return Failure(mode, edges, prob=prob, seed=fseed, resonant_on=on)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _opts(args) -> OptimizeOptions:
    try:
        return OptimizeOptions(
            max_iters=args.max_iters,
            tol=args.tol,
            restarts=args.restarts,
            seed=args.seed,
            nonneg=args.nonneg,
            fssc_method=args.fssc_method,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ------------------------------------------------------------------ commands


def cmd_gen(args) -> None:
    fam = args.family
    need = {"er": ("n",), "complete": ("n",), "cycle": ("n",), "path": ("n",), "star": ("m",),
            "bipartite": ("l", "m")}[fam]
    missing = [f"--{k}" for k in need if getattr(args, k) is None]
    if missing:
        raise UsageError(f"family {fam} needs {', '.join(missing)}")
    if fam == "er":
        if (args.edges is None) == (args.density is None):
            raise UsageError("er needs exactly one of --edges or --density")
        m = args.edges if args.edges is not None else edge_count_for_density(args.n, args.density)
        g = gen_erdos_renyi(args.n, m, args.seed)
    elif fam == "complete":
        g = make_complete(args.n)
    elif fam == "cycle":
        g = make_cycle(args.n)
    elif fam == "path":
        g = make_path(args.n)
    elif fam == "star":
        g = make_star(args.m)
    else:
        g = make_complete_bipartite(args.l, args.m)
    if args.weight is not None:
        emit_document(args, weight_matrix(g, args.weight).to_json())
    else:
        emit_document(args, g.to_json())


def cmd_analyze(args) -> None:
    p = load_weighted(args.input)
    emit_document(args, spectrum(p).to_json())


def cmd_design(args) -> None:
    p = load_weighted(args.input)
    c = spectrum(p).centered_image()
    f = design(c)
    if args.cap != "none":
        caps = robustness_caps(c.mu)
        f = cap_filter(f, caps.z_permanent if args.cap == "permanent" else caps.z_resonant)
    a = resolve_gain(f.z, parse_a(args.a))
    doc = {"z": f.z, "a": a, "mu": f.mu, "sigma": f.sigma, "mu2": f.mu2, "capped": f.capped}
    emit_document(args, doc)


def cmd_precondition(args) -> None:
    g = load_graph(args.input)
    opts = _opts(args)
    if args.objective == "fssc":
        res = optimize_fssc(g, opts, with_bound=not args.no_bound)
    else:
        res = optimize_p2(g, opts, with_bound=not args.no_bound)
    log.info("%s: mu=%.6g mu2=%.6g", args.objective, res.mu, res.mu2)
    weights = res.weight_matrix().to_json()
    summary = res.summary()
    if args.format == "json":
        write_output(args, render_json({"weights": weights, "result": summary}))
    else:
        comments = [f"{k}={_fmt(v)}" for k, v in summary.items()]
        cols, rows = _edge_rows(weights)
        write_output(args, render_csv(cols, rows, args, comments))


def cmd_simulate(args) -> None:
    p = load_weighted(args.input)
    x0 = args.x0
    try:
        initial_state(x0, p.n)
    except SimulationError as exc:
        raise UsageError(str(exc)) from exc
    if args.scheme == "standard":
        if args.fail or args.skip_pattern:
            raise UsageError("--fail and --skip-pattern apply to the p2 scheme only")
        trace = run_standard(p, x0, args.steps)
    elif args.scheme == "memslot":
        if args.fail or args.skip_pattern:
            raise UsageError("--fail and --skip-pattern apply to the p2 scheme only")
        trace = run_memory_slot(p, args.w1, args.w2, x0, args.steps)
    else:
        f = design(spectrum(p).centered_image())
        if args.cap != "none":
            caps = robustness_caps(f.mu)
            f = cap_filter(f, caps.z_permanent if args.cap == "permanent" else caps.z_resonant)
        a_mode = parse_a(args.a)
        factor_steps(f, a_mode)  # validate early
        pattern = parse_pattern(args.skip_pattern) if args.skip_pattern else ("minus", "plus")
        failure = parse_failure(args.fail, args.seed) if args.fail else None
        if failure is not None:
            missing = [e for e in failure.edges if not p.support.has_edge(*e)]
            if missing:
                raise UsageError(f"failure edges {missing} are not in the graph")
        trace = run_p2(p, f, a_mode, Schedule(pattern, failure), x0, args.steps)
    log.info("verdict=%s rate=%.6g steps=%d", trace.verdict, trace.rate_estimate, trace.steps)
    rows = [{"step": k, "deviation": d, "mean_drift": m} for k, d, m in trace.rows()]
    if args.format == "json":
        write_output(
            args,
            render_json(
                {
                    "verdict": trace.verdict,
                    "rate_estimate": trace.rate_estimate,
                    "steps": trace.steps,
                    "trace": rows,
                }
            ),
        )
    else:
        write_output(args, render_csv(TRACE_COLUMNS, rows, args))


def _sweep_records(args, densities: Sequence[float]) -> list[ex.SweepRecord]:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    opts = _opts(args)
    try:
        return ex.sweep(args.n, densities, args.trials, args.seed, opts, args.jobs)
    except ValueError as exc:
        if isinstance(exc, (SpectrumError, FilterError, SimulationError)):
            raise
        raise UsageError(str(exc)) from exc


def _strip_times(args, records: list[ex.SweepRecord]) -> list[ex.SweepRecord]:
    """Zero the wall-time columns when reproducible output is requested."""
    if getattr(args, "no_timestamp", False):
        for r in records:
            r.t_fssc = r.t_p2 = r.t_bound = 0.0
    return records


def cmd_sweep(args) -> None:
    records = _strip_times(args, _sweep_records(args, parse_floats(args.densities)))
    rows = [asdict(r) for r in records] + [asdict(r) for r in ex.aggregate(records)]
    emit_table(args, ex.SWEEP_COLUMNS, rows)


def cmd_diameter_partition(args) -> None:
    records = _strip_times(args, _sweep_records(args, [args.density]))
    trials, summary = ex.diameter_partition(records)
    rows = [{**r, "row": "trial"} for r in sorted(trials, key=lambda r: (r["diameter"], r["seed"]))]
    rows += [{**asdict(s), "row": "summary"} for s in summary]
    emit_table(args, PARTITION_COLUMNS, rows)


def cmd_figures(args) -> None:
    outdir = Path(args.out if args.out not in (None, "-") else "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    which = list(ex.FIGURES) if args.which == "all" else [args.which]
    written = []
    for name in which:
        if name == "fig4":
            densities = parse_floats(args.densities)
            data = ex.fig4_data(args.seed, args.n, densities, args.trials, _opts(args), args.jobs)
            if args.no_timestamp:
                for row in data["fig4_sweep.csv"]:
                    row.update(t_fssc=0.0, t_p2=0.0, t_bound=0.0)
        elif name == "fig3":
            data = ex.fig3_data(args.seed, opts=_opts(args))
        elif name == "fig1":
            data = ex.fig1_data(args.seed)
        else:
            data = ex.fig5_data(args.steps)
        for fname, payload in data.items():
            path = outdir / fname
            if fname.endswith(".json"):
                path.write_text(render_json(payload))
            else:
                cols = list(payload[0]) if payload else []
                path.write_text(render_csv(cols, payload, args))
            written.append(str(path))
    if not args.quiet:
        sys.stdout.write("\n".join(written) + "\n")


# ------------------------------------------------------------------ parser


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _add_globals(p: argparse.ArgumentParser, sub: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=_seed, default=d(0), help="random seed (default 0)")
    g.add_argument("--out", default=d(None), help="output path ('-' or omitted: stdout)")
    g.add_argument("--format", choices=("json", "csv"), default=d(None),
                   help="output format (default depends on the command)")
    g.add_argument("--quiet", action="store_true", default=d(False), help="no progress messages")
    g.add_argument("--no-timestamp", action="store_true", default=d(False),
                   help="omit the timestamp comment line from CSV output and zero wall-time "
                   "columns, so reruns with the same seed are byte-identical")


def _add_opt_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=8, help="random restarts (default 8)")
    p.add_argument("--max-iters", type=int, default=5000, help="iterations per restart")
    p.add_argument("--tol", type=float, default=1e-9, help="stopping tolerance")
    p.add_argument("--nonneg", action="store_true", help="constrain weights to be nonnegative")
    p.add_argument("--fssc-method", choices=("sdp", "subgradient"), default="sdp")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polycons", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, sub=False)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, fmt, **kw):
        sp = subs.add_parser(name, **kw)
        _add_globals(sp, sub=True)
        sp.set_defaults(func=func, default_format=fmt)
        return sp

    sp = add("gen", cmd_gen, "json", help="generate a graph (graph JSON)")
    sp.add_argument("family", choices=("er", "complete", "star", "bipartite", "cycle", "path"))
    sp.add_argument("--n", type=int, help="node count")
    sp.add_argument("--m", type=int, help="leaves of a star / second part of a bipartite graph")
    sp.add_argument("--l", type=int, help="first part of a bipartite graph")
    sp.add_argument("--edges", type=int, help="edge count (er)")
    sp.add_argument("--density", type=float, help="edge density (er; rounded to an edge count)")
    sp.add_argument("--weight", type=float, help="emit a weighted graph with this uniform weight")

    sp = add("analyze", cmd_analyze, "json", help="spectrum of a weighted graph")
    sp.add_argument("input", help="weighted-graph JSON path or '-'")

    sp = add("design", cmd_design, "json", help="optimal quadratic filter")
    sp.add_argument("input", help="weighted-graph JSON path or '-'")
    sp.add_argument("--cap", choices=("permanent", "resonant", "none"), default="none")
    sp.add_argument("--a", default="unit", help="step gain: unit, balanced or a positive number")

    sp = add("precondition", cmd_precondition, "json",
             help="optimize edge weights",
             description="Optimize edge weights. JSON output is {\"weights\": <weighted graph>, "
             "\"result\": {mu, sigma, mu2, lower_bound, iters, restart_index}}; CSV output is "
             "an i,j,w table with the result in comment lines.")
    sp.add_argument("input", help="graph JSON path or '-'")
    sp.add_argument("--objective", choices=("fssc", "p2"), default="p2")
    sp.add_argument("--no-bound", action="store_true", help="skip the square-graph lower bound")
    _add_opt_flags(sp)

    sp = add("simulate", cmd_simulate, "csv", help="run consensus iterations",
             description="CSV columns: step,deviation,mean_drift. deviation is ||x - mean(x)||, "
             "mean_drift is |mean(x_k) - mean(x_0)|.")
    sp.add_argument("input", help="weighted-graph JSON path or '-'")
    sp.add_argument("--scheme", choices=("standard", "memslot", "p2"), default="p2")
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--a", default="unit", help="p2 step gain: unit, balanced or a number")
    sp.add_argument("--cap", choices=("permanent", "resonant", "none"), default="none")
    sp.add_argument("--skip-pattern", help="cyclic step actions, e.g. minus,plus,skip")
    sp.add_argument("--fail", nargs="+", metavar="KEY=VALUE",
                    help="edges=0-1,1-3 mode=permanent|resonant|random:<p> [on=plus|minus] [seed=<int>]")
    sp.add_argument("--x0", default="e1", help="e1 or random:<seed>")
    sp.add_argument("--w1", type=float, default=1.0, help="memslot Laplacian gain")
    sp.add_argument("--w2", type=float, default=0.0, help="memslot memory gain")

    sp = add("sweep", cmd_sweep, "csv", help="Erdos-Renyi density sweep", description=SWEEP_HELP)
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--densities", default="0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_opt_flags(sp)

    sp = add("diameter-partition", cmd_diameter_partition, "csv",
             help="acceleration ratio grouped by diameter",
             description="CSV columns: " + ",".join(PARTITION_COLUMNS) + ". 'trial' rows carry "
             "one graph each; 'summary' rows give the ratio quantiles and the number of graphs "
             "reaching the lower bound per diameter.")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--jobs", type=int, default=1)
    _add_opt_flags(sp)

    sp = add("figures", cmd_figures, "csv", help="write figure data files into --out (a directory)")
    sp.add_argument("which", choices=("fig1", "fig3", "fig4", "fig5", "all"))
    sp.add_argument("--n", type=int, default=20, help="fig4 node count")
    sp.add_argument("--densities", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    sp.add_argument("--trials", type=int, default=5, help="fig4 trials per density")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--steps", type=int, default=2000, help="fig5 failure-run length")
    _add_opt_flags(sp)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return int(exc.code or 0)
    if args.format is None:
        args.format = args.default_format
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        args.func(args)
    except UsageError as exc:
        print(f"polycons: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpectrumError, FilterError, SimulationError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"polycons: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GraphError as exc:
        print(f"polycons: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # solver failures surface here
        if type(exc).__name__ == "SolverError":
            print(f"polycons: numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        raise
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
