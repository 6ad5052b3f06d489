"""Command line front end.

Subcommands:

    analyze     one trace -> JSON report (metrics + summary counters)
    rank        several traces -> CSV ranking by lambda or Lambda
    movement    one trace -> CSV time series of bytes in flight
    export-dot  one trace -> Graphviz rendering of the dependence graph
    synth       generate a synthetic trace (or dump the mnemonic table)

Exit status: 0 success, 1 usage error, 2 analysis or I/O error.  Warnings
go to standard error; reports are deterministic byte-for-byte, so the
embedded config block is enough to reproduce any run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .builder import DEFAULT_VERTEX_CAP, CostModel, build, export_dot
from .cache import CacheConfig
from .errors import AnalysisError, InvalidSpec
from .isa import list_isa
from .metrics import ModelParams, compute_report, movement_series, rank_traces
from .oracle import simulate_greedy_memory
from .synth import PATTERNS, SynthSpec, generate
from .trace import open_trace, read_trace, read_trace_file

DEFAULT_CACHE = "32768:64:2"
_PROGRESS_EVERY = 5_000_000


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _add_cache_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cache", metavar="SIZE:LINE:ASSOC", default=None,
                   help=f"cache geometry (default {DEFAULT_CACHE})")
    g.add_argument("--no-cache", action="store_true",
                   help="count every access as a miss")


def _add_build_flags(p):
    p.add_argument("--alpha", type=int, default=200, metavar="CYCLES",
                   help="cost of a cache miss (default 200)")
    p.add_argument("--unit-cost", type=int, default=1, metavar="CYCLES",
                   help="cost of a non-miss vertex (default 1)")
    p.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP,
                   help="refuse to materialize graphs past this size")
    p.add_argument("--strict", action="store_true",
                   help="reject unsupported mnemonics instead of warning")


def _add_model_flags(p):
    p.add_argument("--m", type=int, default=4, metavar="N",
                   help="memory issue slots (default 4)")
    p.add_argument("--alpha0", type=int, default=50, metavar="CYCLES",
                   help="baseline per-access cost for Lambda (default 50)")
    p.add_argument("--clock", type=float, default=1e9, metavar="HZ",
                   help="clock for bandwidth conversion (default 1e9)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="memdag",
                     description="dependence-graph analysis of RISC-V traces")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one trace into a JSON report")
    p.add_argument("--trace", required=True, metavar="FILE")
    _add_cache_flags(p)
    _add_build_flags(p)
    _add_model_flags(p)
    p.add_argument("--tau", type=int, default=None, metavar="CYCLES",
                   help="also bin data movement every TAU cycles")
    p.add_argument("--materialize", action="store_true",
                   help="keep the full graph in memory")
    p.add_argument("--keep-false-deps", action="store_true",
                   help="keep anti and output dependences (needs --materialize)")
    p.add_argument("--oracle", action="store_true",
                   help="also greedy-schedule the graph (needs --materialize)")
    p.add_argument("--out", metavar="FILE", default=None)

    p = sub.add_parser("rank", help="rank traces by latency sensitivity")
    p.add_argument("--metric", required=True, choices=("lambda", "Lambda"))
    _add_cache_flags(p)
    _add_build_flags(p)
    _add_model_flags(p)
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="analyze up to N traces in parallel")
    p.add_argument("--out", metavar="FILE", default=None)
    p.add_argument("traces", nargs="+", metavar="TRACE")

    p = sub.add_parser("movement", help="emit the bytes-in-flight time series")
    p.add_argument("--trace", required=True, metavar="FILE")
    p.add_argument("--tau", required=True, type=int, metavar="CYCLES")
    _add_cache_flags(p)
    _add_build_flags(p)
    p.add_argument("--out", metavar="FILE", default=None)

    p = sub.add_parser("export-dot", help="render the dependence graph as DOT")
    p.add_argument("--trace", required=True, metavar="FILE")
    _add_cache_flags(p)
    _add_build_flags(p)
    p.add_argument("--keep-false-deps", action="store_true")
    p.add_argument("--out", metavar="FILE", default=None)

    p = sub.add_parser("synth", help="generate a synthetic trace")
    p.add_argument("--pattern", choices=PATTERNS, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--base-addr", type=lambda s: int(s, 0), default=0x10000000)
    p.add_argument("--stride", type=int, default=64)
    p.add_argument("--list-isa", action="store_true",
                   help="dump the supported mnemonic table and exit")
    p.add_argument("--out", metavar="FILE", default=None)

    return parser


def _cache_config(args) -> CacheConfig:
    try:
        if args.no_cache:
            return CacheConfig.disabled()
        return CacheConfig.parse(args.cache or DEFAULT_CACHE)
    except InvalidSpec as exc:
        raise _UsageError(f"--cache: {exc}") from None


def _cost_model(args) -> CostModel:
    try:
        return CostModel(miss_cost=args.alpha, unit_cost=args.unit_cost)
    except (InvalidSpec, ValueError) as exc:
        raise _UsageError(str(exc)) from None


def _model_params(args) -> ModelParams:
    try:
        return ModelParams(issue_slots=args.m, miss_cost=args.alpha,
                           baseline_cost=args.alpha0, clock_hz=args.clock)
    except (InvalidSpec, ValueError) as exc:
        raise _UsageError(str(exc)) from None


def _check_tau(tau):
    if tau is not None and tau < 1:
        raise _UsageError(f"--tau must be a positive cycle count, got {tau}")


def _read_with_progress(path):
    start = time.monotonic()
    count = 0
    with open_trace(path) as stream:
        for rec in read_trace(stream):
            count += 1
            if count % _PROGRESS_EVERY == 0:
                rate = count / max(time.monotonic() - start, 1e-9)
                print(f"{count:,} lines read ({rate:,.0f} lines/sec)",
                      file=sys.stderr)
            yield rec


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _frac(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator, "value": float(x)}
    return x


def _cmd_analyze(args) -> int:
    _check_tau(args.tau)
    if args.keep_false_deps and not args.materialize:
        raise _UsageError("--keep-false-deps requires --materialize")
    if args.oracle and not args.materialize:
        raise _UsageError("--oracle requires --materialize")
    cache_cfg = _cache_config(args)
    cost = _cost_model(args)
    params = _model_params(args)

    result = build(_read_with_progress(args.trace), cache_cfg, cost,
                   materialize=args.materialize,
                   keep_false_deps=args.keep_false_deps,
                   tau=args.tau, vertex_cap=args.vertex_cap,
                   strict=args.strict)
    summary = result.summary
    report = compute_report(summary, params)

    config = {
        "command": "analyze",
        "trace": args.trace,
        "cache": None if args.no_cache else (args.cache or DEFAULT_CACHE),
        "m": args.m,
        "alpha": args.alpha,
        "alpha0": args.alpha0,
        "unit_cost": args.unit_cost,
        "tau": args.tau,
        "clock_hz": args.clock,
        "materialize": bool(args.materialize),
        "keep_false_deps": bool(args.keep_false_deps),
        "oracle": bool(args.oracle),
        "vertex_cap": args.vertex_cap,
        "strict": bool(args.strict),
        "bandwidth_semantics": "theoretical_maximum",
    }
    summary_doc = {
        "T1": summary.t1,
        "Tinf": summary.tinf,
        "W": summary.memory_work,
        "D": summary.memory_depth,
        "C": summary.compute_cost,
        "layer_histogram": {str(k): summary.layer_counts[k]
                            for k in sorted(summary.layer_counts)},
        "bytes_total": summary.bytes_total,
        "cache": {"hits": summary.cache_hits, "misses": summary.cache_misses},
        "vertices": summary.vertex_count,
        "unknown_records": summary.unknown_records,
        "atomic_records": summary.atomic_records,
    }
    if summary.movement_bins is not None:
        summary_doc["movement"] = [[i * summary.tau, u]
                                   for i, u in enumerate(summary.movement_bins)]
    metrics_doc = {
        "lower": _frac(report.memory_bounds.lower),
        "upper_layered": _frac(report.memory_bounds.layered_upper),
        "upper_closed": _frac(report.memory_bounds.closed_upper),
        "total_lower": _frac(report.total_bounds.lower),
        "total_upper_layered": _frac(report.total_bounds.layered_upper),
        "total_upper_closed": _frac(report.total_bounds.closed_upper),
        "lambda": _frac(report.sensitivity),
        "Lambda": _frac(report.relative),
        "parallelism": _frac(report.parallelism),
        "bandwidth_gbs": report.bandwidth,
    }
    doc = {
        "tool_version": __version__,
        "config": config,
        "summary": summary_doc,
        "metrics": metrics_doc,
        "warnings": list(report.warnings),
    }
    if args.oracle:
        mem_run = simulate_greedy_memory(result.graph, args.m, args.alpha,
                                         unit_cost=0)
        full_run = simulate_greedy_memory(result.graph, args.m, args.alpha,
                                          unit_cost=args.unit_cost)
        doc["oracle"] = {
            "makespan_memory": mem_run.makespan,
            "makespan_total": full_run.makespan,
            "peak_memory_concurrency": full_run.peak_memory_concurrency,
        }

    for msg in report.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    if report.bandwidth is not None:
        print("note: bandwidth_gbs is the theoretical maximum "
              "(all bytes over the critical-path time)", file=sys.stderr)
    _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def _rank_worker(job):
    path, cache_cfg, cost, params = job
    summary = build(read_trace_file(path), cache_cfg, cost).summary
    return path, compute_report(summary, params)


def _cmd_rank(args) -> int:
    if len(args.traces) < 2:
        raise _UsageError("rank needs at least two TRACE paths")
    if args.jobs < 1:
        raise _UsageError(f"--jobs must be >= 1, got {args.jobs}")
    cache_cfg = _cache_config(args)
    cost = _cost_model(args)
    params = _model_params(args)

    jobs = [(path, cache_cfg, cost, params) for path in args.traces]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_rank_worker, jobs))
    else:
        reports = [_rank_worker(job) for job in jobs]

    ranked = rank_traces(reports, args.metric)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "metric", "rank", "warnings"])
    for row in ranked:
        writer.writerow([row.name, str(row.value), row.rank,
                         "; ".join(row.warnings)])
        for msg in row.warnings:
            print(f"warning: {row.name}: {msg}", file=sys.stderr)
    _write_text(args.out, buf.getvalue())
    return 0


def _cmd_movement(args) -> int:
    _check_tau(args.tau)
    cache_cfg = _cache_config(args)
    cost = _cost_model(args)
    result = build(_read_with_progress(args.trace), cache_cfg, cost,
                   tau=args.tau, vertex_cap=args.vertex_cap,
                   strict=args.strict)
    rows = movement_series(result.summary, args.tau)
    text = "time_cycles,bytes\n"
    text += "".join(f"{t},{u}\n" for t, u in rows)
    _write_text(args.out, text)
    return 0


def _cmd_export_dot(args) -> int:
    cache_cfg = _cache_config(args)
    cost = _cost_model(args)
    result = build(_read_with_progress(args.trace), cache_cfg, cost,
                   materialize=True, keep_false_deps=args.keep_false_deps,
                   vertex_cap=args.vertex_cap, strict=args.strict)
    text = export_dot(result.graph, vertex_cap=args.vertex_cap)
    _write_text(args.out, text)
    return 0


def _cmd_synth(args) -> int:
    if args.list_isa:
        _write_text(args.out, list_isa() + "\n")
        return 0
    if args.pattern is None or args.n is None:
        raise _UsageError("synth needs --pattern and --n (or --list-isa)")
    try:
        spec = SynthSpec(pattern=args.pattern, n=args.n, seed=args.seed,
                         base_addr=args.base_addr, stride=args.stride)
    except InvalidSpec as exc:
        raise _UsageError(str(exc)) from None
    _write_text(args.out, generate(spec))
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "rank": _cmd_rank,
    "movement": _cmd_movement,
    "export-dot": _cmd_export_dot,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (AnalysisError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
