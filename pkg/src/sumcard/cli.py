"""Command-line interface: ``sumcard summarize | estimate | exact | bench | validate-bound``.

Exit codes:

    0  success
    1  I/O or other failure
    2  usage error
    3  parse error (N-Triples, query, summary or partition file)
    4  inconsistent summary
    5  query resource outside dom(mu)
    6  work cap exceeded (atoms, answers, worlds)
    7  q-error bound inapplicable (expectation below 1)
    8  validate-bound failed
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from pathlib import Path

from . import bench as bench_mod
from .errors import (BoundInapplicable, CapExceededError, InconsistentSummaryError, MappingError, ParseError,
                     SumcardError)
from .estimator import DEFAULT_ATOM_CAP, bound_from_moments, expectation, variance_of
from .oracle import sample_world
from .query import cardinality, parse_query, qerror
from .rdf import parse_ntriples
from .summarizer import (DEFAULT_M, DEFAULT_N, DEFAULT_TARGET, FilePartitioner, HistogramSpec, LabelPropagation,
                         compute_types, minhash_refine, typed_summary)
from .summary import load, save

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INCONSISTENT = 4
EXIT_MAPPING = 5
EXIT_CAP = 6
EXIT_BOUND = 7
EXIT_VALIDATE = 8

DEFAULTS = {
    "target": DEFAULT_TARGET,
    "minhash": f"{DEFAULT_M},{DEFAULT_N}",
    "seed": 0,
    "histogram_buckets": 1,
    "histogram_auto": False,
    "partitioner": "single",
    "partition_file": None,
    "atom_cap": DEFAULT_ATOM_CAP,
    "answer_cap": None,
    "jobs": 1,
    "samples": 10_000,
}
BOOL_KEYS = {"histogram_auto", "variance", "exact_mode"}
INT_KEYS = {"target", "seed", "histogram_buckets", "atom_cap", "answer_cap", "jobs", "samples"}


class UsageError(Exception):
    pass


def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key = value", lineno)
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            value = value.strip('"')
            if key in BOOL_KEYS:
                out[key] = value.lower() in ("1", "true", "yes", "on")
            elif key in INT_KEYS:
                try:
                    out[key] = int(value)
                except ValueError:
                    raise ParseError(f"{key} must be an integer", lineno) from None
            else:
                out[key] = value
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value configuration file; flags override it")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumcard", description="Cardinality estimation over RDF graph summaries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="build a summary from an N-Triples file")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--summary", "--output", dest="summary", required=True, help="summary file to write")
    p.add_argument("--target", type=int)
    p.add_argument("--minhash", help="m,n")
    p.add_argument("--histogram-buckets", type=int, dest="histogram_buckets")
    p.add_argument("--histogram-auto", action="store_const", const=True, dest="histogram_auto")
    p.add_argument("--partitioner", choices=["single", "label-propagation", "file"])
    p.add_argument("--partition-file", dest="partition_file")

    p = sub.add_parser("estimate", help="estimate the cardinality of a query")
    _common(p)
    _estimate_flags(p)
    p.add_argument("--variance", action="store_true")

    p = sub.add_parser("exact", help="count the answers of a query on a graph")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--query", required=True)

    p = sub.add_parser("bench", help="compare estimates with exact counts for a directory of queries")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--summary", required=True)
    p.add_argument("--queries-dir", required=True, dest="queries_dir")
    p.add_argument("--output", help="CSV file (default: stdout)")
    p.add_argument("--variance", action="store_true", help="also compute variance and bounds")
    p.add_argument("--exact-mode", action="store_true", dest="exact_mode")
    p.add_argument("--answer-cap", type=int, dest="answer_cap")
    p.add_argument("--atom-cap", type=int, dest="atom_cap")
    p.add_argument("--plot-data", dest="plot_data", help="write q-error histogram bins to this file")
    p.add_argument("--jobs", type=int)

    p = sub.add_parser("validate-bound", help="Monte-Carlo check of the q-error bound")
    _common(p)
    _estimate_flags(p)
    p.add_argument("--samples", type=int)
    return parser


def _estimate_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--summary", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--bound", type=float, action="append", help="eps > 1; repeatable")
    p.add_argument("--exact-mode", action="store_true", dest="exact_mode")
    p.add_argument("--answer-cap", type=int, dest="answer_cap")
    p.add_argument("--atom-cap", type=int, dest="atom_cap")


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, default))
    for key in BOOL_KEYS:
        if hasattr(args, key) and not getattr(args, key) and cfg.get(key):
            setattr(args, key, True)
    return args


def _minhash(text: str) -> tuple[int, int]:
    try:
        m, n = (int(x) for x in str(text).split(","))
    except ValueError:
        raise UsageError("--minhash expects m,n") from None
    if m < 1 or n < 1:
        raise UsageError("--minhash values must be positive")
    return m, n


def _read_query(path: str, dictionary):
    return parse_query(Path(path).read_text(encoding="utf-8"), dictionary)


def _check_eps(values) -> list[float]:
    eps = list(values or [])
    for e in eps:
        if not e > 1:
            raise UsageError("--bound requires eps > 1")
    return eps


# -- commands ----------------------------------------------------------------

def cmd_summarize(args, out) -> int:
    if args.target < 1:
        raise UsageError("--target must be at least 1")
    m, n = _minhash(args.minhash)
    g = parse_ntriples(args.input)
    spec = HistogramSpec(default=args.histogram_buckets, auto=bool(args.histogram_auto))
    if args.partitioner == "label-propagation":
        partitioner = LabelPropagation(args.seed)
    elif args.partitioner == "file":
        if not args.partition_file:
            raise UsageError("--partitioner file needs --partition-file")
        partitioner = FilePartitioner(args.partition_file)
    else:
        partitioner = None
    types = compute_types(g, spec, partitioner)
    s = typed_summary(g, types)
    refined = "no"
    if len(s) > args.target:
        result = minhash_refine(g, types, m, n, args.target, args.seed)
        refined = "yes" if result.achieved else "target-not-reached"
        if len(result.summary) < len(s):
            s = result.summary
    with open(args.summary, "w", encoding="utf-8") as fh:
        save(s, fh)
    reduction = len(g) / len(s) if len(s) else float("inf")
    out.write(f"triples={len(g)} summary_triples={len(s)} reduction={reduction:.1f} refined={refined}\n")
    return EXIT_OK


def cmd_estimate(args, out) -> int:
    eps = _check_eps(args.bound)
    with open(args.summary, encoding="utf-8") as fh:
        s = load(fh)
    q = _read_query(args.query, s.dictionary)
    exact = bool(args.exact_mode)
    est = expectation(q, s, exact, args.atom_cap, args.answer_cap)
    parts = [f"E={bench_mod.fmt_estimate(est.expectation)}", f"path={est.path}",
             f"answers_over_H={est.answers_over_H}"]
    if exact:
        parts.append(f"E_exact={est.expectation}")
    if args.variance or eps:
        var, _ = variance_of(q, s, est.expectation, exact, args.atom_cap, args.answer_cap)
        parts.append(f"D2={bench_mod.fmt(var)}")
        parts.append(f"D={bench_mod.fmt(math.sqrt(var))}")
        for e in eps:
            if est.expectation < 1:
                out.write(" ".join(parts) + "\n")
                raise BoundInapplicable("the q-error bound needs an expectation of at least 1")
            b = bound_from_moments(est.expectation, var, e)
            parts.append(f"P(qerror>={bench_mod.fmt(e)})<={bench_mod.fmt(b)}")
    out.write(" ".join(parts) + "\n")
    return EXIT_OK


def cmd_exact(args, out) -> int:
    g = parse_ntriples(args.input)
    q = _read_query(args.query, g.dictionary)
    out.write(f"{cardinality(q, g)}\n")
    return EXIT_OK


def cmd_bench(args, out) -> int:
    g = parse_ntriples(args.input)
    with open(args.summary, encoding="utf-8") as fh:
        s = load(fh)
    queries = bench_mod.load_queries(args.queries_dir)
    report = bench_mod.run_bench(g, s, queries, jobs=args.jobs, exact_mode=bool(args.exact_mode),
                                 with_variance=bool(args.variance), atom_cap=args.atom_cap,
                                 answer_cap=args.answer_cap)
    text = report.to_csv()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    if args.plot_data:
        Path(args.plot_data).write_text(report.plot_data(), encoding="utf-8")
    return EXIT_OK


def cmd_validate_bound(args, out) -> int:
    eps = _check_eps(args.bound)
    if len(eps) != 1:
        raise UsageError("validate-bound needs exactly one --bound eps")
    e = eps[0]
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    with open(args.summary, encoding="utf-8") as fh:
        s = load(fh)
    q = _read_query(args.query, s.dictionary)
    exact = bool(args.exact_mode)
    est = expectation(q, s, exact, args.atom_cap, args.answer_cap).expectation
    if est < 1:
        raise BoundInapplicable("the q-error bound needs an expectation of at least 1")
    var, _ = variance_of(q, s, est, exact, args.atom_cap, args.answer_cap)
    bound = float(bound_from_moments(est, var, e))
    verdict = validate_bound(q, s, est, e, bound, args.samples, args.seed)
    out.write(f"E={bench_mod.fmt_estimate(est)} bound={bench_mod.fmt(bound)} "
              f"empirical={bench_mod.fmt(verdict.fraction)} slack={bench_mod.fmt(verdict.allowed)} "
              f"samples={args.samples} result={'pass' if verdict.passed else 'fail'}\n")
    return EXIT_OK if verdict.passed else EXIT_VALIDATE


class BoundCheck:
    def __init__(self, hits: int, samples: int, bound: float):
        self.hits = hits
        self.samples = samples
        self.bound = bound
        self.fraction = hits / samples
        self.allowed = bound + 3 * math.sqrt(bound * (1 - bound) / samples)
        self.passed = self.fraction <= self.allowed


def validate_bound(q, s, estimate_value, eps, bound, samples: int, seed: int = 0) -> BoundCheck:
    """Sample worlds and count how often the q-error of the estimate reaches ``eps``."""
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        world = sample_world(s, rng)
        if qerror(cardinality(q, world), estimate_value) >= eps:
            hits += 1
    return BoundCheck(hits, samples, bound)


COMMANDS = {
    "summarize": cmd_summarize,
    "estimate": cmd_estimate,
    "exact": cmd_exact,
    "bench": cmd_bench,
    "validate-bound": cmd_validate_bound,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        resolve(args)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"sumcard: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"sumcard: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistentSummaryError as exc:
        print(f"sumcard: inconsistent summary: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except MappingError as exc:
        print(f"sumcard: {exc}", file=sys.stderr)
        return EXIT_MAPPING
    except CapExceededError as exc:
        print(f"sumcard: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except BoundInapplicable as exc:
        print(f"sumcard: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (OSError, SumcardError) as exc:
        print(f"sumcard: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
