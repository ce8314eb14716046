"""Benchmark harness: exact counts versus summary estimates, as CSV."""

from __future__ import annotations

import csv
import io
import math
import statistics
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import SumcardError
from .estimator import DEFAULT_ATOM_CAP, estimate
from .query import cardinality, parse_query, qerror
from .rdf import RdfGraph
from .summary import Summary

BOUND_EPS = (10, 100, 1000)
COLUMNS = ["query_id", "query", "exact", "estimate", "qerror", "variance",
           "bound_10", "bound_100", "bound_1000", "path", "answers_over_H", "error"]
# q-error histogram bins: (lower, upper] with the first bin closed at 1
PLOT_BINS = [("<=2", 2.0), ("2-10", 10.0), ("10-100", 100.0), ("100-1000", 1000.0), (">1000", math.inf)]


def fmt(x) -> str:
    """Stable text form of a number: integers as is, everything else to 10 significant digits."""
    if x is None:
        return ""
    if isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1):
        return str(int(x))
    return format(float(x), ".10g")


def fmt_estimate(x) -> str:
    """Four decimals with trailing zeros removed (3.5, 3.3333, 2)."""
    text = f"{float(x):.4f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


@dataclass
class BenchRow:
    query_id: str
    query: str
    exact: int | None = None
    estimate: Fraction | float | None = None
    qerror: Fraction | float | None = None
    variance: Fraction | float | None = None
    bounds: dict = field(default_factory=dict)
    path: str = ""
    answers_over_H: int | None = None
    error: str = ""

    def cells(self) -> list[str]:
        return [self.query_id, self.query, fmt(self.exact), fmt(self.estimate), fmt(self.qerror),
                fmt(self.variance), *(fmt(self.bounds.get(e)) for e in BOUND_EPS), self.path,
                fmt(self.answers_over_H), self.error]


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def qerrors(self) -> list[float]:
        return [float(r.qerror) for r in self.rows if r.qerror is not None]

    def aggregates(self) -> dict[str, float]:
        qs = self.qerrors()
        if not qs:
            return {}
        return {"min": min(qs), "median": statistics.median(qs), "avg": statistics.fmean(qs), "max": max(qs)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow(r.cells())
        for name, value in self.aggregates().items():
            w.writerow([f"#{name}", "", "", "", fmt(value)] + [""] * (len(COLUMNS) - 5))
        return buf.getvalue()

    def plot_data(self) -> str:
        counts = dict.fromkeys((label for label, _ in PLOT_BINS), 0)
        for q in self.qerrors():
            for label, upper in PLOT_BINS:
                if q <= upper:
                    counts[label] += 1
                    break
        return "bin,count\n" + "".join(f"{label},{n}\n" for label, n in counts.items())


def run_query(qid: str, text: str, g: RdfGraph, s: Summary, *, exact_mode: bool = False,
              with_variance: bool = False, atom_cap: int = DEFAULT_ATOM_CAP,
              answer_cap: int | None = None) -> BenchRow:
    row = BenchRow(qid, text.strip())
    try:
        row.exact = cardinality(parse_query(text, g.dictionary.copy()), g)
        q = parse_query(text, s.dictionary.copy())
        est = estimate(q, s, with_variance=with_variance, bounds=BOUND_EPS if with_variance else (),
                       exact=exact_mode, atom_cap=atom_cap, answer_cap=answer_cap)
        row.estimate = est.expectation
        row.path = est.path
        row.answers_over_H = est.answers_over_H
        row.variance = est.variance
        row.bounds = dict(est.bounds)
        row.qerror = qerror(row.exact, est.expectation)
    except SumcardError as exc:
        row.error = type(exc).__name__
    return row


def run_bench(g: RdfGraph, s: Summary, queries: Mapping[str, str], jobs: int = 1, **options) -> BenchReport:
    """Evaluate every query; rows come back sorted by query id whatever the worker count."""
    items = sorted(queries.items())
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda kv: run_query(kv[0], kv[1], g, s, **options), items))
    else:
        rows = [run_query(k, v, g, s, **options) for k, v in items]
    rows.sort(key=lambda r: r.query_id)
    return BenchReport(rows)


def load_queries(directory: str | Path) -> dict[str, str]:
    """All ``*.cq`` files of a directory keyed by file stem."""
    return {p.stem: p.read_text(encoding="utf-8") for p in sorted(Path(directory).glob("*.cq"))}
