from __future__ import annotations

import csv
import io
from fractions import Fraction

import pytest

from sumcard.bench import BenchReport, BenchRow, fmt, fmt_estimate, run_bench
from sumcard.synthetic import Q1, Q2, Q3, Q4


@pytest.mark.parametrize("value, text", [
    (Fraction(7, 2), "3.5"), (Fraction(10, 3), "3.3333"), (2, "2"), (0.0, "0"), (Fraction(1, 100000), "0"),
])
def test_fmt_estimate(value, text):
    assert fmt_estimate(value) == text


def test_fmt():
    assert fmt(None) == ""
    assert fmt(Fraction(4, 1)) == "4"
    assert fmt(Fraction(1, 3)) == "0.3333333333"


def test_report_rows_and_aggregates(employees):
    g, s = employees
    queries = {"b": Q2, "a": Q1, "c": Q3, "d": Q4}
    report = run_bench(g, s, queries, with_variance=True, exact_mode=True)
    assert [r.query_id for r in report.rows] == ["a", "b", "c", "d"]
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    assert rows[1][1] == Q1.strip()
    assert rows[2][2:4] == ["4", "3.5"]
    agg = report.aggregates()
    assert agg["min"] <= agg["median"] <= agg["max"]
    assert rows[-4][0] == "#min"


def test_parallel_bench_is_identical(employees):
    g, s = employees
    queries = {f"q{i}": text for i, text in enumerate([Q1, Q2, Q3, Q4] * 3)}
    assert run_bench(g, s, queries, jobs=1).to_csv() == run_bench(g, s, queries, jobs=4).to_csv()


def test_error_rows_do_not_stop_the_bench(employees):
    g, s = employees
    report = run_bench(g, s, {"bad": "?x <p> ", "ok": Q2})
    assert report.rows[0].error == "ParseError"
    assert report.rows[1].error == ""


def test_plot_bins():
    rows = [BenchRow(str(i), "", qerror=q) for i, q in enumerate([1, 2, 2.5, 50, 999, 1000, 5000])]
    text = BenchReport(rows).plot_data()
    assert text == "bin,count\n<=2,2\n2-10,1\n10-100,1\n100-1000,2\n>1000,1\n"
