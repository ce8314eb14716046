from __future__ import annotations

import io

import pytest

from sumcard.cli import main
from sumcard.summary import loads
from sumcard.synthetic import Q1, Q2, Q3, employees_ntriples


@pytest.fixture
def workspace(tmp_path):
    (tmp_path / "g.nt").write_text(employees_ntriples(), encoding="utf-8")
    qdir = tmp_path / "queries"
    qdir.mkdir()
    for name, text in {"q1": Q1, "q2": Q2, "q3": Q3}.items():
        (qdir / f"{name}.cq").write_text(text, encoding="utf-8")
    return tmp_path


def run(*argv) -> tuple[int, str]:
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def summarize(ws, *extra) -> tuple[int, str]:
    return run("summarize", "--input", ws / "g.nt", "--summary", ws / "s.sum", *extra)


def test_summarize_reports_sizes(workspace):
    code, text = summarize(workspace)
    assert code == 0
    assert text.strip() == "triples=15 summary_triples=9 reduction=1.7 refined=no"
    assert len(loads((workspace / "s.sum").read_text())) == 9


def test_summarize_with_refinement(workspace):
    code, text = summarize(workspace, "--target", 5, "--minhash", "4,2")
    assert code == 0
    assert "refined=" in text
    assert "refined=no" not in text


def test_estimate_output(workspace):
    summarize(workspace)
    code, text = run("estimate", "--summary", workspace / "s.sum", "--query", workspace / "queries" / "q2.cq")
    assert code == 0
    assert text.strip() == "E=3.5 path=unification-free answers_over_H=3"


def test_estimate_general_path_with_variance(workspace):
    summarize(workspace)
    code, text = run("estimate", "--summary", workspace / "s.sum", "--query", workspace / "queries" / "q3.cq",
                     "--variance", "--exact-mode")
    assert code == 0
    assert text.startswith("E=2.8333 path=general")
    assert "E_exact=17/6" in text
    assert "D2=" in text


def test_estimate_bound(workspace):
    summarize(workspace)
    code, text = run("estimate", "--summary", workspace / "s.sum", "--query", workspace / "queries" / "q2.cq",
                     "--bound", 10, "--bound", 100)
    assert code == 0
    assert "P(qerror>=10)<=" in text and "P(qerror>=100)<=" in text


@pytest.mark.parametrize("argv, code", [
    (["--bound", "1"], 2),
    (["--bound", "0.5"], 2),
    (["--answer-cap", "1"], 6),
    (["--atom-cap", "1"], 6),
])
def test_estimate_error_codes(workspace, argv, code):
    summarize(workspace)
    query = workspace / "queries" / "q3.cq"
    assert run("estimate", "--summary", workspace / "s.sum", "--query", query, *argv)[0] == code


def test_bound_inapplicable_exit_code(workspace):
    summarize(workspace)
    code, _ = run("estimate", "--summary", workspace / "s.sum", "--query", workspace / "queries" / "q1.cq",
                  "--bound", 10)
    assert code == 7


def test_exit_codes_for_bad_inputs(workspace):
    assert run("exact", "--input", workspace / "missing.nt", "--query", workspace / "queries" / "q1.cq")[0] == 1
    (workspace / "bad.nt").write_text("<a> <b> .\n", encoding="utf-8")
    assert run("exact", "--input", workspace / "bad.nt", "--query", workspace / "queries" / "q1.cq")[0] == 3
    summarize(workspace)
    (workspace / "other.cq").write_text("<nobody> <owns> ?x .\n", encoding="utf-8")
    assert run("estimate", "--summary", workspace / "s.sum", "--query", workspace / "other.cq")[0] == 5
    (workspace / "bad.sum").write_text("SUMRDF 1\nC 1 0 1\nB <a> 1\nT <a> <a> <a> 2\n", encoding="utf-8")
    assert run("estimate", "--summary", workspace / "bad.sum", "--query", workspace / "other.cq")[0] == 4
    assert run("frobnicate")[0] == 2
    assert summarize(workspace, "--target", 0)[0] == 2


def test_exact_counts(workspace):
    code, text = run("exact", "--input", workspace / "g.nt", "--query", workspace / "queries" / "q2.cq")
    assert (code, text) == (0, "4\n")


def test_bench_csv_and_plot(workspace):
    summarize(workspace)
    plot = workspace / "plot.csv"
    code, text = run("bench", "--input", workspace / "g.nt", "--summary", workspace / "s.sum",
                     "--queries-dir", workspace / "queries", "--variance", "--plot-data", plot)
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("query_id,query,exact,estimate,qerror,variance,bound_10")
    assert [l.split(",")[0] for l in lines if l.startswith("#")] == ["#min", "#median", "#avg", "#max"]
    assert plot.read_text().splitlines()[0] == "bin,count"
    assert sum(int(l.split(",")[1]) for l in plot.read_text().splitlines()[1:]) == 3


def test_config_file_is_overridden_by_flags(workspace):
    cfg = workspace / "run.conf"
    cfg.write_text("# settings\ntarget = 5\nminhash = 4,2\n", encoding="utf-8")
    code, text = summarize(workspace, "--config", cfg)
    assert code == 0 and "refined=no" not in text
    code, text = summarize(workspace, "--config", cfg, "--target", 100)
    assert "refined=no" in text


def test_validate_bound(workspace):
    summarize(workspace)
    code, text = run("validate-bound", "--summary", workspace / "s.sum", "--query",
                     workspace / "queries" / "q2.cq", "--bound", 2, "--samples", 300, "--seed", 4)
    assert code == 0
    assert "result=pass" in text


def test_summaries_are_deterministic(workspace):
    summarize(workspace, "--target", 5, "--seed", 3)
    first = (workspace / "s.sum").read_bytes()
    summarize(workspace, "--target", 5, "--seed", 3)
    assert (workspace / "s.sum").read_bytes() == first
