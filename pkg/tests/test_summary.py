from __future__ import annotations

import io
import random

import pytest

from sumcard.errors import SummaryFormatError
from sumcard.oracle import enumerate_worlds
from sumcard.rdf import Dictionary, RdfGraph
from sumcard.summary import (Summary, count_worlds, dumps, is_consistent, loads, merge_buckets, merge_many,
                             represents, same_up_to_bucket_names, save, summarize_graph)

from sumcard.synthetic import employees_summary

from helpers import random_summary


def test_employee_summary_shape(employees):
    g, s = employees
    s.validate()
    assert len(g) == 15
    assert len(s) == 9
    lex = s.dictionary.lookup
    sizes = {lex(b): n for b, n in s.bucket_size.items()}
    assert {k: sizes[k] for k in ("<b1>", "<b2>", "<b3>", "<b4>")} == {"<b1>": 2, "<b2>": 2, "<b3>": 2, "<b4>": 2}
    assert represents(s, g)


def test_employee_world_count(employees):
    _, s = employees
    # product of C(size(h), w(h)) over the summary triples, counted by hand
    assert count_worlds(s) == 2304
    assert sum(1 for _ in enumerate_worlds(s)) == 2304


def test_every_enumerated_world_is_represented():
    rng = random.Random(1)
    for _ in range(20):
        s = random_summary(rng, max_worlds=200)
        worlds = [frozenset(w) for w in enumerate_worlds(s)]
        assert len(worlds) == len(set(worlds)) == count_worlds(s)
        assert all(represents(s, w) for w in worlds)


def test_inconsistent_summary_has_no_worlds():
    d = Dictionary()
    a, p = d.intern("<a>"), d.intern("<p>")
    s = Summary({(a, p, a): 2}, {a: a, p: p}, d)
    assert not is_consistent(s)
    assert count_worlds(s) == 0
    assert list(enumerate_worlds(s)) == []


def test_merge_equals_resummarising(employees):
    g, s = employees
    d = s.dictionary
    b1, b3 = d.id_of("<b1>"), d.id_of("<b3>")
    merged = merge_buckets(s, b3, b1)
    composed = {r: (b1 if b == b3 else b) for r, b in s.mu.items()}
    assert merged == summarize_graph(g, composed)
    assert represents(merged, g)
    assert merged.bucket_size[b1] == 4
    assert b3 not in merged.buckets


def test_merge_many_follows_chains():
    rng = random.Random(9)
    d = Dictionary()
    res = [d.intern(f"<r{i}>") for i in range(8)]
    p = d.intern("<p>")
    g = RdfGraph({(rng.choice(res), p, rng.choice(res)) for _ in range(15)}, d)
    s = summarize_graph(g, {r: r for r in g.resources()})
    used = sorted(set(g.subjects()) | set(g.objects()))
    pairs = list(zip(used[1:], used[:-1]))  # a chain r_k -> r_{k-1} -> ... -> r_0
    merged = merge_many(s, pairs)
    target = used[0]
    composed = {r: (target if r in used else r) for r in g.resources()}
    assert merged == summarize_graph(g, composed)


def test_summary_roundtrip(employees):
    _, s = employees
    text = dumps(s)
    assert text.startswith("SUMRDF 1\nC ")
    again = loads(text)
    assert again == s
    assert dumps(again) == text


def test_roundtrip_random_summaries():
    rng = random.Random(4)
    for _ in range(30):
        s = random_summary(rng)
        buf = io.StringIO()
        save(s, buf)
        assert loads(buf.getvalue()) == s


@pytest.mark.parametrize("mutate", [
    lambda t: t.replace("SUMRDF 1", "SUMRDF 2"),
    lambda t: "\n".join(t.splitlines()[:-1]) + "\n",
    lambda t: t + "X junk\n",
    lambda t: t.replace(" 1\n", " 0\n", 1) if "\nT " in t else t + "T",
    lambda t: t.replace("<b1> 2", "<b1> 4"),
    lambda t: "",
])
def test_corrupted_files_are_rejected(employees, mutate):
    _, s = employees
    with pytest.raises(SummaryFormatError):
        loads(mutate(dumps(s)))


def test_same_up_to_bucket_names(employees):
    g, s = employees
    d = s.dictionary.copy()
    rename = {}
    for b in s.buckets:
        if s.bucket_size[b] > 1 or s.mu.get(b) != b:
            rename[b] = d.intern(f"<other{b}>")
    mu2 = {r: rename.get(b, b) for r, b in s.mu.items()}
    s2 = summarize_graph(RdfGraph(g.triples, d), mu2)
    assert s2 != s
    assert same_up_to_bucket_names(s, s2)


def test_represents_rejects_wrong_weights(employees):
    g, s = employees
    smaller = RdfGraph(list(g)[1:], g.dictionary)
    assert not represents(s, smaller)


def test_untyped_employee_summary_has_five_triples():
    g, s = employees_summary(with_types=False)
    assert len(g) == 7
    assert sorted(s.weights.values()) == [1, 1, 1, 2, 2]
    assert sorted(s.size(h) for h in s.weights) == [4, 4, 4, 4, 4]
    # type triples all have weight equal to their size, so they do not change the count
    assert count_worlds(s) == 4 * 4 * 4 * 6 * 6 == 2304
