from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sumcard.errors import ParseError
from sumcard.query import Atom, Query, Var, cardinality, evaluate, parse_query, qerror, term_key
from sumcard.rdf import Dictionary, RdfGraph
from sumcard.synthetic import Q2


def test_parse_two_atom_query():
    d = Dictionary()
    q = parse_query(Q2, d)
    x, y, z = q.vars
    assert [v.name for v in q.vars] == ["x", "y", "z"]
    assert q.atoms == (Atom(x, d.id_of("<manages>"), y), Atom(y, d.id_of("<owns>"), z))


def test_duplicate_atoms_collapse():
    q = parse_query("?x <p> ?y .\n?x <p> ?y .\n", Dictionary())
    assert len(q) == 1


def test_empty_input():
    assert len(parse_query("", Dictionary())) == 0
    assert len(parse_query("# only a comment\n\n", Dictionary())) == 0


def test_several_patterns_per_line_and_literals():
    d = Dictionary()
    q = parse_query('?x <p> "v" . ?x <q> $y .', d)
    assert len(q) == 2
    assert d.is_literal(q.atoms[0].o)


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        parse_query("?x <p> ?y .\n?x <p> ?y\n", Dictionary())
    assert info.value.line == 2
    assert info.value.column == 10


def test_summary_answers_for_two_atom_query(employees, employee_queries):
    _, s = employees
    d = s.dictionary
    q2 = employee_queries["q2"]
    got = {tuple(d.lookup(tau[v]) for v in q2.vars) for tau in evaluate(q2.map_resources(s.mu), s.graph)}
    assert got == {("<b1>", "<b3>", "<b4>"), ("<b1>", "<b1>", "<b2>"), ("<b1>", "<b3>", "<b2>")}


def test_empty_query_has_one_empty_answer(employees):
    g, _ = employees
    assert list(evaluate(Query(), g)) == [{}]
    assert cardinality(Query(), RdfGraph()) == 1


def test_ground_atoms(employees):
    g, _ = employees
    d = g.dictionary
    present = Query((Atom(d.id_of("<e1>"), d.id_of("<manages>"), d.id_of("<e2>")),))
    absent = Query((Atom(d.id_of("<e2>"), d.id_of("<manages>"), d.id_of("<e1>")),))
    assert list(evaluate(present, g)) == [{}]
    assert list(evaluate(absent, g)) == []


def test_single_pattern_counts_predicate_edges(employees):
    g, _ = employees
    d = g.dictionary
    owns = d.id_of("<owns>")
    assert cardinality(Query((Atom(Var(0), owns, Var(1)),)), g) == g.count((None, owns, None))


def brute_force(q: Query, g: RdfGraph) -> list[dict]:
    """Generate-and-test over every assignment of resources to variables."""
    res = sorted(g.resources())
    out = []
    for values in itertools.product(res, repeat=len(q.vars)):
        pi = dict(zip(q.vars, values))
        if all(tuple(pi.get(t, t) for t in a) in g for a in q.atoms):
            out.append(pi)
    return out


def test_cardinality_of_two_atom_query_on_data(employees, employee_queries):
    g, _ = employees
    q2 = parse_query(Q2, g.dictionary)
    # brute force first, then the frozen value
    assert len(brute_force(q2, g)) == 4
    assert cardinality(q2, g) == 4


def _random_graph_and_query(rng: random.Random):
    d = Dictionary()
    res = [d.intern(f"<r{i}>") for i in range(rng.randint(2, 8))]
    preds = res[:3]
    triples = {(rng.choice(res), rng.choice(preds), rng.choice(res)) for _ in range(rng.randint(1, 20))}
    vs = [Var(i) for i in range(rng.randint(0, 3))]
    terms = res + vs
    atoms = [Atom(*(rng.choice(terms) for _ in range(3))) for _ in range(rng.randint(0, 3))]
    return RdfGraph(triples, d), Query(tuple(atoms))


def _key(pi: dict) -> tuple:
    return tuple(sorted((v.id, r) for v, r in pi.items()))


def test_evaluate_matches_generate_and_test():
    rng = random.Random(7)
    for _ in range(300):
        g, q = _random_graph_and_query(rng)
        got = [_key(pi) for pi in evaluate(q, g)]
        assert len(got) == len(set(got))
        assert sorted(got) == sorted(_key(pi) for pi in brute_force(q, g))


def test_answer_count_invariant_under_reordering_and_renaming():
    rng = random.Random(11)
    for _ in range(100):
        g, q = _random_graph_and_query(rng)
        atoms = list(q.atoms)
        rng.shuffle(atoms)
        renaming = {v: Var(v.id + 10) for v in q.vars}
        q2 = Query(tuple(atoms)).substitute(renaming)
        assert cardinality(q2, g) == cardinality(q, g)


def test_sharded_evaluation_is_a_partition_of_the_stream():
    rng = random.Random(5)
    for _ in range(50):
        g, q = _random_graph_and_query(rng)
        if not len(q):
            continue
        whole = sorted(_key(pi) for pi in evaluate(q, g))
        parts = []
        for i in range(3):
            parts.extend(_key(pi) for pi in evaluate(q, g, shard=(i, 3)))
        assert sorted(parts) == whole


@pytest.mark.parametrize("n, e, expected", [(100, 100, 1), (0, Fraction(3, 10), 1), (10, 1000, 100)])
def test_qerror_examples(n, e, expected):
    assert qerror(n, e) == expected


def test_qerror_float_input():
    assert qerror(0, 0.3) == 1.0
    assert isinstance(qerror(4, 3.5), float)


@given(st.integers(0, 10**6), st.fractions(min_value=0, max_value=10**6))
def test_qerror_at_least_one_and_symmetric(n, e):
    value = qerror(n, e)
    assert value >= 1
    assert value == qerror(e, n)


def test_term_order_resources_first():
    rng = random.Random(3)
    terms = [rng.randrange(50) for _ in range(50)] + [Var(rng.randrange(50)) for _ in range(50)]
    for _ in range(100):
        a, b = rng.choice(terms), rng.choice(terms)
        ka, kb = term_key(a), term_key(b)
        assert (ka < kb) + (kb < ka) + (ka == kb) == 1
        if ka == kb:
            assert a == b
        if not isinstance(a, Var) and isinstance(b, Var):
            assert ka < kb


def test_renamed_apart_is_disjoint():
    q = parse_query(Q2, Dictionary())
    r = q.renamed_apart()
    assert not set(q.vars) & set(r.vars)
    assert len(q.union(r)) == 2 * len(q)
