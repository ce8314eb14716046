from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from fractions import Fraction

import pytest

from sumcard.errors import WorldCapExceeded
from sumcard.oracle import (WorldSpace, enumerate_worlds, exact_moments, qerror_tail, sample_world,
                            unrank_subset, world_cardinalities)
from sumcard.query import cardinality, qerror
from sumcard.summary import count_worlds

from helpers import cases, random_summary


@pytest.mark.parametrize("n, k", [(5, 2), (6, 3), (4, 0), (4, 4), (7, 1)])
def test_unrank_subset_is_lexicographic(n, k):
    expected = list(itertools.combinations(range(n), k))
    assert [unrank_subset(n, k, r) for r in range(math.comb(n, k))] == expected


def test_world_at_agrees_with_iteration():
    rng = random.Random(2)
    for _ in range(10):
        s = random_summary(rng, max_worlds=300)
        space = WorldSpace(s)
        assert [space.world_at(r) for r in range(len(space))] == list(space)


def test_enumeration_range():
    rng = random.Random(6)
    s = random_summary(rng, max_worlds=300)
    whole = [frozenset(w) for w in enumerate_worlds(s)]
    assert [frozenset(w) for w in enumerate_worlds(s, start=1, stop=4)] == whole[1:4]


def test_world_cap(employees):
    _, s = employees
    with pytest.raises(WorldCapExceeded):
        list(enumerate_worlds(s, cap=100))


def test_fast_moments_match_naive_moments():
    for case in cases(12, 60):
        s, q = case.summary, case.query
        counts = [cardinality(q, g) for g in enumerate_worlds(s)]
        n = len(counts)
        e = Fraction(sum(counts), n)
        var = Fraction(sum(c * c for c in counts), n) - e * e
        assert exact_moments(q, s) == (e, var)
        assert sorted(world_cardinalities(q, s)) == sorted(counts)


def test_qerror_tail_counts_worlds(employees, employee_queries):
    _, s = employees
    q = employee_queries["q2"]
    counts = list(world_cardinalities(q, s))
    hits = sum(qerror(c, Fraction(7, 2)) >= 2 for c in counts)
    assert qerror_tail(q, s, Fraction(7, 2), 2) == Fraction(hits, count_worlds(s))


def test_sample_world_is_uniform():
    """Chi-square goodness of fit against the uniform distribution over worlds."""
    rng = random.Random(1)
    while True:
        s = random_summary(rng, max_worlds=40)
        if 6 <= count_worlds(s) <= 40:
            break
    k = count_worlds(s)
    index = {frozenset(w): i for i, w in enumerate(enumerate_worlds(s))}
    draws = 200 * k
    sampler = random.Random(99)
    observed = Counter(index[frozenset(sample_world(s, sampler))] for _ in range(draws))
    expected = draws / k
    chi2 = sum((observed.get(i, 0) - expected) ** 2 / expected for i in range(k))
    # 99.9% quantile of chi-square with at most 39 degrees of freedom is below 73.5
    assert chi2 < 73.5


def test_sample_world_deterministic_by_seed(employees):
    _, s = employees
    assert sample_world(s, 5).triples == sample_world(s, 5).triples
