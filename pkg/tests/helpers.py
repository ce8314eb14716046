"""Random small summaries and queries shared by the property and acceptance tests."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from sumcard.query import Atom, Query, Var
from sumcard.rdf import Dictionary
from sumcard.summary import Summary, count_worlds


@dataclass
class Case:
    summary: Summary
    query: Query
    forced_unifiable: bool


def random_summary(rng: random.Random, max_triples: int = 6, max_size: int = 3,
                   max_worlds: int = 5000) -> Summary:
    """A consistent summary with at most ``max_worlds`` represented graphs."""
    while True:
        d = Dictionary()
        n_buckets = rng.randint(1, 5)
        sizes = [rng.randint(1, max_size) for _ in range(n_buckets)]
        n_triples = rng.randint(1, max_triples)
        triples = {tuple(rng.randrange(n_buckets) for _ in range(3)) for _ in range(n_triples)}
        used = sorted({b for t in triples for b in t})
        bucket_id = {b: d.intern(f"<B{b}>") for b in used}
        mu = {}
        for b in used:
            if sizes[b] == 1:
                mu[bucket_id[b]] = bucket_id[b]
            else:
                for i in range(sizes[b]):
                    mu[d.intern(f"<r{b}_{i}>")] = bucket_id[b]
        weights = {}
        for t in triples:
            size = math.prod(sizes[b] for b in t)
            weights[tuple(bucket_id[b] for b in t)] = rng.randint(1, size)
        s = Summary(weights, mu, d)
        if 1 <= count_worlds(s) <= max_worlds:
            return s


def random_query(rng: random.Random, s: Summary, max_atoms: int = 4, max_vars: int = 3,
                 force_unifiable: bool = False) -> Query:
    """Atoms mostly shaped after summary triples so that answers are common."""
    pool = [Var(i, "xyz"[i]) for i in range(rng.randint(0, max_vars))]
    by_bucket: dict[int, list[int]] = {}
    for r, b in s.mu.items():
        by_bucket.setdefault(b, []).append(r)
    for members in by_bucket.values():
        members.sort()
    triples = sorted(s.weights)
    all_res = sorted(s.mu)

    def term_for(bucket: int):
        if pool and rng.random() < 0.6:
            return rng.choice(pool)
        if rng.random() < 0.85:
            return rng.choice(by_bucket[bucket])
        return rng.choice(all_res)

    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        h = rng.choice(triples)
        atoms.append(Atom(*(term_for(b) for b in h)))
    if force_unifiable and len(atoms) < max_atoms:
        base = rng.choice(atoms)
        twin = list(base)
        i = rng.randrange(3)
        t = twin[i]
        if pool and rng.random() < 0.5:
            twin[i] = rng.choice(pool)
        elif not isinstance(t, Var):
            twin[i] = rng.choice(by_bucket[s.mu[t]])
        atoms.append(Atom(*twin))
    return Query(tuple(atoms))


def random_case(rng: random.Random) -> Case:
    s = random_summary(rng)
    forced = rng.random() < 0.35
    return Case(s, random_query(rng, s, force_unifiable=forced), forced)


def cases(seed: int, n: int) -> list[Case]:
    rng = random.Random(seed)
    return [random_case(rng) for _ in range(n)]
