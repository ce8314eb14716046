"""Brute-force ground truth over the possible worlds of a summary.

A world picks, independently for every summary triple ``h``, a
``w(h)``-subset of the ``size(h)`` data triples that map onto ``h``.
Worlds are ranked in mixed radix: the last summary triple (in sorted
order) is the least significant digit and each digit is the
lexicographic rank of the chosen subset.
"""

from __future__ import annotations

import math
import random
from collections.abc import Iterator
from fractions import Fraction
from itertools import combinations, product

from .errors import InconsistentSummaryError, WorldCapExceeded
from .query import Query, evaluate, qerror
from .rdf import RdfGraph, Triple
from .summary import Summary, count_worlds, is_consistent

DEFAULT_WORLD_CAP = 1_000_000


def preimage(s: Summary, h: Triple) -> list[Triple]:
    """All data triples over ``dom(mu)`` that map onto ``h``, sorted."""
    return list(product(*(s.members(b) for b in h)))


def unrank_subset(n: int, k: int, rank: int) -> tuple[int, ...]:
    """The ``rank``-th k-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for slots in range(k, 0, -1):
        while True:
            block = math.comb(n - x - 1, slots - 1)
            if rank < block:
                break
            rank -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


class WorldSpace:
    """The mixed-radix space of worlds of a consistent summary."""

    def __init__(self, s: Summary):
        if not is_consistent(s):
            raise InconsistentSummaryError("an inconsistent summary represents no graph")
        self.summary = s
        self.keys = sorted(s.weights)
        self.candidates = [preimage(s, h) for h in self.keys]
        self.radices = [math.comb(len(c), s.weights[h]) for h, c in zip(self.keys, self.candidates)]
        self.size = math.prod(self.radices)

    def __len__(self) -> int:
        return self.size

    def choices(self, rank: int) -> list[tuple[int, ...]]:
        if not 0 <= rank < self.size:
            raise IndexError(rank)
        digits = []
        for radix in reversed(self.radices):
            rank, d = divmod(rank, radix)
            digits.append(d)
        digits.reverse()
        return [unrank_subset(len(c), self.summary.weights[h], d)
                for h, c, d in zip(self.keys, self.candidates, digits)]

    def world_at(self, rank: int) -> frozenset[Triple]:
        return frozenset(c[i] for c, picks in zip(self.candidates, self.choices(rank)) for i in picks)

    def __iter__(self) -> Iterator[frozenset[Triple]]:
        per_triple = [list(combinations(c, self.summary.weights[h])) for h, c in zip(self.keys, self.candidates)]
        for choice in product(*per_triple):
            yield frozenset(t for part in choice for t in part)


def _space(s: Summary, cap: int | None) -> WorldSpace | None:
    if not is_consistent(s):
        return None
    n = count_worlds(s)
    if cap is not None and n > cap:
        raise WorldCapExceeded(f"{n} worlds exceed the enumeration cap {cap}")
    return WorldSpace(s)


def enumerate_worlds(s: Summary, cap: int | None = DEFAULT_WORLD_CAP, start: int = 0,
                     stop: int | None = None) -> Iterator[RdfGraph]:
    """Stream every graph represented by ``s``, optionally a rank range of them.

    An inconsistent summary yields nothing.
    """
    space = _space(s, cap)
    if space is None:
        return
    stop = space.size if stop is None else min(stop, space.size)
    if start == 0 and stop == space.size:
        for world in space:
            yield RdfGraph(world, s.dictionary)
    else:
        for rank in range(start, stop):
            yield RdfGraph(space.world_at(rank), s.dictionary)


def world_at(s: Summary, rank: int) -> RdfGraph:
    return RdfGraph(WorldSpace(s).world_at(rank), s.dictionary)


def sample_world(s: Summary, seed: int | random.Random | None = None) -> RdfGraph:
    """A uniformly random represented graph."""
    if not is_consistent(s):
        raise InconsistentSummaryError("an inconsistent summary represents no graph")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    members = {b: s.members(b) for b in s.bucket_size}
    triples = []
    for h in sorted(s.weights):
        sizes = [len(members[b]) for b in h]
        for index in sorted(rng.sample(range(s.size(h)), s.weights[h])):
            rest, k2 = divmod(index, sizes[2])
            k0, k1 = divmod(rest, sizes[1])
            triples.append((members[h[0]][k0], members[h[1]][k1], members[h[2]][k2]))
    return RdfGraph(triples, s.dictionary)


def _answer_masks(q: Query, s: Summary, space: WorldSpace) -> tuple[list[int], list[list[int]]]:
    """Answers of q over the union of all worlds, each as a bitmask of required triples.

    Every world is a subset of that union, so its answers are exactly the
    union answers whose instantiated atoms it contains.
    """
    universe = [t for c in space.candidates for t in c]
    bit = {t: 1 << i for i, t in enumerate(universe)}
    union = RdfGraph(universe, s.dictionary)
    masks = []
    for pi in evaluate(q, union):
        m = 0
        for a in q.atoms:
            m |= bit[tuple(pi.get(t, t) for t in a)]
        masks.append(m)
    offsets = []
    pos = 0
    for c in space.candidates:
        offsets.append([1 << (pos + i) for i in range(len(c))])
        pos += len(c)
    return masks, offsets


def world_cardinalities(q: Query, s: Summary, cap: int | None = DEFAULT_WORLD_CAP) -> Iterator[int]:
    """|ans(q, G)| for every world G, in rank order."""
    space = _space(s, cap)
    if space is None:
        return
    masks, bits = _answer_masks(q, s, space)
    per_triple = [[sum(b[i] for i in picks) for picks in combinations(range(len(b)), s.weights[h])]
                  for h, b in zip(space.keys, bits)]
    for choice in product(*per_triple):
        world = sum(choice)
        yield sum(1 for m in masks if m & world == m)


def exact_moments(q: Query, s: Summary, cap: int | None = DEFAULT_WORLD_CAP) -> tuple[Fraction, Fraction]:
    """Expectation and variance of |ans(q, G)| over all worlds, as exact rationals."""
    if not is_consistent(s):
        raise InconsistentSummaryError("an inconsistent summary represents no graph")
    n = 0
    total = 0
    squares = 0
    for c in world_cardinalities(q, s, cap):
        n += 1
        total += c
        squares += c * c
    mean = Fraction(total, n)
    return mean, Fraction(squares, n) - mean * mean


def exact_expectation(q: Query, s: Summary, cap: int | None = DEFAULT_WORLD_CAP) -> Fraction:
    return exact_moments(q, s, cap)[0]


def exact_variance(q: Query, s: Summary, cap: int | None = DEFAULT_WORLD_CAP) -> Fraction:
    return exact_moments(q, s, cap)[1]


def qerror_tail(q: Query, s: Summary, estimate, eps, cap: int | None = DEFAULT_WORLD_CAP) -> Fraction:
    """Exact fraction of worlds on which the q-error of ``estimate`` is at least ``eps``."""
    n = hits = 0
    for c in world_cardinalities(q, s, cap):
        n += 1
        if qerror(c, estimate) >= eps:
            hits += 1
    return Fraction(hits, n)
