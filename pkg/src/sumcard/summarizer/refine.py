"""MinHash summary refinement.

Starting from the trivial summary (every resource its own bucket), buckets
of the same type whose signature rows hash to the same LSH bin are merged
into the bin's smallest bucket.  When a round shrinks the summary too
little, similar types are merged so that more buckets become candidates.
"""

from __future__ import annotations

import random
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field

from ..rdf import RdfGraph
from ..summary import Summary, merge_many, summarize_graph
from .minhash import MinHashScheme, SignatureCache, vicinity_index
from .types import ResourceType, TypeGroup, merge_similar_types, self_mapped

DEFAULT_M = 20
DEFAULT_N = 2
DEFAULT_TARGET = 30_000
STAGNATION = 0.01


@dataclass
class RefineResult:
    summary: Summary
    achieved: bool
    history: list[int] = field(default_factory=list)
    merges: list[tuple[int, int, int]] = field(default_factory=list)  # (from, into, round)
    type_merges: int = 0

    @property
    def rounds(self) -> int:
        return len(self.history) - 1


def trivial_summary(g: RdfGraph) -> Summary:
    return summarize_graph(g, {r: r for r in g.resources()})


def initial_type_groups(g: RdfGraph, types: Mapping[int, ResourceType]) -> list[TypeGroup]:
    fixed = self_mapped(g)
    members: dict[ResourceType, list[int]] = {}
    for r in sorted(g.resources()):
        if r not in fixed:
            members.setdefault(types[r], []).append(r)
    return [TypeGroup.of(t, rs) for t, rs in members.items()]


def schedule_merges(s: Summary, groups: list[TypeGroup], scheme: MinHashScheme,
                    cache: SignatureCache) -> list[tuple[int, int]]:
    """One pass over all types and signature rows; removes scheduled buckets from their types."""
    vic = vicinity_index(s)
    queue: list[tuple[int, int]] = []
    for t in groups:
        sigs = {b: cache.signature(vic[b]) for b in t.buckets}
        for i in range(scheme.m):
            bins: dict[int, list[int]] = defaultdict(list)
            for b in sorted(t.buckets):
                bins[scheme.lsh(scheme.row(sigs[b], i))].append(b)
            for members in bins.values():
                if len(members) < 2:
                    continue
                into = members[0]
                for b in members[1:]:
                    queue.append((b, into))
                    t.buckets.discard(b)
    return queue


def minhash_refine(g: RdfGraph, types: Mapping[int, ResourceType], m: int = DEFAULT_M, n: int = DEFAULT_N,
                   target: int = DEFAULT_TARGET, seed: int = 0, max_rounds: int | None = None) -> RefineResult:
    """Shrink the trivial summary of ``g`` towards ``target`` triples.

    Returns the best summary reached; ``achieved`` tells whether the target
    was met.  The summary always represents ``g``.
    """
    if target < 1:
        raise ValueError("target must be at least 1")
    scheme = MinHashScheme.create(m, n, seed)
    cache = SignatureCache(scheme)
    rng = random.Random(seed)
    s = trivial_summary(g)
    groups = initial_type_groups(g, types)
    result = RefineResult(s, False, [len(s)])
    while True:
        if len(s) <= target:
            result.achieved = True
            break
        if max_rounds is not None and result.rounds >= max_rounds:
            break
        queue = schedule_merges(s, groups, scheme, cache)
        before = len(s)
        s = merge_many(s, queue)
        result.summary = s
        result.history.append(len(s))
        result.merges.extend((a, b, result.rounds) for a, b in queue)
        if before - len(s) <= (len(s) - target) * STAGNATION:
            merged = merge_similar_types(groups, rng)
            result.type_merges += merged
            if not merged:
                result.achieved = len(s) <= target
                break
    return result
