"""Resource types and the typed summary.

The type of a resource combines its class set, per-predicate outgoing and
incoming frequency histogram bucket ids, and a graph partition id.
Resources used as predicates or as classes map to themselves.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..rdf import RDF_TYPE, RdfGraph
from ..summary import Summary, summarize_graph

OUT = "out"
IN = "in"


@dataclass(frozen=True)
class ResourceType:
    class_type: frozenset[int]
    outgoing: tuple[int, ...]
    incoming: tuple[int, ...]
    partition: int = 0


@dataclass
class HistogramSpec:
    """Histogram bucket counts per (predicate id, direction).

    ``auto`` chooses each count with the Freedman-Diaconis rule.  With a
    count of 1 every resource lands in histogram bucket 1; with a count of
    at least 2, resources without any edge for the predicate get the
    reserved id 0 and the rest are split equi-depth.
    """

    default: int = 1
    counts: dict[tuple[int, str], int] = field(default_factory=dict)
    auto: bool = False

    def __post_init__(self) -> None:
        if self.default < 1 or any(j < 1 for j in self.counts.values()):
            raise ValueError("histogram bucket counts must be at least 1")

    def buckets_for(self, predicate: int, direction: str, frequencies: list[int]) -> int:
        if (predicate, direction) in self.counts:
            return self.counts[(predicate, direction)]
        if self.auto:
            return freedman_diaconis(frequencies)
        return self.default


def freedman_diaconis(values: Iterable[int]) -> int:
    """Number of histogram bins suggested by the Freedman-Diaconis rule (at least 1)."""
    data = np.asarray(list(values), dtype=float)
    if data.size < 2:
        return 1
    q75, q25 = np.percentile(data, [75, 25])
    iqr = q75 - q25
    span = data.max() - data.min()
    if iqr <= 0 or span <= 0:
        return 1
    width = 2 * iqr / data.size ** (1 / 3)
    return max(1, min(int(math.ceil(span / width)), data.size))


def equi_depth(counts: Mapping[int, int], j: int) -> dict[int, int]:
    """Sort ``(count, resource)`` pairs and slice them into chunks of ceil(N/j), ids from 1."""
    ordered = sorted(counts, key=lambda r: (counts[r], r))
    if not ordered:
        return {}
    width = math.ceil(len(ordered) / j)
    return {r: i // width + 1 for i, r in enumerate(ordered)}


def self_mapped(g: RdfGraph) -> set[int]:
    """Resources that occur as a predicate or as the object of an rdf:type triple."""
    rdf_type = g.dictionary.id_of(RDF_TYPE)
    out = set(g.predicates())
    if rdf_type is not None:
        out.update(o for _, _, o in g.match((None, rdf_type, None)))
    return out


def typed_resources(g: RdfGraph) -> list[int]:
    fixed = self_mapped(g)
    return sorted(r for r in g.resources() if r not in fixed)


def class_types(g: RdfGraph) -> dict[int, frozenset[int]]:
    d = g.dictionary
    rdf_type = d.id_of(RDF_TYPE)
    classes: dict[int, set[int]] = defaultdict(set)
    if rdf_type is not None:
        for s, _, o in g.match((None, rdf_type, None)):
            classes[s].add(o)
    out = {}
    for r in g.resources():
        dt = d.datatype(r)
        out[r] = frozenset({dt}) if dt is not None else frozenset(classes.get(r, ()))
    return out


def histogram_ids(g: RdfGraph, spec: HistogramSpec, resources: list[int],
                  predicates: list[int]) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Per-resource outgoing and incoming histogram id vectors, in predicate order."""
    k = len(predicates)
    out_vec = {r: [0] * k for r in resources}
    in_vec = {r: [0] * k for r in resources}
    for i, p in enumerate(predicates):
        for direction, vec in ((OUT, out_vec), (IN, in_vec)):
            counts = dict.fromkeys(resources, 0)
            for s, _, o in g.match((None, p, None)):
                r = s if direction == OUT else o
                if r in counts:
                    counts[r] += 1
            j = spec.buckets_for(p, direction, list(counts.values()))
            if j == 1:
                ids = dict.fromkeys(resources, 1)
            else:
                ids = equi_depth({r: c for r, c in counts.items() if c > 0}, j)
            for r in resources:
                vec[r][i] = ids.get(r, 0)
    return out_vec, in_vec


Partitioner = Callable[[RdfGraph, list[int]], Mapping[int, int]]


def compute_types(g: RdfGraph, spec: HistogramSpec | None = None,
                  partitioner: Partitioner | None = None) -> dict[int, ResourceType]:
    """Type of every resource of ``g``.

    Predicates are ordered by dictionary id; rdf:type is not among them.
    Self-mapped resources get a type too, but the summaries ignore it.
    """
    spec = spec if spec is not None else HistogramSpec()
    rdf_type = g.dictionary.id_of(RDF_TYPE)
    predicates = sorted(p for p in g.predicates() if p != rdf_type)
    resources = sorted(g.resources())
    out_vec, in_vec = histogram_ids(g, spec, resources, predicates)
    classes = class_types(g)
    parts = partitioner(g, typed_resources(g)) if partitioner is not None else {}
    return {r: ResourceType(classes[r], tuple(out_vec[r]), tuple(in_vec[r]), parts.get(r, 0))
            for r in resources}


def bucket_lexical(n: int) -> str:
    return f"<urn:sumcard:bucket:{n}>"


def typed_summary(g: RdfGraph, types: Mapping[int, ResourceType]) -> Summary:
    """One bucket per distinct type; predicates and classes map to themselves."""
    fixed = self_mapped(g)
    d = g.dictionary.copy()
    first_member: dict[ResourceType, int] = {}
    for r in sorted(g.resources()):
        if r not in fixed:
            first_member.setdefault(types[r], r)
    bucket_of: dict[ResourceType, int] = {}
    n = 0
    for t in sorted(first_member, key=first_member.__getitem__):
        n += 1
        while bucket_lexical(n) in d:
            n += 1
        bucket_of[t] = d.intern(bucket_lexical(n))
    mu = {r: r if r in fixed else bucket_of[types[r]] for r in g.resources()}
    return summarize_graph(g, mu, d)


# -- type similarity and merging ---------------------------------------------

@dataclass
class TypeGroup:
    """A (possibly merged) type: averaged vectors and the buckets it owns."""

    class_type: frozenset[int]
    partition: int
    outgoing: tuple[Fraction, ...]
    incoming: tuple[Fraction, ...]
    buckets: set[int] = field(default_factory=set)

    @classmethod
    def of(cls, t: ResourceType, buckets: Iterable[int] = ()) -> TypeGroup:
        return cls(t.class_type, t.partition, tuple(Fraction(x) for x in t.outgoing),
                   tuple(Fraction(x) for x in t.incoming), set(buckets))


def _ratio_mean(a, b) -> Fraction:
    if not a:
        return Fraction(1)
    total = Fraction(0)
    for x, y in zip(a, b):
        hi = max(x, y)
        total += Fraction(1) if hi == 0 else Fraction(min(x, y)) / hi
    return total / len(a)


def type_similarity(t1, t2) -> Fraction:
    """Average of the generalised Jaccard indexes of the outgoing and incoming vectors.

    Each sum of min/max ratios is divided by the number of predicates so
    the result lies in [0, 1]; a 0/0 ratio counts as 1.  Types whose class
    or partition types differ have similarity 0.
    """
    if t1.class_type != t2.class_type or t1.partition != t2.partition:
        return Fraction(0)
    return (_ratio_mean(t1.outgoing, t2.outgoing) + _ratio_mean(t1.incoming, t2.incoming)) / 2


def mergeable(t1, t2) -> bool:
    return t1.class_type == t2.class_type and t1.partition == t2.partition


def merge_types(t1, t2) -> TypeGroup:
    if not mergeable(t1, t2):
        raise ValueError("only types with equal class and partition types can merge")
    return TypeGroup(
        t1.class_type, t1.partition,
        tuple((Fraction(a) + b) / 2 for a, b in zip(t1.outgoing, t2.outgoing)),
        tuple((Fraction(a) + b) / 2 for a, b in zip(t1.incoming, t2.incoming)),
        set(getattr(t1, "buckets", ())) | set(getattr(t2, "buckets", ())),
    )


SAMPLE_PAIRS = 500
MIN_SIMILARITY = Fraction(1, 2)
REDUCTION = Fraction(1, 5)


def _float_ratio_mean(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    if not a:
        return 1.0
    total = 0.0
    for x, y in zip(a, b):
        hi = x if x > y else y
        total += 1.0 if hi == 0 else (y if x > y else x) / hi
    return total / len(a)


def _float_vectors(t) -> tuple[tuple[float, ...], tuple[float, ...]]:
    return tuple(map(float, t.outgoing)), tuple(map(float, t.incoming))


def merge_similar_types(types: list[TypeGroup], rng: random.Random, sample: int = SAMPLE_PAIRS,
                        threshold: Fraction = MIN_SIMILARITY, reduction: Fraction = REDUCTION) -> int:
    """Merge similar types in place until their number drops by ``reduction``.

    Each round draws ``sample`` random same-group pairs (all pairs when
    there are fewer) and merges the most similar one if it reaches
    ``threshold``.  Returns the number of merges performed.

    Candidate pairs are ranked in floating point: merged vectors are
    averages of integers, hence dyadic rationals that floats hold exactly,
    and only the min/max ratios round.
    """
    start = len(types)
    goal = start - max(1, math.ceil(start * reduction))
    vectors = [_float_vectors(t) for t in types]
    cut = float(threshold)

    def similarity(ab: tuple[int, int]) -> float:
        (o1, i1), (o2, i2) = vectors[ab[0]], vectors[ab[1]]
        return (_float_ratio_mean(o1, o2) + _float_ratio_mean(i1, i2)) / 2

    merges = 0
    while len(types) > max(goal, 0):
        groups: dict[tuple, list[int]] = defaultdict(list)
        for i, t in enumerate(types):
            groups[(t.class_type, t.partition)].append(i)
        keys = sorted((k for k, v in groups.items() if len(v) >= 2), key=lambda k: groups[k][0])
        weights = [math.comb(len(groups[k]), 2) for k in keys]
        total = sum(weights)
        if total == 0:
            break
        if total <= sample:
            pairs = [(a, b) for k in keys for x, a in enumerate(groups[k]) for b in groups[k][x + 1:]]
        else:
            pairs = []
            for k in rng.choices(keys, weights=weights, k=sample):
                a, b = rng.sample(groups[k], 2)
                pairs.append((min(a, b), max(a, b)))
        scored = [(similarity(ab), -ab[0], -ab[1]) for ab in pairs]
        best_score, na, nb = max(scored)
        if best_score < cut:
            break
        a, b = -na, -nb
        types[a] = merge_types(types[a], types[b])
        vectors[a] = _float_vectors(types[a])
        del types[b]
        del vectors[b]
        merges += 1
    return merges
