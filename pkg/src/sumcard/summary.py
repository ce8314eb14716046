"""Weighted graph summaries (H, w, mu) and their line-based file format.

A summary maps every resource of ``dom(mu)`` to a bucket; buckets are
resources of the same dictionary, so a resource that maps to itself (a
predicate or a class) is its own bucket.  The summarisation graph H holds
triples over buckets, each weighted by the number of data triples that
collapse onto it.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import TextIO

from .errors import InconsistentSummaryError, MappingError, SummaryFormatError, UnknownBucketError
from .rdf import Dictionary, RdfGraph, Triple, read_term, skip_ws

FORMAT_VERSION = 1


@dataclass(eq=False)
class Summary:
    weights: dict[Triple, int]
    mu: dict[int, int]
    dictionary: Dictionary = field(default_factory=Dictionary)
    bucket_size: dict[int, int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.bucket_size is None:
            self.bucket_size = dict(Counter(self.mu.values()))

    @cached_property
    def graph(self) -> RdfGraph:
        return RdfGraph(self.weights, self.dictionary)

    @property
    def buckets(self) -> set[int]:
        return set(self.bucket_size)

    def __len__(self) -> int:
        return len(self.weights)

    def size(self, h: Triple) -> int:
        bs = self.bucket_size
        return bs[h[0]] * bs[h[1]] * bs[h[2]]

    def members(self, bucket: int) -> list[int]:
        return sorted(r for r, b in self.mu.items() if b == bucket)

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on violation."""
        for h, w in self.weights.items():
            if w < 1:
                raise ValueError(f"weight {w} < 1 for {h}")
        sizes = Counter(self.mu.values())
        if sizes != Counter(self.bucket_size):
            raise ValueError("bucket sizes disagree with mu")
        used = {b for h in self.weights for b in h}
        if not used <= set(sizes):
            raise ValueError("summary triple over a bucket with no preimage")
        if set(sizes) - used:
            raise ValueError("mu is not surjective onto res(H)")

    def canonical(self) -> tuple:
        """Dictionary-independent structural fingerprint."""
        lex = self.dictionary.lookup
        return (
            frozenset((lex(s), lex(p), lex(o), w) for (s, p, o), w in self.weights.items()),
            frozenset((lex(r), lex(b)) for r, b in self.mu.items()),
        )

    def by_members(self) -> tuple:
        """Fingerprint that ignores bucket names: buckets become their member sets."""
        lex = self.dictionary.lookup
        groups: dict[int, list[str]] = {}
        for r, b in self.mu.items():
            groups.setdefault(b, []).append(lex(r))
        name = {b: tuple(sorted(rs)) for b, rs in groups.items()}
        return frozenset((name[s], name[p], name[o], w) for (s, p, o), w in self.weights.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Summary):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __repr__(self) -> str:
        return f"Summary({len(self.weights)} triples, {len(self.bucket_size)} buckets, {len(self.mu)} resources)"


def summarize_graph(g: RdfGraph, mu: Mapping[int, int], dictionary: Dictionary | None = None) -> Summary:
    """The unique summary with ``H = mu(G)`` that represents ``g``.

    ``dom(mu)`` must cover ``res(g)``; it is restricted to ``res(g)`` so the
    summary is surjective onto its buckets.
    """
    weights: Counter = Counter()
    try:
        for s, p, o in g:
            weights[(mu[s], mu[p], mu[o])] += 1
    except KeyError as exc:
        raise MappingError(f"resource {exc.args[0]} of the graph is not in dom(mu)") from None
    res = g.resources()
    return Summary(dict(weights), {r: mu[r] for r in res},
                   dictionary if dictionary is not None else g.dictionary)


def represents(s: Summary, g) -> bool:
    """Whether ``s`` represents ``g``: res(g) within dom(mu), H = mu(g) and weights count preimages."""
    mu = s.mu
    weights: Counter = Counter()
    for t in g:
        try:
            weights[(mu[t[0]], mu[t[1]], mu[t[2]])] += 1
        except KeyError:
            return False
    return weights == Counter(s.weights)


def same_up_to_bucket_names(a: Summary, b: Summary) -> bool:
    return a.by_members() == b.by_members()


def is_consistent(s: Summary) -> bool:
    return all(w <= s.size(h) for h, w in s.weights.items())


def count_worlds(s: Summary) -> int:
    """Number of graphs the summary represents (0 when inconsistent)."""
    if not is_consistent(s):
        return 0
    total = 1
    for h, w in s.weights.items():
        total *= math.comb(s.size(h), w)
    return total


def merge_many(s: Summary, pairs: Iterable[tuple[int, int]]) -> Summary:
    """Apply ``merge b_from into b_into`` for each pair, in order."""
    target: dict[int, int] = {}

    def find(b: int) -> int:
        while b in target:
            b = target[b]
        return b

    for b_from, b_into in pairs:
        if b_from not in s.bucket_size or b_into not in s.bucket_size:
            raise UnknownBucketError(f"unknown bucket in merge ({b_from}, {b_into})")
        f, t = find(b_from), find(b_into)
        if b_from in target or f == t:
            raise ValueError(f"bucket {b_from} cannot be merged into {b_into}")
        target[f] = t
    if not target:
        return Summary(dict(s.weights), dict(s.mu), s.dictionary, dict(s.bucket_size))
    final = {b: find(b) for b in target}
    weights: Counter = Counter()
    for (a, p, o), w in s.weights.items():
        weights[(final.get(a, a), final.get(p, p), final.get(o, o))] += w
    mu = {r: final.get(b, b) for r, b in s.mu.items()}
    sizes = dict(s.bucket_size)
    for b, t in final.items():
        sizes[t] += sizes.pop(b)
    return Summary(dict(weights), mu, s.dictionary, sizes)


def merge_buckets(s: Summary, b_from: int, b_into: int) -> Summary:
    if b_from == b_into:
        raise ValueError("cannot merge a bucket into itself")
    return merge_many(s, [(b_from, b_into)])


def check_consistent(s: Summary) -> None:
    if not is_consistent(s):
        raise InconsistentSummaryError("some summary triple has weight larger than its size")


# -- file format -------------------------------------------------------------

def save(s: Summary, sink: TextIO) -> None:
    """Write ``s`` in the ``SUMRDF 1`` text format, lines sorted for diffability."""
    lex = s.dictionary.lookup
    b_lines = sorted(f"B {lex(b)} {n}\n" for b, n in s.bucket_size.items())
    m_lines = sorted(f"M {lex(r)} {lex(b)}\n" for r, b in s.mu.items() if r != b)
    t_lines = sorted(f"T {lex(a)} {lex(p)} {lex(o)} {w}\n" for (a, p, o), w in s.weights.items())
    sink.write(f"SUMRDF {FORMAT_VERSION}\n")
    sink.write(f"C {len(b_lines)} {len(m_lines)} {len(t_lines)}\n")
    sink.writelines(b_lines)
    sink.writelines(m_lines)
    sink.writelines(t_lines)


def dumps(s: Summary) -> str:
    import io
    buf = io.StringIO()
    save(s, buf)
    return buf.getvalue()


def _terms(line: str, n: int, lineno: int) -> tuple[list[str], int]:
    out = []
    pos = 1
    for _ in range(n):
        pos = skip_ws(line, pos)
        if pos == 1 or line[pos - 1] not in " \t":
            raise SummaryFormatError("expected whitespace before term", lineno, pos + 1)
        lexical, pos = read_term(line, pos, lineno)
        out.append(lexical)
    return out, pos


def _int_field(line: str, pos: int, lineno: int, what: str) -> int:
    rest = line[pos:].strip()
    if not rest.isdigit():
        raise SummaryFormatError(f"bad {what} field {rest!r}", lineno, pos + 1)
    return int(rest)


def load(source: TextIO, dictionary: Dictionary | None = None) -> Summary:
    """Read a summary written by :func:`save`.

    Raises :class:`SummaryFormatError` on a version mismatch, a malformed
    line, counts that do not match the header (truncation), or a bucket
    size that disagrees with the M lines.
    """
    dictionary = dictionary if dictionary is not None else Dictionary()
    lines = source.read().splitlines()
    if not lines or not lines[0].startswith("SUMRDF "):
        raise SummaryFormatError("missing SUMRDF header", 1)
    version = lines[0].split()[1:]
    if version != [str(FORMAT_VERSION)]:
        raise SummaryFormatError(f"unsupported format version {' '.join(version)}", 1)
    if len(lines) < 2 or not lines[1].startswith("C "):
        raise SummaryFormatError("missing count line", 2)
    try:
        nb, nm, nt = (int(x) for x in lines[1].split()[1:])
    except ValueError:
        raise SummaryFormatError("bad count line", 2) from None

    sizes: dict[int, int] = {}
    mu: dict[int, int] = {}
    weights: dict[Triple, int] = {}
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        tag = line[:1]
        if tag == "B":
            (b,), pos = _terms(line, 1, lineno)
            size = _int_field(line, pos, lineno, "size")
            if size < 1:
                raise SummaryFormatError("bucket size must be positive", lineno)
            sizes[dictionary.intern(b)] = size
        elif tag == "M":
            (r, b), pos = _terms(line, 2, lineno)
            if line[pos:].strip():
                raise SummaryFormatError("trailing characters", lineno, pos + 1)
            mu[dictionary.intern(r)] = dictionary.intern(b)
        elif tag == "T":
            terms, pos = _terms(line, 3, lineno)
            w = _int_field(line, pos, lineno, "weight")
            if w < 1:
                raise SummaryFormatError("weight must be positive", lineno)
            weights[tuple(dictionary.intern(t) for t in terms)] = w
        else:
            raise SummaryFormatError(f"unknown record type {tag!r}", lineno)

    if (len(sizes), len(mu), len(weights)) != (nb, nm, nt):
        raise SummaryFormatError(
            f"record counts {len(sizes)}/{len(mu)}/{len(weights)} do not match header {nb}/{nm}/{nt}")
    explicit = Counter(mu.values())
    for b, size in sizes.items():
        identity = size - explicit.get(b, 0)
        if identity not in (0, 1):
            raise SummaryFormatError(f"bucket {dictionary.lookup(b)} size {size} disagrees with its M records")
        if identity:
            if b in mu:
                raise SummaryFormatError(f"bucket {dictionary.lookup(b)} is also remapped")
            mu[b] = b
    if set(explicit) - set(sizes):
        raise SummaryFormatError("M record targets an undeclared bucket")
    s = Summary(weights, mu, dictionary, sizes)
    try:
        s.validate()
    except ValueError as exc:
        raise SummaryFormatError(str(exc)) from None
    return s


def loads(text: str, dictionary: Dictionary | None = None) -> Summary:
    import io
    return load(io.StringIO(text), dictionary)
