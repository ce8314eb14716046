"""Bucket vicinities, Jaccard similarity, MinHash signatures and LSH keys."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ..rdf import RDF_TYPE
from ..summary import Summary

MASK64 = (1 << 64) - 1
MASK128 = (1 << 128) - 1
INFINITY = 1 << 64  # larger than every hash value


def vicinity_index(s: Summary) -> dict[int, set[tuple[int, int]]]:
    """vic(b) for every bucket at once.

    Outgoing pairs are ``(predicate, object)`` and incoming pairs are
    ``(subject, predicate)``; rdf:type edges are skipped.
    """
    rdf_type_id = s.dictionary.id_of(RDF_TYPE)
    rdf_type = s.mu.get(rdf_type_id, rdf_type_id)
    vic: dict[int, set[tuple[int, int]]] = {b: set() for b in s.bucket_size}
    for a, p, o in s.weights:
        if p == rdf_type:
            continue
        vic[a].add((p, o))
        vic[o].add((a, p))
    return vic


def vicinity(s: Summary, b: int) -> set[tuple[int, int]]:
    return vicinity_index(s).get(b, set())


def jaccard_sets(v1: set, v2: set) -> Fraction:
    union = len(v1 | v2)
    if union == 0:
        return Fraction(1)
    return Fraction(len(v1 & v2), union)


def jaccard(s: Summary, b1: int, b2: int) -> Fraction:
    vic = vicinity_index(s)
    return jaccard_sets(vic.get(b1, set()), vic.get(b2, set()))


@dataclass(frozen=True)
class MinHashScheme:
    """An m x n matrix of seeded multiply-shift hash functions on id pairs.

    Cell (i, j) maps the pair (a, b) to the high 64 bits of
    ``A * x + B mod 2**128`` with ``x = a * 2**64 + b`` and ``A`` odd.
    """

    m: int
    n: int
    multipliers: tuple[int, ...]
    offsets: tuple[int, ...]
    lsh_multiplier: int
    lsh_offset: int

    @classmethod
    def create(cls, m: int = 20, n: int = 2, seed: int = 0) -> MinHashScheme:
        if m < 1 or n < 1:
            raise ValueError("MinHash dimensions must be positive")
        rng = random.Random(seed)
        cells = m * n
        return cls(m, n,
                   tuple(rng.getrandbits(128) | 1 for _ in range(cells)),
                   tuple(rng.getrandbits(128) for _ in range(cells)),
                   rng.getrandbits(64) | 1, rng.getrandbits(64))

    def hashes(self, pair: tuple[int, int]) -> tuple[int, ...]:
        x = (pair[0] << 64) | pair[1]
        return tuple(((a * x + b) & MASK128) >> 64 for a, b in zip(self.multipliers, self.offsets))

    def signature(self, elements) -> tuple[int, ...]:
        """Row-major signature of a set of pairs; all cells INFINITY when empty."""
        sig = [INFINITY] * (self.m * self.n)
        for pair in elements:
            for k, h in enumerate(self.hashes(pair)):
                if h < sig[k]:
                    sig[k] = h
        return tuple(sig)

    def row(self, sig: tuple[int, ...], i: int) -> tuple[int, ...]:
        return sig[i * self.n:(i + 1) * self.n]

    def lsh(self, row: tuple[int, ...]) -> int:
        """Seeded polynomial hash of a signature row, reduced to 64 bits."""
        h = self.lsh_offset
        for v in row:
            h = (h * self.lsh_multiplier + v + 1) & MASK64
        return h


def minhash_signature(scheme: MinHashScheme, s: Summary, b: int) -> tuple[int, ...]:
    return scheme.signature(vicinity(s, b))


def approx_jaccard(sig1: tuple[int, ...], sig2: tuple[int, ...]) -> Fraction:
    """Fraction of equal cells (two empty signatures agree everywhere)."""
    if len(sig1) != len(sig2):
        raise ValueError("signatures from different schemes")
    return Fraction(sum(1 for a, b in zip(sig1, sig2) if a == b), len(sig1))


class SignatureCache:
    """Memoises per-pair hash vectors across iterations of the refinement."""

    def __init__(self, scheme: MinHashScheme):
        self.scheme = scheme
        self._hashes: dict[tuple[int, int], tuple[int, ...]] = {}

    def signature(self, elements) -> tuple[int, ...]:
        cells = self.scheme.m * self.scheme.n
        if not elements:
            return (INFINITY,) * cells
        cache = self._hashes
        vectors = []
        for pair in elements:
            hv = cache.get(pair)
            if hv is None:
                hv = cache[pair] = self.scheme.hashes(pair)
            vectors.append(hv)
        return tuple(map(min, zip(*vectors)))
