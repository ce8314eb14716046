"""Unifiable partitions of a query and the coefficients K on their order.

A partition is stored as a restricted growth string ``labels`` over the
atom positions of the query: ``labels[i]`` is the block index of atom ``i``
and blocks are numbered by first occurrence.  ``P <= P'`` (P refines P')
holds iff the map from P-blocks to P'-blocks is well defined.

Unifiability only loses edges under refinement, so the base is a down-set
of the partition lattice; every interval ``[P, P']`` of the base is
therefore a full interval of that lattice.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import product

from ..errors import GeneralPathIntractable
from ..query import Query, Term, Var, term_key

DEFAULT_ATOM_CAP = 12


@dataclass(frozen=True)
class Partition:
    labels: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    unifier: dict = field(compare=False, hash=False, repr=False)
    vrng: tuple[Var, ...] = field(compare=False, hash=False, repr=False)

    def __len__(self) -> int:
        return len(self.blocks)


def canonical_labels(labels: Sequence[int]) -> tuple[int, ...]:
    remap: dict[int, int] = {}
    return tuple(remap.setdefault(x, len(remap)) for x in labels)


def blocks_of(labels: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    out: list[list[int]] = []
    for i, b in enumerate(labels):
        if b == len(out):
            out.append([])
        out[b].append(i)
    return tuple(tuple(b) for b in out)


def refines(p: Sequence[int], p2: Sequence[int]) -> bool:
    """True iff every block of ``p`` lies inside a block of ``p2``."""
    image: dict[int, int] = {}
    for a, b in zip(p, p2):
        if image.setdefault(a, b) != b:
            return False
    return True


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``n``."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i: int, top: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(labels)
            return
        for b in range(top + 1):
            labels[i] = b
            yield from rec(i + 1, max(top, b + 1) if b == top else top)

    yield from rec(1, 1)


class _UnionFind:
    """Union-find over terms; a resource, when present, is always the root."""

    __slots__ = ("parent",)

    def __init__(self, parent=None):
        self.parent: dict = parent if parent is not None else {}

    def copy(self) -> _UnionFind:
        return _UnionFind(dict(self.parent))

    def find(self, t):
        parent = self.parent
        while t in parent:
            t = parent[t]
        return t

    def union(self, a: Term, b: Term) -> bool:
        """Merge the classes of ``a`` and ``b``; False if two distinct resources meet."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return True
        if isinstance(ra, Var):
            self.parent[ra] = rb
        elif isinstance(rb, Var):
            self.parent[rb] = ra
        else:
            return False
        return True


def _make_partition(q: Query, labels: tuple[int, ...]) -> Partition:
    atoms = q.atoms
    blocks = blocks_of(labels)
    # term graph components
    comp: dict[Term, set] = {}
    for t in (t for a in atoms for t in a):
        comp.setdefault(t, {t})
    for block in blocks:
        first = atoms[block[0]]
        for i in block[1:]:
            for x, y in zip(first, atoms[i]):
                cx, cy = comp[x], comp[y]
                if cx is not cy:
                    cx |= cy
                    for t in cy:
                        comp[t] = cx
    unifier = {}
    for v in q.vars:
        unifier[v] = min(comp[v], key=term_key)
    vrng = tuple(sorted({t for t in unifier.values() if isinstance(t, Var)}))
    return Partition(labels, blocks, unifier, vrng)


def is_unifiable(q: Query, labels: Sequence[int]) -> bool:
    """Direct check: no two distinct resources reachable in the term graph."""
    uf = _UnionFind()
    atoms = q.atoms
    for block in blocks_of(canonical_labels(labels)):
        first = atoms[block[0]]
        for i in block[1:]:
            for x, y in zip(first, atoms[i]):
                if not uf.union(x, y):
                    return False
    return True


class PartitionBase:
    """All unifiable partitions of a query, with the refinement order and K."""

    def __init__(self, q: Query, partitions: list[Partition]):
        self.query = q
        self.partitions = partitions
        self.index = {p.labels: p for p in partitions}
        self._kappa: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}

    def __len__(self) -> int:
        return len(self.partitions)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self.partitions)

    def __contains__(self, p: Partition) -> bool:
        return p.labels in self.index

    @property
    def finest(self) -> Partition:
        return self.index[tuple(range(len(self.query)))]

    def leq(self, p: Partition, p2: Partition) -> bool:
        return refines(p.labels, p2.labels)

    def lt(self, p: Partition, p2: Partition) -> bool:
        return p.labels != p2.labels and refines(p.labels, p2.labels)

    def order(self) -> list[tuple[Partition, Partition]]:
        """All strict pairs ``P < P'``; quadratic, meant for small bases."""
        return [(p, p2) for p in self.partitions for p2 in self.partitions if self.lt(p, p2)]

    def coarsenings(self, p: Partition, within: Partition | Sequence | None = None) -> Iterator[Partition]:
        """Every ``P'`` in the base with ``P <= P'`` (and ``P' <= within``), P included.

        ``within`` may be a partition or any labelling of the atoms; it must
        be refined by ``p``.
        """
        if within is None:
            groups = [tuple(range(len(p.blocks)))]
        else:
            bound = within.labels if isinstance(within, Partition) else within
            image: dict = {}
            for bi, block in enumerate(p.blocks):
                image.setdefault(bound[block[0]], []).append(bi)
            groups = [tuple(g) for g in image.values()]
        for choice in product(*(list(set_partitions(len(g))) for g in groups)):
            block_label = {}
            offset = 0
            for g, rgs in zip(groups, choice):
                for bi, lab in zip(g, rgs):
                    block_label[bi] = offset + lab
                offset += len(g)
            labels = canonical_labels([block_label[b] for b in p.labels])
            found = self.index.get(labels)
            if found is not None:
                yield found

    def kappa(self, p: Partition, p2: Partition) -> int:
        """K(P, P') via  -K(P, P') = sum over P < P'' <= P' of K(P'', P')."""
        if not self.leq(p, p2):
            raise ValueError("kappa is only defined for P <= P'")
        key = (p.labels, p2.labels)
        cached = self._kappa.get(key)
        if cached is not None:
            return cached
        if p.labels == p2.labels:
            value = 1
        else:
            value = -sum(self.kappa(mid, p2) for mid in self.coarsenings(p, within=p2)
                         if mid.labels != p.labels)
        self._kappa[key] = value
        return value


def mobius(p: Partition, p2: Partition) -> int:
    """Closed form of K: product over blocks of P' of (-1)^(k-1) (k-1)!,
    k being the number of P-blocks merged into that block."""
    merged: dict[int, set[int]] = {}
    for a, b in zip(p.labels, p2.labels):
        merged.setdefault(b, set()).add(a)
    value = 1
    for parts in merged.values():
        k = len(parts)
        value *= (-1) ** (k - 1) * math.factorial(k - 1)
    return value


def partition_base(q: Query, atom_cap: int = DEFAULT_ATOM_CAP) -> PartitionBase:
    """Enumerate the unifiable partitions of ``q``.

    Blocks are grown atom by atom; a branch is abandoned as soon as its term
    graph links two distinct resources, since adding atoms never removes
    such a link.
    """
    n = len(q)
    if n > atom_cap:
        raise GeneralPathIntractable(f"query has {n} atoms, general path capped at {atom_cap}")
    atoms = q.atoms
    found: list[tuple[int, ...]] = []
    labels = [0] * n

    def rec(i: int, nblocks: int, heads: list[int], uf: _UnionFind) -> None:
        if i == n:
            found.append(tuple(labels))
            return
        atom = atoms[i]
        for b in range(nblocks):
            trial = uf.copy()
            if all(trial.union(x, y) for x, y in zip(atoms[heads[b]], atom)):
                labels[i] = b
                rec(i + 1, nblocks, heads, trial)
        labels[i] = nblocks
        heads.append(i)
        rec(i + 1, nblocks + 1, heads, uf)
        heads.pop()

    rec(0, 0, [], _UnionFind())
    return PartitionBase(q, [_make_partition(q, lab) for lab in found])
