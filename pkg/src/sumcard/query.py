"""Conjunctive queries (basic graph patterns) and their exact evaluation.

Terms inside atoms are either resource ids (``int``) or :class:`Var`.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import ParseError
from .rdf import Dictionary, RdfGraph, read_term, skip_ws


@dataclass(frozen=True, order=True)
class Var:
    id: int
    name: str = field(compare=False, default="")

    def __repr__(self) -> str:
        return f"?{self.name or self.id}"


Term = Union[int, Var]
Substitution = dict


class Atom(NamedTuple):
    s: Term
    p: Term
    o: Term


def term_key(t: Term) -> tuple[int, int]:
    """Sort key of the fixed total order: resources by id, then variables by id."""
    return (1, t.id) if isinstance(t, Var) else (0, t)


def term_lt(a: Term, b: Term) -> bool:
    return term_key(a) < term_key(b)


def is_var(t: Term) -> bool:
    return isinstance(t, Var)


@dataclass(frozen=True)
class Query:
    """A finite set of atoms, kept in first-occurrence order."""

    atoms: tuple[Atom, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(dict.fromkeys(Atom(*a) for a in self.atoms)))

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    @property
    def vars(self) -> tuple[Var, ...]:
        seen = dict.fromkeys(t for a in self.atoms for t in a if isinstance(t, Var))
        return tuple(sorted(seen))

    @property
    def ress(self) -> frozenset[int]:
        return frozenset(t for a in self.atoms for t in a if not isinstance(t, Var))

    def substitute(self, sub: Mapping[Var, Term]) -> Query:
        return Query(tuple(Atom(*(sub.get(t, t) if isinstance(t, Var) else t for t in a))
                           for a in self.atoms))

    def map_resources(self, mapping: Mapping[int, int]) -> Query:
        return Query(tuple(Atom(*(t if isinstance(t, Var) else mapping[t] for t in a))
                           for a in self.atoms))

    def union(self, other: Query) -> Query:
        return Query(self.atoms + other.atoms)

    def renamed_apart(self) -> Query:
        """Copy of the query with every variable replaced by a fresh one."""
        vs = self.vars
        base = max((v.id for v in vs), default=-1) + 1
        rho = {v: Var(base + i, v.name + "~") for i, v in enumerate(vs)}
        return self.substitute(rho)

    def to_text(self, dictionary: Dictionary) -> str:
        def show(t: Term) -> str:
            return f"?{t.name or 'v' + str(t.id)}" if isinstance(t, Var) else dictionary.lookup(t)
        return "".join(f"{show(a.s)} {show(a.p)} {show(a.o)} .\n" for a in self.atoms)


_VAR_RE = re.compile(r"[?$]([A-Za-z0-9_]+)")


def parse_query(text: str, dictionary: Dictionary) -> Query:
    """Parse ``?x <p> "lit" .`` style triple patterns, one or more per line.

    Resources are interned into ``dictionary``; variables are numbered in
    order of first appearance.
    """
    variables: dict[str, Var] = {}
    atoms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        pos = skip_ws(line, 0)
        while pos < len(line) and line[pos] != "#":
            terms = []
            for _ in range(3):
                pos = skip_ws(line, pos)
                m = _VAR_RE.match(line, pos)
                if m:
                    name = m.group(1)
                    if name not in variables:
                        variables[name] = Var(len(variables), name)
                    terms.append(variables[name])
                    pos = m.end()
                else:
                    lex, pos = read_term(line, pos, lineno)
                    terms.append(dictionary.intern(lex))
            pos = skip_ws(line, pos)
            if line[pos:pos + 1] != ".":
                raise ParseError("expected '.' after triple pattern", lineno, pos + 1)
            atoms.append(Atom(*terms))
            pos = skip_ws(line, pos + 1)
    return Query(tuple(atoms))


def _plan(q: Query, g: RdfGraph) -> list[Atom]:
    remaining = list(q.atoms)
    bound: set[Var] = set()
    order = []
    while remaining:
        def score(item):
            i, a = item
            n_bound = sum(1 for t in a if not isinstance(t, Var) or t in bound)
            static = g.count(tuple(None if isinstance(t, Var) else t for t in a))
            return (-n_bound, static, i)
        _, best = min(enumerate(remaining), key=score)
        remaining.remove(best)
        order.append(best)
        bound.update(t for t in best if isinstance(t, Var))
    return order


def evaluate(q: Query, g: RdfGraph, shard: tuple[int, int] | None = None) -> Iterator[Substitution]:
    """Stream every answer of ``q`` on ``g`` with left-deep index nested loops.

    ``shard=(i, k)`` restricts the first joined atom to the matches whose
    position in index order is congruent to ``i`` modulo ``k``; the union
    over ``i`` of the shards is exactly the unsharded stream.
    """
    order = _plan(q, g)
    n = len(order)
    binding: dict[Var, int] = {}

    def rec(depth: int) -> Iterator[Substitution]:
        if depth == n:
            yield dict(binding)
            return
        atom = order[depth]
        pattern = tuple(binding.get(t) if isinstance(t, Var) else t for t in atom)
        matches = g.match(pattern)
        if depth == 0 and shard is not None:
            i, k = shard
            matches = (t for j, t in enumerate(matches) if j % k == i)
        for triple in matches:
            newly = []
            ok = True
            for t, value in zip(atom, triple):
                if isinstance(t, Var):
                    current = binding.get(t)
                    if current is None:
                        binding[t] = value
                        newly.append(t)
                    elif current != value:
                        ok = False
                        break
            if ok:
                yield from rec(depth + 1)
            for t in newly:
                del binding[t]

    return rec(0)


def cardinality(q: Query, g: RdfGraph) -> int:
    return sum(1 for _ in evaluate(q, g))


def qerror(n, e) -> Union[float, Fraction]:
    """Multiplicative error of estimate ``e`` against true count ``n``.

    Both values are clamped below at 1.  Exact inputs (ints and
    Fractions) give an exact Fraction, anything else a float.
    """
    n1 = max(n, 1)
    e1 = max(e, 1)
    if isinstance(n1, (int, Fraction)) and isinstance(e1, (int, Fraction)):
        n1, e1 = Fraction(n1), Fraction(e1)
    else:
        n1, e1 = float(n1), float(e1)
    return max(n1 / e1, e1 / n1)


def query_from_atoms(atoms: Iterable[tuple[Term, Term, Term]]) -> Query:
    return Query(tuple(Atom(*a) for a in atoms))
