"""Resource dictionary, indexed triple storage and an N-Triples reader/writer.

Resources are interned to dense integer ids; everything downstream of the
parser works on ids only.  Lexical forms are canonical N-Triples terms:

* IRIs as ``<iri>``
* blank nodes as ``_:label`` (treated as ordinary URIs)
* literals as ``"value"^^<datatype>`` or ``"value"@lang``

Plain literals get ``xsd:string`` and language-tagged literals get
``rdf:langString`` as their datatype.
"""

from __future__ import annotations

import io
import re
import sys
from bisect import bisect_left
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import BinaryIO, TextIO, Union

from .errors import ParseError

RDF_TYPE = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>"
XSD_STRING = "<http://www.w3.org/2001/XMLSchema#string>"
RDF_LANGSTRING = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#langString>"

URI = 0
LITERAL = 1

Triple = tuple[int, int, int]
Pattern = tuple[Union[int, None], Union[int, None], Union[int, None]]

_IRI = r"<([^<>\"{}|^`\\\x00-\x20]*)>"
_BNODE = r"_:([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)"
_LITERAL = r"\"((?:[^\"\\\n\r]|\\.)*)\"(?:@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)|\^\^" + _IRI + r")?"

IRI_RE = re.compile(_IRI)
BNODE_RE = re.compile(_BNODE)
LITERAL_RE = re.compile(_LITERAL)
_WS = re.compile(r"[ \t]*")

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(raw: str, line: int | None, column: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        c = raw[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        nxt = raw[i + 1] if i + 1 < len(raw) else ""
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in ("u", "U"):
            width = 4 if nxt == "u" else 8
            digits = raw[i + 2:i + 2 + width]
            if len(digits) != width or not all(d in "0123456789abcdefABCDEF" for d in digits):
                raise ParseError(f"bad \\{nxt} escape in literal", line, column + i)
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise ParseError(f"unknown escape \\{nxt} in literal", line, column + i)
    return "".join(out)


def escape_literal(value: str) -> str:
    return (value.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r"))


def literal_lexical(value: str, datatype: str | None = None, lang: str | None = None) -> str:
    """Canonical lexical form of a literal; ``datatype`` is a bracketed IRI."""
    body = '"' + escape_literal(value) + '"'
    if lang:
        return body + "@" + lang.lower()
    return body + "^^" + (datatype or XSD_STRING)


def read_term(text: str, pos: int, line: int | None = None,
              allow_literal: bool = True) -> tuple[str, int]:
    """Read one resource term starting at ``pos``.

    Returns the canonical lexical form and the position after the term.
    """
    ch = text[pos:pos + 1]
    if ch == "<":
        m = IRI_RE.match(text, pos)
        if m is None:
            raise ParseError("malformed IRI", line, pos + 1)
        return m.group(0), m.end()
    if ch == "_":
        m = BNODE_RE.match(text, pos)
        if m is None:
            raise ParseError("malformed blank node", line, pos + 1)
        return m.group(0), m.end()
    if ch == '"':
        if not allow_literal:
            raise ParseError("literal not allowed here", line, pos + 1)
        m = LITERAL_RE.match(text, pos)
        if m is None:
            raise ParseError("malformed literal", line, pos + 1)
        value = _unescape(m.group(1), line, pos + 2)
        dt = m.group(3)
        return literal_lexical(value, f"<{dt}>" if dt is not None else None, m.group(2)), m.end()
    if not ch:
        raise ParseError("unexpected end of line", line, pos + 1)
    raise ParseError(f"unexpected character {ch!r}", line, pos + 1)


def skip_ws(text: str, pos: int) -> int:
    return _WS.match(text, pos).end()


class Dictionary:
    """Bidirectional map between canonical lexical forms and dense ids."""

    def __init__(self) -> None:
        self._lex: list[str] = []
        self._ids: dict[str, int] = {}
        self._datatype: list[int] = []  # -1 for URIs

    def __len__(self) -> int:
        return len(self._lex)

    def __contains__(self, lexical: str) -> bool:
        return lexical in self._ids

    def intern(self, lexical: str) -> int:
        rid = self._ids.get(lexical)
        if rid is not None:
            return rid
        datatype = -1
        if lexical.startswith('"'):
            if lexical.endswith(">") and '"^^<' in lexical:
                datatype = self.intern(lexical[lexical.rindex('"^^<') + 3:])
            else:
                datatype = self.intern(RDF_LANGSTRING)
        rid = len(self._lex)
        self._lex.append(lexical)
        self._datatype.append(datatype)
        self._ids[lexical] = rid
        return rid

    def lookup(self, rid: int) -> str:
        return self._lex[rid]

    def id_of(self, lexical: str) -> int | None:
        return self._ids.get(lexical)

    def kind(self, rid: int) -> int:
        return URI if self._datatype[rid] < 0 else LITERAL

    def is_literal(self, rid: int) -> bool:
        return self._datatype[rid] >= 0

    def datatype(self, rid: int) -> int | None:
        dt = self._datatype[rid]
        return None if dt < 0 else dt

    def copy(self) -> Dictionary:
        other = Dictionary()
        other._lex = list(self._lex)
        other._ids = dict(self._ids)
        other._datatype = list(self._datatype)
        return other


_LOW = -1
_HIGH = sys.maxsize


class RdfGraph:
    """An immutable set of triples with SPO, POS and OSP sorted indexes."""

    __slots__ = ("dictionary", "_triples", "_spo", "_pos", "_osp")

    def __init__(self, triples: Iterable[Triple] = (), dictionary: Dictionary | None = None):
        self.dictionary = dictionary if dictionary is not None else Dictionary()
        self._triples = frozenset(triples)
        self._spo = sorted(self._triples)
        self._pos = sorted((p, o, s) for s, p, o in self._triples)
        self._osp = sorted((o, s, p) for s, p, o in self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._spo)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RdfGraph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"RdfGraph({len(self)} triples)"

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    def _range(self, pattern: Pattern) -> tuple[list, int, int, int]:
        s, p, o = pattern
        if s is not None:
            if o is not None and p is None:
                index, prefix, perm = self._osp, (o, s), 2
            else:
                index, prefix, perm = self._spo, tuple(x for x in (s, p, o) if x is not None), 0
                if p is None:
                    prefix = (s,)
                elif o is None:
                    prefix = (s, p)
        elif p is not None:
            index, prefix, perm = self._pos, (p,) if o is None else (p, o), 1
        elif o is not None:
            index, prefix, perm = self._osp, (o,), 2
        else:
            return self._spo, 0, len(self._spo), 0
        pad = 3 - len(prefix)
        lo = bisect_left(index, prefix + (_LOW,) * pad)
        hi = bisect_left(index, prefix + (_HIGH,) * pad) if pad else lo + (index[lo:lo + 1] == [prefix])
        return index, lo, hi, perm

    def match(self, pattern: Pattern) -> Iterator[Triple]:
        """Yield triples matching every bound position, in index order."""
        index, lo, hi, perm = self._range(pattern)
        if perm == 0:
            yield from index[lo:hi]
        elif perm == 1:
            for p, o, s in index[lo:hi]:
                yield (s, p, o)
        else:
            for o, s, p in index[lo:hi]:
                yield (s, p, o)

    def count(self, pattern: Pattern) -> int:
        _, lo, hi, _ = self._range(pattern)
        return hi - lo

    def resources(self) -> set[int]:
        out: set[int] = set()
        for t in self._triples:
            out.update(t)
        return out

    def subjects(self) -> set[int]:
        return {s for s, _, _ in self._triples}

    def predicates(self) -> set[int]:
        return {p for _, p, _ in self._triples}

    def objects(self) -> set[int]:
        return {o for _, _, o in self._triples}


def _lines(source: Union[str, Path, bytes, BinaryIO, TextIO, Iterable]) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            yield from _lines(fh)
        return
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    for raw in source:
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(f"invalid UTF-8: {exc}") from exc
        yield raw


def parse_ntriples_line(text: str, dictionary: Dictionary, lineno: int | None = None) -> Triple | None:
    """Parse one line; ``None`` for blank and comment lines."""
    text = text.rstrip("\r\n")
    pos = skip_ws(text, 0)
    if pos == len(text) or text[pos] == "#":
        return None
    s, pos = read_term(text, pos, lineno, allow_literal=False)
    pos = skip_ws(text, pos)
    if text[pos:pos + 1] != "<":
        raise ParseError("predicate must be an IRI", lineno, pos + 1)
    p, pos = read_term(text, pos, lineno)
    pos = skip_ws(text, pos)
    o, pos = read_term(text, pos, lineno)
    pos = skip_ws(text, pos)
    if text[pos:pos + 1] != ".":
        raise ParseError("expected '.' after object", lineno, pos + 1)
    pos = skip_ws(text, pos + 1)
    if pos < len(text) and text[pos] != "#":
        raise ParseError("trailing characters after '.'", lineno, pos + 1)
    return dictionary.intern(s), dictionary.intern(p), dictionary.intern(o)


def parse_ntriples(source, dictionary: Dictionary | None = None) -> RdfGraph:
    """Parse an N-Triples document from a path, bytes, a file object or lines.

    Duplicate triples are collapsed.  Any malformed line raises
    :class:`ParseError` carrying the 1-based line number.
    """
    dictionary = dictionary if dictionary is not None else Dictionary()
    triples = set()
    for lineno, text in enumerate(_lines(source), start=1):
        t = parse_ntriples_line(text, dictionary, lineno)
        if t is not None:
            triples.add(t)
    return RdfGraph(triples, dictionary)


def serialize_ntriples(graph: RdfGraph, sink: TextIO | None = None) -> str:
    """Write ``graph`` as N-Triples sorted lexically; returns the text."""
    lex = graph.dictionary.lookup
    lines = sorted(f"{lex(s)} {lex(p)} {lex(o)} .\n" for s, p, o in graph)
    text = "".join(lines)
    if sink is not None:
        sink.write(text)
    return text


def match(graph: RdfGraph, pattern: Pattern) -> Iterator[Triple]:
    return graph.match(pattern)
