"""Graph partitioners providing the partition component of resource types.

A partitioner takes the graph and the resources to be typed and returns a
partition id per resource.  If a partitioning cuts more than 20% of the
non-rdf:type edges between typed resources, a single partition is used.
"""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path

import networkx as nx

from ..errors import ParseError
from ..rdf import RDF_TYPE, Dictionary, RdfGraph, read_term

MAX_CUT = 0.2


def _edges(g: RdfGraph, resources: set[int]) -> list[tuple[int, int]]:
    rdf_type = g.dictionary.id_of(RDF_TYPE)
    return [(s, o) for s, p, o in g if p != rdf_type and s in resources and o in resources and s != o]


def cut_fraction(g: RdfGraph, parts: Mapping[int, int], resources) -> float:
    edges = _edges(g, set(resources))
    if not edges:
        return 0.0
    return sum(1 for s, o in edges if parts.get(s, 0) != parts.get(o, 0)) / len(edges)


def with_fallback(g: RdfGraph, parts: Mapping[int, int], resources, max_cut: float = MAX_CUT) -> dict[int, int]:
    if cut_fraction(g, parts, resources) > max_cut:
        return {r: 0 for r in resources}
    return {r: parts.get(r, 0) for r in resources}


def single_partition(g: RdfGraph, resources) -> dict[int, int]:
    return {r: 0 for r in resources}


class LabelPropagation:
    """Community detection by asynchronous label propagation, seeded."""

    def __init__(self, seed: int = 0, max_cut: float = MAX_CUT):
        self.seed = seed
        self.max_cut = max_cut

    def __call__(self, g: RdfGraph, resources) -> dict[int, int]:
        resources = sorted(resources)
        graph = nx.Graph()
        graph.add_nodes_from(resources)
        graph.add_edges_from(_edges(g, set(resources)))
        communities = nx.community.asyn_lpa_communities(graph, seed=self.seed)
        ordered = sorted((sorted(c) for c in communities), key=lambda c: c[0])
        parts = {r: i for i, c in enumerate(ordered) for r in c}
        return with_fallback(g, parts, resources, self.max_cut)


class FilePartitioner:
    """Partition ids read from ``<resource>\\t<partition-id>`` lines; unlisted resources get 0."""

    def __init__(self, path: str | Path, max_cut: float = MAX_CUT):
        self.path = Path(path)
        self.max_cut = max_cut

    def read(self, dictionary: Dictionary) -> dict[int, int]:
        out = {}
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                lexical, pos = read_term(line, 0, lineno)
                rest = line[pos:].strip()
                try:
                    part = int(rest)
                except ValueError:
                    raise ParseError(f"bad partition id {rest!r}", lineno, pos + 1) from None
                rid = dictionary.id_of(lexical)
                if rid is not None:
                    out[rid] = part
        return out

    def __call__(self, g: RdfGraph, resources) -> dict[int, int]:
        return with_fallback(g, self.read(g.dictionary), resources, self.max_cut)
