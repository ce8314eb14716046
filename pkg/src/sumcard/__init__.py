"""Cardinality estimation for conjunctive queries over RDF graph summaries."""

from __future__ import annotations

from .errors import SumcardError
from .estimator import Estimate, expectation, expectation_fast, is_unification_free, qerror_bound, variance
from .query import Query, cardinality, evaluate, parse_query, qerror
from .rdf import Dictionary, RdfGraph, parse_ntriples, serialize_ntriples
from .summary import Summary, count_worlds, is_consistent, merge_buckets, summarize_graph

__version__ = "0.1.0"

__all__ = [
    "Dictionary", "Estimate", "Query", "RdfGraph", "Summary", "SumcardError", "cardinality", "count_worlds",
    "evaluate", "expectation", "expectation_fast", "is_consistent", "is_unification_free", "merge_buckets",
    "parse_ntriples", "parse_query", "qerror", "qerror_bound", "serialize_ntriples", "summarize_graph", "variance",
]
