"""Partition bases and the expectation, variance and bound formulas."""

from __future__ import annotations

from .core import (GENERAL, UNIFICATION_FREE, Estimate, bound_from_moments, coeff_C, doubled, estimate, expectation,
                   expectation_fast, expectation_general, factor_F, falling, is_satisfied, is_unification_free,
                   mu_query, qerror_bound, satisfied_partitions, summary_answers, unifiable, variance, variance_of)
from .partitions import (DEFAULT_ATOM_CAP, Partition, PartitionBase, is_unifiable, mobius, partition_base,
                         set_partitions)
from ..query import term_key


def term_order():
    """Sort key of the fixed total order on terms: resources by id, then variables by id."""
    return term_key


__all__ = [
    "DEFAULT_ATOM_CAP", "GENERAL", "UNIFICATION_FREE", "Estimate", "Partition", "PartitionBase",
    "bound_from_moments", "coeff_C", "doubled", "estimate", "expectation", "expectation_fast",
    "expectation_general", "factor_F", "falling", "is_satisfied", "is_unifiable", "is_unification_free",
    "mobius", "mu_query", "partition_base", "qerror_bound", "satisfied_partitions", "set_partitions",
    "summary_answers", "term_order", "unifiable", "variance", "variance_of",
]
