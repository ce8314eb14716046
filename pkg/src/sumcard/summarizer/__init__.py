"""Typed summaries and MinHash refinement."""

from __future__ import annotations

from .minhash import (INFINITY, MinHashScheme, approx_jaccard, jaccard, jaccard_sets, minhash_signature, vicinity,
                      vicinity_index)
from .partitioners import FilePartitioner, LabelPropagation, cut_fraction, single_partition, with_fallback
from .refine import DEFAULT_M, DEFAULT_N, DEFAULT_TARGET, RefineResult, minhash_refine, trivial_summary
from .types import (HistogramSpec, ResourceType, TypeGroup, compute_types, equi_depth, freedman_diaconis,
                    merge_similar_types, merge_types, self_mapped, type_similarity, typed_summary)

__all__ = [
    "DEFAULT_M", "DEFAULT_N", "DEFAULT_TARGET", "INFINITY", "FilePartitioner", "HistogramSpec", "LabelPropagation",
    "MinHashScheme", "RefineResult", "ResourceType", "TypeGroup", "approx_jaccard", "compute_types", "cut_fraction",
    "equi_depth", "freedman_diaconis", "jaccard", "jaccard_sets", "merge_similar_types", "merge_types",
    "minhash_refine", "minhash_signature", "self_mapped", "single_partition", "trivial_summary", "type_similarity",
    "typed_summary", "vicinity", "vicinity_index", "with_fallback",
]
