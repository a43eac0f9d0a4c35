"""Compression by multiple alignment of symbol patterns.

A New pattern is aligned against a store of Old patterns; alignments are
scored by how many bits they save, and the best ones serve as parses,
table lookups, inferences and retrievals.
"""
from __future__ import annotations

from .alignment import (
    Alignment,
    CanonicalForm,
    CDScore,
    ExtensionError,
    Violation,
    build_alignment,
    canonicalize,
    compression_difference,
    extend_with_pattern,
    parse_canonical,
    read_result,
    unify,
    validate_alignment,
)
from .coding import (
    CostModel,
    Encoding,
    RetrievalError,
    alignment_probabilities,
    build_cost_model,
    derive_encoding,
    retrieve_by_code,
)
from .io import load_fixture, parse_grammar_file, render_alignment, serialize_patterns
from .matcher import PairwiseMatch, pairwise_match_kbest
from .patterns import (
    NEW,
    OLD,
    FormatError,
    Pattern,
    PatternStore,
    Symbol,
    SymbolTable,
    add_pattern,
    intern_symbol,
    symbol_frequencies,
)
from .search import SearchOutcome, SearchParams, beam_search

__version__ = "0.1.0"
