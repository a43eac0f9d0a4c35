"""Symbol costs, encodings of New, and retrieval by code."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from .patterns import Symbol


class RetrievalError(RuntimeError):
    pass


@dataclass(frozen=True)
class CostModel:
    probs: Mapping[int, float]
    costs: Mapping[int, float]

    def cost(self, symbol: Symbol) -> float:
        return self.costs[symbol.type_id]

    def __contains__(self, symbol: Symbol) -> bool:
        return symbol.type_id in self.costs


def build_cost_model(freqs: Mapping[int, int]) -> CostModel:
    """Shannon costs from weighted counts: rare symbols get longer codes."""
    counts = {t: c for t, c in freqs.items() if c > 0}
    if not counts:
        raise ValueError("empty frequency table")
    total = sum(counts.values())
    probs = {t: c / total for t, c in counts.items()}
    # -log2(1) is -0.0; normalise so costs are never negative zero
    costs = {t: -math.log2(p) + 0.0 for t, p in probs.items()}
    return CostModel(probs, costs)


@dataclass(frozen=True)
class Encoding:
    code_symbols: Tuple[Symbol, ...]
    source_alignment_id: str
    bits: float

    def __str__(self) -> str:
        return " ".join(s.name for s in self.code_symbols)


def derive_encoding(a, model: CostModel) -> Encoding:
    """The code for New implied by alignment ``a``.

    A column contributes its symbol when it holds a single cell, that cell
    is not from New, and it sits at an ID position of its pattern: an
    identifier that nothing else in the alignment accounts for.
    """
    code: List[Symbol] = []
    for col in a.columns:
        if len(col) != 1:
            continue
        row, pos = col[0]
        if row == 0:
            continue
        pattern = a.rows[row]
        if pattern.is_id(pos):
            code.append(pattern.symbols[pos])
    bits = math.fsum(model.cost(s) for s in code)
    return Encoding(tuple(code), a.identifier, bits)


def alignment_probabilities(scored: Sequence) -> List[float]:
    """Relative probabilities proportional to 2**cd over the given set.

    Accepts ``(alignment, score)`` pairs where score is a CDScore or a
    float.
    """
    if not scored:
        raise ValueError("no alignments to weigh")
    cds = []
    for _, score in scored:
        cd = getattr(score, "cd", score)
        if not math.isfinite(cd):
            raise ValueError(f"non-finite compression difference {cd!r}")
        cds.append(cd)
    top = max(cds)
    weights = [2.0 ** (cd - top) for cd in cds]
    total = math.fsum(weights)
    return [w / total for w in weights]


def retrieve_by_code(enc, store, params=None):
    """Decompress by compressing: run the code itself as New and unify.

    ``enc`` may be an Encoding or a plain sequence of symbol names.
    """
    from .alignment import unify
    from .search import SearchParams, beam_search

    names = [getattr(s, "name", s) for s in getattr(enc, "code_symbols", enc)]
    if not names:
        raise RetrievalError("nothing to retrieve")
    for n in names:
        if n not in store.symbol_table:
            raise RetrievalError(f"code symbol {n!r} is unknown to Old")
    query = store.with_new(names)
    params = params or SearchParams()
    params = params.replace(require_full_new_coverage=True)
    from .patterns import symbol_frequencies

    outcome = beam_search(query, build_cost_model(symbol_frequencies(query)), params)
    if not outcome.ranked or len(outcome.ranked[0][0].rows) < 2:
        raise RetrievalError(f"no alignment encodes all of {' '.join(names)!r}")
    return unify(outcome.ranked[0][0])


__all__ = [
    "CostModel",
    "Encoding",
    "RetrievalError",
    "alignment_probabilities",
    "build_cost_model",
    "derive_encoding",
    "retrieve_by_code",
]
