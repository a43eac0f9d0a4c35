"""Beam search that grows multiple alignments of New against Old."""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .alignment import (
    Alignment,
    CDScore,
    ExtensionError,
    compression_difference,
    content_rows,
    extend_with_pattern,
)
from .coding import CostModel
from .matcher import kbest_from_options, quantize
from .patterns import Pattern, PatternStore

log = logging.getLogger(__name__)

# most alignments per (row multiset, New coverage) kept in one beam
_SIGNATURE_CAP = 6


@dataclass(frozen=True)
class SearchParams:
    beam_width: int = 50
    kbest_per_pair: int = 10
    max_cycles: int = 8
    max_rows: int = 12
    require_full_new_coverage: bool = False
    left_to_right: bool = True

    def __post_init__(self):
        for name in ("beam_width", "kbest_per_pair", "max_cycles", "max_rows"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def replace(self, **changes) -> "SearchParams":
        return dataclasses.replace(self, **changes)


@dataclass
class SearchOutcome:
    ranked: List[Tuple[Alignment, CDScore]]
    cycles_run: int
    candidates_examined: int
    final_beam: List[Tuple[Alignment, CDScore]] = field(default_factory=list)

    @property
    def best(self) -> Tuple[Alignment, CDScore]:
        return self.ranked[0]


def rank_key(a: Alignment, score: CDScore):
    """Total order: higher cd, then fewer rows, then more matched cells,
    then fewer cells in all, then fewer linked row pairs, then canonical
    form."""
    return (-quantize(score.cd), len(a.rows), -a.matched_cells, a.cell_count, a.row_links, a.canonical)


def _prefix_covered(a: Alignment) -> int:
    n = 0
    for covered in a.new_coverage():
        if not covered:
            break
        n += 1
    return n


@dataclass
class _Candidate:
    cd: float
    matched: int
    prefix: int
    signature: tuple
    parent: Alignment
    pattern: Pattern
    pairs: tuple


class _ColumnView:
    """Per-column facts about an alignment that drive extension gains."""

    def __init__(self, a: Alignment, model: CostModel):
        self.by_name: Dict[str, List[int]] = {}
        self.bonus: List[float] = []
        self.has_new: List[bool] = []
        self.has_id: List[bool] = []
        self.single: List[bool] = []
        self.slots: List[set] = []
        for c, col in enumerate(a.columns):
            sym = a.symbol(c)
            self.by_name.setdefault(sym.name, []).append(c)
            has_new = col[0][0] == 0
            is_id = a.is_id_column(c)
            single = len(col) == 1
            # a lone New cell gains its cost once matched; a lone Old ID
            # cell stops being code once matched
            self.bonus.append(model.cost(sym) if single and (has_new or is_id) else 0.0)
            self.has_new.append(has_new)
            self.has_id.append(is_id)
            self.single.append(single)
            self.slots.append({(a.rows[r].id, p) for r, p in col if r > 0})
        # a bracket pair X .. #X that already hangs from a row takes no
        # further content
        self.content_rows = [content_rows(a, c) for c in range(len(a.columns))]
        self.closed = [False] * len(a.columns)
        for r in range(1, len(a.rows)):
            for i, j in a.rows[r].id_pairs:
                ci, cj = a.cell_column[(r, i)], a.cell_column[(r, j)]
                if self.content_rows[ci] or self.content_rows[cj]:
                    self.closed[ci] = self.closed[cj] = True
        self.ancestors = a.ancestors
        self.covered = a.new_coverage()
        self.track = [col[0][1] if col[0][0] == 0 else -1 for col in a.columns]
        self.gaps = [0]
        for covered in self.covered:
            self.gaps.append(self.gaps[-1] + (not covered))


def _options(view: _ColumnView, pattern: Pattern, costs: List[float]):
    options = []
    for j, sym in enumerate(pattern.symbols):
        own_id = pattern.is_id(j)
        row = []
        for c in view.by_name.get(sym.name, ()):
            if (pattern.id, j) in view.slots[c]:
                continue
            # a column takes at most one ID symbol and needs New or an ID
            if own_id and view.has_id[c]:
                continue
            if not (view.has_new[c] or view.has_id[c] or own_id):
                continue
            if not own_id and view.closed[c]:
                continue
            row.append((c, view.bonus[c] + (costs[j] if own_id else 0.0)))
        options.append(row)
    return options


def _pairs_whole(view: _ColumnView, pattern: Pattern, pairs) -> bool:
    """False when the match hangs the two halves of one of ``pattern``'s
    bracket pairs from different rows."""
    if not pattern.id_pairs:
        return True
    at = {j: c for c, j in pairs}
    for i, j in pattern.id_pairs:
        parents = set()
        for p in (i, j):
            if p in at:
                parents |= view.content_rows[at[p]]
        if len(parents) > 1:
            return False
    return True


def beam_search(store: PatternStore, model: CostModel, params: Optional[SearchParams] = None) -> SearchOutcome:
    params = params or SearchParams()
    seed = Alignment.of_new(store.new)
    seed_score = compression_difference(seed, model)
    scores: Dict[Alignment, CDScore] = {seed: seed_score}
    pool: Dict[object, Tuple[Alignment, CDScore]] = {seed.canonical: (seed, seed_score)}

    old = list(store.old_patterns)
    pattern_costs = {p.id: [model.cost(s) for s in p.symbols] for p in old}
    pattern_id_cost = {
        p.id: sum(c for j, c in enumerate(pattern_costs[p.id]) if p.is_id(j)) for p in old
    }

    # no alignment can save more than every bit of New
    ceiling = quantize(sum(model.cost(sym) for sym in store.new.symbols))
    incumbent = quantize(seed_score.cd)

    frontier = [seed]
    cycles = 0
    examined = 0
    for _ in range(params.max_cycles):
        candidates: List[_Candidate] = []
        for a in frontier:
            if len(a.rows) >= params.max_rows:
                continue
            view = _ColumnView(a, model)
            parent_cd = scores[a].cd
            parent_matched = a.matched_cells
            row_ids = tuple(r.id for r in a.rows[1:])
            for pattern in old:
                costs = pattern_costs[pattern.id]
                options = _options(view, pattern, costs)
                if params.left_to_right:
                    matches = kbest_from_options(
                        view.ancestors, options, params.kbest_per_pair, view.track, view.gaps
                    )
                else:
                    matches = kbest_from_options(view.ancestors, options, params.kbest_per_pair)
                for m in matches:
                    if not m.pairs or not _pairs_whole(view, pattern, m.pairs):
                        continue
                    matched = parent_matched + len(m.pairs) + sum(view.single[c] for c, _ in m.pairs)
                    covered = list(view.covered)
                    for c, _ in m.pairs:
                        r, p = a.columns[c][0]
                        if r == 0:
                            covered[p] = True
                    prefix = 0
                    while prefix < len(covered) and covered[prefix]:
                        prefix += 1
                    signature = (tuple(sorted(row_ids + (pattern.id,))), tuple(covered))
                    cd = parent_cd + m.gain - pattern_id_cost[pattern.id]
                    candidates.append(_Candidate(cd, matched, prefix, signature, a, pattern, m.pairs))
        if not candidates:
            break
        cycles += 1
        examined += len(candidates)
        frontier = _select(candidates, params, scores, model)
        for a in frontier:
            pool.setdefault(a.canonical, (a, scores[a]))
        log.debug("cycle %d: %d candidates, best cd %.3f", cycles, len(candidates),
                  scores[frontier[0]].cd if frontier else float("nan"))
        if not frontier:
            break
        incumbent = max(incumbent, quantize(scores[frontier[0]].cd))
        if incumbent >= ceiling:
            break

    ranked = sorted(pool.values(), key=lambda item: rank_key(*item))
    if params.require_full_new_coverage:
        ranked = [item for item in ranked if all(item[0].new_coverage())]
    final = [(a, scores[a]) for a in frontier] if cycles else [(seed, seed_score)]
    return SearchOutcome(ranked[: params.beam_width], cycles, examined, final)


def _select(candidates: List[_Candidate], params: SearchParams, scores, model) -> List[Alignment]:
    """Materialise candidates best-first until the beam is full."""

    def cheap_key(cand: _Candidate):
        if params.left_to_right:
            return (-quantize(cand.cd), -cand.prefix, -cand.matched)
        return (-quantize(cand.cd), -cand.matched)

    candidates.sort(key=cheap_key)
    chosen: Dict[object, Alignment] = {}
    per_signature: Dict[tuple, int] = {}
    cutoff = None
    for cand in candidates:
        key = cheap_key(cand)
        if cutoff is not None and key != cutoff:
            break
        # keep the beam from filling up with variants of one row set
        if per_signature.get(cand.signature, 0) >= _SIGNATURE_CAP:
            continue
        try:
            a = extend_with_pattern(cand.parent, cand.pattern, cand.pairs, check=False)
        except ExtensionError:
            continue
        canon = a.canonical
        if canon in chosen:
            continue
        chosen[canon] = a
        per_signature[cand.signature] = per_signature.get(cand.signature, 0) + 1
        scores[a] = compression_difference(a, model)
        if len(chosen) >= params.beam_width and cutoff is None:
            cutoff = key

    def full_key(a: Alignment):
        s = scores[a]
        head = (-quantize(s.cd),)
        if params.left_to_right:
            head += (-_prefix_covered(a),)
        return head + (-a.matched_cells, a.row_links, a.canonical)

    return sorted(chosen.values(), key=full_key)[: params.beam_width]
