"""k-best order-preserving matching of two symbol sequences.

The core routine works on a partially ordered left side (the columns of
an alignment) so the search can match a pattern against an alignment
without committing to one arbitrary linearisation of its columns. A plain
sequence is the special case of a total order.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .coding import CostModel

Pair = Tuple[int, int]
WeightFn = Callable[[int, int], Optional[float]]


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class PairwiseMatch:
    pairs: Tuple[Pair, ...]
    gain: float

    def sort_key(self):
        return match_key(self.pairs, quantize(self.gain))

    def transpose(self) -> "PairwiseMatch":
        return PairwiseMatch(tuple(sorted((r, l) for l, r in self.pairs)), self.gain)


def quantize(gain: float) -> int:
    """Gains compare as integer nanobits, so equal-valued sums tie exactly
    whatever order they were added in."""
    return round(gain * 1e9)


def match_key(pairs, qgain: int):
    return (-qgain, -len(pairs), pairs)


def kbest_embeddings(
    n_left: int,
    ancestors: Sequence[int],
    n_right: int,
    weight: WeightFn,
    k: int,
) -> List[PairwiseMatch]:
    """Top-k injective, order-preserving maps from right positions to left nodes.

    ``ancestors[i]`` is a bitmask of the left nodes that must precede node
    ``i``. A map is order preserving when no node chosen for a later right
    position precedes a node chosen for an earlier one. ``weight(i, j)``
    gives the gain of pairing left ``i`` with right ``j`` or None when the
    pair is not allowed.

    Dynamic programming over right positions; the state is the down-closed
    set of left nodes that later pairs may no longer use, and each state
    keeps its k best partial matches.
    """
    options: List[List[Tuple[int, float]]] = []
    for j in range(n_right):
        row = []
        for i in range(n_left):
            w = weight(i, j)
            if w is not None:
                row.append((i, w))
        options.append(row)
    return kbest_from_options(ancestors, options, k)


def kbest_from_options(
    ancestors: Sequence[int],
    options: Sequence[Sequence[Tuple[int, float]]],
    k: int,
    track: Optional[Sequence[int]] = None,
    gaps: Optional[Sequence[int]] = None,
) -> List[PairwiseMatch]:
    """As kbest_embeddings, with the allowed pairs precomputed per right
    position as ``(left index, gain)`` lists.

    ``track`` optionally places some left nodes on a line (-1 for nodes
    off it) and ``gaps[x]`` counts the holes on that line before ``x``.
    Two successive tracked nodes in a match may then straddle a hole only
    when their right positions are not adjacent either, leaving room for
    something else to fill the hole later.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    # entries are (-quantized gain, -pair count, pairs, gain) so that plain
    # tuple order is the match order. A state is the down-set plus whether
    # the previous right position went to a tracked node; that node is then
    # the highest tracked node in the down-set, since the line is a chain.
    line_mask = 0
    if track is not None:
        for i, x in enumerate(track):
            if x >= 0:
                line_mask |= 1 << i
    rows = [[(i, w, quantize(w), line_mask >> i & 1) for i, w in row] for row in options]
    # rest[j]: the most any match can still gain from right position j on
    rest = [0] * (len(rows) + 1)
    for j in range(len(rows) - 1, -1, -1):
        rest[j] = rest[j + 1] + max((q for _, _, q, _ in rows[j]), default=0)
    # every partial match is also a complete one, so the k-th best gain held
    # anywhere bounds what a partial must still be able to reach
    floor = None
    states: Dict[Tuple[int, bool], List[tuple]] = {(0, False): [(0, 0, (), 0.0)]}
    for j, row in enumerate(rows):
        reach = rest[j + 1]
        nxt: Dict[Tuple[int, bool], List[tuple]] = {}
        for (down, adjacent), partials in states.items():
            if floor is not None:
                partials = [e for e in partials if rest[j] - e[0] >= floor]
                if not partials:
                    continue
            key = (down, False)
            if key in nxt:
                nxt[key].extend(partials)
            else:
                nxt[key] = list(partials)
            hole_floor = None
            if adjacent:
                last = track[(down & line_mask).bit_length() - 1]
                hole_floor = gaps[last + 1]
            for i, w, q, tracked in row:
                if down >> i & 1:
                    continue
                if tracked and hole_floor is not None and gaps[track[i]] != hole_floor:
                    continue
                if floor is not None:
                    cut = floor - q - reach
                    fresh = [
                        (neg_q - q, neg_len - 1, pairs + ((i, j),), gain + w)
                        for neg_q, neg_len, pairs, gain in partials
                        if -neg_q >= cut
                    ]
                else:
                    fresh = [
                        (neg_q - q, neg_len - 1, pairs + ((i, j),), gain + w)
                        for neg_q, neg_len, pairs, gain in partials
                    ]
                if fresh:
                    after = (down | ancestors[i] | (1 << i), tracked == 1)
                    if after in nxt:
                        nxt[after].extend(fresh)
                    else:
                        nxt[after] = fresh
        held = []
        for state, bucket in nxt.items():
            if len(bucket) > k:
                bucket = nxt[state] = heapq.nsmallest(k, bucket)
            held.extend(e[0] for e in bucket)
        if len(held) >= k:
            floor = -heapq.nsmallest(k, held)[-1]
        states = nxt

    final = heapq.nsmallest(k, (e for bucket in states.values() for e in bucket))
    return [PairwiseMatch(e[2], e[3]) for e in final]


def pairwise_match_kbest(left, right, model: CostModel, k: int = 1) -> List[PairwiseMatch]:
    """Up to k best matches between two sequences; gain is the cost of the
    matched left symbols.

    O(len(left) * len(right) * k): ``ending[j]`` holds the best matches
    whose last pair is (i, j) for the current left index i, ``below[j]``
    the best matches using only left[:i] and right[:j + 1]. The sets merged
    at each step are disjoint, so no match is counted twice.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    m = len(right)
    below: List[List[tuple]] = [[] for _ in range(m)]
    for i, sym in enumerate(left):
        w = model.cost(sym)
        q = quantize(w)
        row: List[List[tuple]] = []
        same_row: List[tuple] = []
        for j in range(m):
            if right[j] == sym:
                ending = [((-q, -1, ((i, j),), w))]
                if j:
                    ending += [
                        (neg_q - q, neg_len - 1, pairs + ((i, j),), gain + w)
                        for neg_q, neg_len, pairs, gain in below[j - 1]
                    ]
                same_row = heapq.nsmallest(k, same_row + ending)
            row.append(heapq.nsmallest(k, below[j] + same_row))
        below = row
    final = heapq.nsmallest(k, (below[-1] if m else []) + [(0, 0, (), 0.0)])
    return [PairwiseMatch(e[2], e[3]) for e in final]


def brute_force_match(left, right, model: CostModel) -> List[PairwiseMatch]:
    """Every order-preserving equal-symbol matching, best first."""
    if len(left) > 10 or len(right) > 10:
        raise OracleSizeError(f"oracle limited to length 10, got {len(left)} x {len(right)}")
    found = []

    def walk(j: int, last_i: int, pairs: Tuple[Pair, ...]):
        if j == len(right):
            found.append(pairs)
            return
        walk(j + 1, last_i, pairs)
        for i in range(last_i + 1, len(left)):
            if left[i] == right[j]:
                walk(j + 1, i, pairs + ((i, j),))

    walk(0, -1, ())
    scored = []
    for pairs in found:
        gain, q = 0.0, 0
        for i, _ in pairs:
            gain += model.cost(left[i])
            q += quantize(model.cost(left[i]))
        scored.append((match_key(pairs, q), PairwiseMatch(pairs, gain)))
    scored.sort(key=lambda item: item[0])
    return [m for _, m in scored]
