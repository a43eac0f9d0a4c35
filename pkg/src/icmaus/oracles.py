"""Brute-force reference implementations used to check the engine.

Legality and scoring are re-derived here from the rules rather than
imported, so a disagreement with the engine points at a real bug. Only
the canonical form and the ranking order are shared, since those define
what "the same answer" means.
"""
from __future__ import annotations

import itertools
import math
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .alignment import Alignment, CDScore, order_columns
from .coding import CostModel
from .patterns import Pattern, PatternStore
from .search import rank_key

MAX_ROWS = 4
MAX_PATTERN_LEN = 6

Cell = Tuple[int, int]


class OracleBoundsError(ValueError):
    pass


def _legal(rows: Sequence[Pattern], columns: Sequence[Sequence[Cell]]) -> bool:
    owner: Dict[Cell, int] = {}
    for c, col in enumerate(columns):
        for cell in col:
            owner[cell] = c
    for c, col in enumerate(columns):
        row_ids = [r for r, _ in col]
        if len(set(row_ids)) < len(row_ids):
            return False
        if len({rows[r].symbols[p].name for r, p in col}) != 1:
            return False
        slots = [(rows[r].id, p) for r, p in col if r]
        if len(set(slots)) < len(slots):
            return False
        ids = [r for r, p in col if r and rows[r].is_id(p)]
        if len(ids) > 1:
            return False
        if len(col) > 1 and 0 not in row_ids and not ids:
            return False
    # an X .. #X pair of ID symbols hangs from one row at most
    for r in range(1, len(rows)):
        names = rows[r].names
        for i in rows[r].id_positions:
            if names[i].startswith("#"):
                continue
            partner = next(
                (j for j in sorted(rows[r].id_positions) if j > i and names[j] == "#" + names[i]), None
            )
            if partner is None:
                continue
            parents = set()
            for p in (i, partner):
                parents |= {q for q, x in columns[owner[(r, p)]] if q and not rows[q].is_id(x)}
            if len(parents) > 1:
                return False
    return True


def _connected(rows: Sequence[Pattern], columns: Sequence[Sequence[Cell]]) -> bool:
    """Every Old row shares a column with some other row, as it must when
    it was added by matching."""
    linked = {r for col in columns if len(col) > 1 for r, _ in col}
    return all(r in linked for r in range(1, len(rows)))


def _acyclic(rows: Sequence[Pattern], columns: Sequence[Sequence[Cell]]) -> bool:
    owner = {cell: c for c, col in enumerate(columns) for cell in col}
    edges = {c: set() for c in range(len(columns))}
    for r, row in enumerate(rows):
        for p in range(1, len(row)):
            edges[owner[(r, p - 1)]].add(owner[(r, p)])
    state = [0] * len(columns)

    def visit(c: int) -> bool:
        state[c] = 1
        for d in edges[c]:
            if state[d] == 1 or (state[d] == 0 and not visit(d)):
                return False
        state[c] = 2
        return True

    return all(state[c] or visit(c) for c in range(len(columns)))


def _structures(rows: Sequence[Pattern]) -> Iterable[List[List[Cell]]]:
    """Every way to put the cells of ``rows`` into columns of equal
    symbols, one cell per row per column. Row order is checked later."""

    def extend(r: int, columns: List[List[Cell]]):
        if r == len(rows):
            yield [list(col) for col in columns]
            return
        row = rows[r]
        n_before = len(columns)

        def place(p: int, used: set):
            if p == len(row):
                yield from extend(r + 1, columns)
                return
            name = row.symbols[p].name
            columns.append([(r, p)])
            yield from place(p + 1, used)
            columns.pop()
            for c in range(n_before):
                col = columns[c]
                if c in used or rows[col[0][0]].symbols[col[0][1]].name != name:
                    continue
                col.append((r, p))
                used.add(c)
                yield from place(p + 1, used)
                used.discard(c)
                col.pop()

        yield from place(0, set())

    yield from extend(0, [])


def _score(rows: Sequence[Pattern], columns: Sequence[Sequence[Cell]], costs: Mapping[str, float]) -> CDScore:
    b_new = math.fsum(
        costs[rows[0].symbols[p].name] for col in columns if len(col) > 1 for r, p in col if r == 0
    )
    b_enc = math.fsum(
        costs[rows[r].symbols[p].name]
        for col in columns
        if len(col) == 1
        for r, p in col
        if r and rows[r].is_id(p)
    )
    return CDScore(b_new, b_enc, b_new - b_enc)


def exhaustive_alignments(
    store: PatternStore,
    model: CostModel,
    max_rows: int = 3,
    max_pattern_len: int = MAX_PATTERN_LEN,
) -> List[Tuple[Alignment, CDScore]]:
    """All legal alignments of at most ``max_rows`` rows (New included),
    best first under the engine's total order."""
    if not 1 <= max_rows <= MAX_ROWS:
        raise OracleBoundsError(f"max_rows must be in 1..{MAX_ROWS}, got {max_rows}")
    if max_pattern_len > MAX_PATTERN_LEN:
        raise OracleBoundsError(f"max_pattern_len is capped at {MAX_PATTERN_LEN}")
    patterns = [store.new] + list(store.old_patterns)
    too_long = [p.id for p in patterns if len(p) > max_pattern_len]
    if too_long:
        raise OracleBoundsError(f"patterns longer than {max_pattern_len}: {too_long}")
    costs = {s.name: model.cost(s) for p in patterns for s in p.symbols}

    found: Dict[object, Tuple[Alignment, CDScore]] = {}
    for n_old in range(max_rows):
        for combo in itertools.combinations_with_replacement(store.old_patterns, n_old):
            rows = (store.new,) + combo
            for columns in _structures(rows):
                if not (_connected(rows, columns) and _acyclic(rows, columns) and _legal(rows, columns)):
                    continue
                a = Alignment(rows, order_columns(rows, [tuple(col) for col in columns]))
                found.setdefault(a.canonical, (a, _score(rows, columns, costs)))
    return sorted(found.values(), key=lambda item: rank_key(*item))


def independent_cd(
    canonical_text: str,
    costs: Mapping[str, float],
    id_positions: Mapping[str, Iterable[int]],
) -> float:
    """cd of an alignment given as canonical text.

    ``costs`` maps symbol names to bits and ``id_positions`` maps each Old
    pattern id to its ID positions; row 0 is New.
    """
    rows: List[str] = []
    cols: List[Tuple[str, List[Cell]]] = []
    for line in canonical_text.splitlines():
        if not line.strip():
            continue
        head, sep, body = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2 or words[0] not in ("row", "col"):
            raise ValueError(f"malformed canonical line {line!r}")
        if words[0] == "row":
            rows.append(body.strip().rsplit("#", 1)[0])
        else:
            name, *cells = body.split()
            if not cells:
                raise ValueError(f"column without cells: {line!r}")
            try:
                cols.append((name, [tuple(int(x) for x in cell.split(":")) for cell in cells]))
            except ValueError:
                raise ValueError(f"malformed cell in {line!r}") from None
    if not rows:
        raise ValueError("no rows")
    ids = {pid: set(pos) for pid, pos in id_positions.items()}
    b_new = 0.0
    b_enc = 0.0
    for name, cells in cols:
        if any(len(cell) != 2 or not 0 <= cell[0] < len(rows) for cell in cells):
            raise ValueError(f"bad cell in column {name}")
        if len(cells) > 1 and any(r == 0 for r, _ in cells):
            b_new += costs[name]
        if len(cells) == 1:
            r, p = cells[0]
            if r and p in ids.get(rows[r], ()):
                b_enc += costs[name]
    return b_new - b_enc
