"""Multiple alignments: construction, legality, unification and scoring.

An alignment is a tuple of rows (row 0 is New, the rest are occurrences of
Old patterns; a pattern may occur more than once) and a tuple of columns.
Each column is a sorted tuple of ``(row, position)`` cells holding the same
symbol. Columns are stored in a topological order consistent with every
row.
"""
from __future__ import annotations

import hashlib
import heapq
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coding import CostModel, derive_encoding
from .patterns import Pattern, Symbol

Cell = Tuple[int, int]
Column = Tuple[Cell, ...]


class ExtensionError(ValueError):
    """An extension would produce an illegal alignment."""


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    row: Optional[int] = None
    column: Optional[int] = None

    def __str__(self) -> str:
        where = []
        if self.row is not None:
            where.append(f"row {self.row}")
        if self.column is not None:
            where.append(f"column {self.column}")
        suffix = f" ({', '.join(where)})" if where else ""
        return f"{self.rule}: {self.message}{suffix}"


@dataclass(frozen=True)
class Alignment:
    rows: Tuple[Pattern, ...]
    columns: Tuple[Column, ...]

    @classmethod
    def of_new(cls, new: Pattern) -> "Alignment":
        return cls((new,), tuple(((0, p),) for p in range(len(new))))

    @cached_property
    def cell_column(self) -> Dict[Cell, int]:
        return {cell: c for c, col in enumerate(self.columns) for cell in col}

    def symbol(self, c: int) -> Symbol:
        r, p = self.columns[c][0]
        return self.rows[r].symbols[p]

    def has_new(self, c: int) -> bool:
        return self.columns[c][0][0] == 0

    def is_id_column(self, c: int) -> bool:
        return any(r > 0 and self.rows[r].is_id(p) for r, p in self.columns[c])

    @cached_property
    def ancestors(self) -> Tuple[int, ...]:
        """Bitmask per column of every column that must precede it."""
        preds = _predecessors(self.rows, self.columns, self.cell_column)
        anc = [0] * len(self.columns)
        for c in range(len(self.columns)):
            mask = 0
            for p in preds[c]:
                mask |= anc[p] | (1 << p)
            anc[c] = mask
        return tuple(anc)

    @cached_property
    def canonical(self) -> "CanonicalForm":
        return canonicalize(self)

    @cached_property
    def identifier(self) -> str:
        digest = hashlib.sha1(self.canonical.text().encode("utf-8")).hexdigest()
        return f"aln-{digest[:12]}"

    @cached_property
    def matched_cells(self) -> int:
        return sum(len(col) for col in self.columns if len(col) > 1)

    @cached_property
    def cell_count(self) -> int:
        return sum(len(r) for r in self.rows)

    @cached_property
    def row_links(self) -> int:
        """Number of distinct row pairs that share a column."""
        links = set()
        for col in self.columns:
            rows = [r for r, _ in col]
            for x in range(len(rows)):
                for y in range(x + 1, len(rows)):
                    links.add((rows[x], rows[y]))
        return len(links)

    def new_coverage(self) -> Tuple[bool, ...]:
        """Per New position, whether it sits in a multi-cell column."""
        covered = [False] * len(self.rows[0])
        for col in self.columns:
            if len(col) > 1 and col[0][0] == 0:
                covered[col[0][1]] = True
        return tuple(covered)

    def __str__(self) -> str:
        from .io import render_alignment

        return render_alignment(self)


def _predecessors(rows, columns, cell_column) -> List[List[int]]:
    preds: List[set] = [set() for _ in columns]
    for r, pattern in enumerate(rows):
        for p in range(1, len(pattern)):
            preds[cell_column[(r, p)]].add(cell_column[(r, p - 1)])
    return [sorted(s) for s in preds]


def order_columns(rows: Sequence[Pattern], columns: Iterable[Column]) -> Tuple[Column, ...]:
    """Topologically order columns; ties go to the column with the smallest cell.

    Raises ExtensionError when the rows impose a cycle.
    """
    cols = [tuple(sorted(col)) for col in columns]
    cell_column = {cell: c for c, col in enumerate(cols) for cell in col}
    succs: List[set] = [set() for _ in cols]
    indeg = [0] * len(cols)
    for r, pattern in enumerate(rows):
        for p in range(1, len(pattern)):
            a, b = cell_column[(r, p - 1)], cell_column[(r, p)]
            if b not in succs[a]:
                succs[a].add(b)
                indeg[b] += 1
    heap = [(cols[c][0], c) for c in range(len(cols)) if indeg[c] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, c = heapq.heappop(heap)
        out.append(cols[c])
        for s in succs[c]:
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(heap, (cols[s][0], s))
    if len(out) != len(cols):
        raise ExtensionError("columns cross: no order is consistent with every row")
    return tuple(out)


def build_alignment(rows: Sequence[Pattern], columns: Iterable[Column]) -> Alignment:
    a = Alignment(tuple(rows), order_columns(rows, columns))
    problem = validate_alignment(a)
    if problem is not None:
        raise ExtensionError(str(problem))
    return a


def validate_alignment(a: Alignment) -> Optional[Violation]:
    """None when ``a`` is legal, otherwise the first rule it breaks."""
    if not a.rows:
        return Violation("empty", "alignment has no rows")
    seen = {}
    for c, col in enumerate(a.columns):
        if not col:
            return Violation("empty column", "column has no cells", column=c)
        for r, p in col:
            if not (0 <= r < len(a.rows) and 0 <= p < len(a.rows[r])):
                return Violation("cell range", f"cell {r}:{p} does not exist", row=r, column=c)
            if (r, p) in seen:
                return Violation("coverage", f"cell {r}:{p} appears twice", row=r, column=c)
            seen[(r, p)] = c
    for r, pattern in enumerate(a.rows):
        for p in range(len(pattern)):
            if (r, p) not in seen:
                return Violation("coverage", f"cell {r}:{p} is in no column", row=r)
    for c, col in enumerate(a.columns):
        rows_here = [r for r, _ in col]
        if len(set(rows_here)) != len(rows_here):
            return Violation("row repeat", "two cells from one row", row=rows_here[0], column=c)
        names = {a.rows[r].symbols[p].name for r, p in col}
        if len(names) > 1:
            return Violation("symbol mismatch", f"symbols {sorted(names)} share a column", column=c)
        slots = [(a.rows[r].id, p) for r, p in col if r > 0]
        if len(set(slots)) != len(slots):
            return Violation("self match", "a pattern position is matched with itself", column=c)
        n_ids = sum(1 for r, p in col if r > 0 and a.rows[r].is_id(p))
        if n_ids > 1:
            return Violation("id clash", "two ID symbols share a column", column=c)
        if len(col) > 1 and 0 not in rows_here and not n_ids:
            return Violation(
                "unanchored", "Old content symbols matched without New or an ID symbol", column=c
            )
    for r in range(1, len(a.rows)):
        for i, j in a.rows[r].id_pairs:
            if len(pair_parents(a, r, i, j)) > 1:
                return Violation("split pair", f"bracket pair {i},{j} hangs from two rows", row=r)
    for r, pattern in enumerate(a.rows):
        last = -1
        for p in range(len(pattern)):
            c = seen[(r, p)]
            if c <= last:
                return Violation("column order", f"position {p} is out of order", row=r, column=c)
            last = c
    return None


def content_rows(a: Alignment, c: int) -> set:
    """Old rows holding a content (non-ID) cell in column ``c``."""
    return {r for r, p in a.columns[c] if r > 0 and not a.rows[r].is_id(p)}


def pair_parents(a: Alignment, r: int, i: int, j: int) -> set:
    """Rows whose content matches either half of row ``r``'s pair ``(i, j)``."""
    return content_rows(a, a.cell_column[(r, i)]) | content_rows(a, a.cell_column[(r, j)])


def extend_with_pattern(a: Alignment, pattern: Pattern, match, check: bool = True) -> Alignment:
    """Add ``pattern`` as a new row, merging matched cells into columns.

    ``match`` is a PairwiseMatch (or pair sequence) of
    ``(column index in a, position in pattern)``. The search passes
    ``check=False`` for pairs it has already filtered for legality.
    """
    pairs = getattr(match, "pairs", match)
    r = len(a.rows)
    cols = [list(col) for col in a.columns]
    matched = {}
    for c, p in pairs:
        if not (0 <= c < len(cols) and 0 <= p < len(pattern)):
            raise ExtensionError(f"pair ({c}, {p}) out of range")
        if p in matched:
            raise ExtensionError(f"position {p} matched twice")
        matched[p] = c
    for p in range(len(pattern)):
        if p in matched:
            cols[matched[p]].append((r, p))
        else:
            cols.append([(r, p)])
    if not check:
        # caller guarantees legality apart from column order
        rows = a.rows + (pattern,)
        return Alignment(rows, order_columns(rows, cols))
    return build_alignment(a.rows + (pattern,), cols)


def unify(a: Alignment) -> Pattern:
    symbols = tuple(a.symbol(c) for c in range(len(a.columns)))
    ids = frozenset(c for c in range(len(a.columns)) if a.is_id_column(c))
    return Pattern(f"unified-{a.identifier}", symbols, 1, ids)


@dataclass(frozen=True)
class CDScore:
    b_new: float
    b_enc: float
    cd: float


def compression_difference(a: Alignment, model: CostModel) -> CDScore:
    b_new = math.fsum(
        model.cost(a.symbol(c)) for c, col in enumerate(a.columns) if len(col) > 1 and col[0][0] == 0
    )
    b_enc = derive_encoding(a, model).bits
    return CDScore(b_new, b_enc, b_new - b_enc)


def read_result(a: Alignment) -> List[Symbol]:
    """Symbols from Old rows in columns that New does not reach."""
    return [a.symbol(c) for c, col in enumerate(a.columns) if col[0][0] != 0]


# -- canonical form ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalForm:
    rows: Tuple[Tuple[str, int], ...]
    columns: Tuple[Tuple[str, Column], ...]

    def text(self) -> str:
        lines = [f"row {i}: {pid}#{occ}" for i, (pid, occ) in enumerate(self.rows)]
        for j, (name, cells) in enumerate(self.columns):
            cells_txt = " ".join(f"{r}:{p}" for r, p in cells)
            lines.append(f"col {j}: {name} {cells_txt}")
        return "\n".join(lines) + "\n"


def parse_canonical(text: str) -> CanonicalForm:
    rows, columns = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        head, _, body = line.partition(":")
        kind, _, index = head.partition(" ")
        try:
            if kind == "row":
                pid, _, occ = body.strip().rpartition("#")
                if not pid or int(index) != len(rows):
                    raise ValueError
                rows.append((pid, int(occ)))
            elif kind == "col":
                name, *cells = body.split()
                if int(index) != len(columns) or not cells:
                    raise ValueError
                parsed = tuple(tuple(int(x) for x in cell.split(":")) for cell in cells)
                if any(len(cell) != 2 for cell in parsed):
                    raise ValueError
                columns.append((name, parsed))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"malformed canonical line {lineno}: {line!r}") from None
    if not rows:
        raise ValueError("canonical text has no rows")
    return CanonicalForm(tuple(rows), tuple(columns))


_MAX_TIE_PERMUTATIONS = 5040


def _refined_colors(a: Alignment) -> List[int]:
    """Colour rows by pattern id, then refine by the columns they share."""
    labels = sorted({p.id for p in a.rows[1:]})
    rank = {pid: i + 1 for i, pid in enumerate(labels)}
    colors = [0] + [rank[p.id] for p in a.rows[1:]]
    for _ in range(len(a.rows)):
        col_sig = [tuple(sorted((colors[r], p) for r, p in col)) for col in a.columns]
        row_sig = []
        for r, pattern in enumerate(a.rows):
            row_sig.append(
                (colors[r], tuple(col_sig[a.cell_column[(r, p)]] for p in range(len(pattern))))
            )
        order = {sig: i for i, sig in enumerate(sorted(set(row_sig)))}
        refined = [order[sig] for sig in row_sig]
        stable = len(set(refined)) == len(set(colors))
        colors = refined
        if stable:
            break
    return colors


def canonicalize(a: Alignment) -> CanonicalForm:
    """Row-order independent form: equal iff same occurrences and structure."""
    colors = _refined_colors(a)
    groups: Dict[Tuple[str, int], List[int]] = {}
    for r in range(1, len(a.rows)):
        groups.setdefault((a.rows[r].id, colors[r]), []).append(r)
    keys = sorted(groups)
    tied = [groups[k] for k in keys]

    n_perm = 1
    for g in tied:
        n_perm *= math.factorial(len(g))
    choices = (
        itertools.product(*(itertools.permutations(g) for g in tied))
        if n_perm <= _MAX_TIE_PERMUTATIONS
        else [tuple(tuple(g) for g in tied)]
    )

    best = None
    for choice in choices:
        order = [0] + [r for g in choice for r in g]
        new_index = {old: new for new, old in enumerate(order)}
        occ: Dict[str, int] = {}
        rows = []
        for old in order:
            pid = a.rows[old].id
            occ[pid] = occ.get(pid, 0) + 1
            rows.append((pid, occ[pid]))
        columns = []
        for c, col in enumerate(a.columns):
            cells = tuple(sorted((new_index[r], p) for r, p in col))
            columns.append((a.symbol(c).name, cells))
        columns.sort(key=lambda nc: nc[1])
        form = CanonicalForm(tuple(rows), tuple(columns))
        if best is None or form < best:
            best = form
    return best


def alignment_from_canonical(form: CanonicalForm, patterns: Dict[str, Pattern]) -> Alignment:
    rows = [patterns[pid] for pid, _ in form.rows]
    return build_alignment(rows, [cells for _, cells in form.columns])
