"""Read an alignment drawing (rows of symbols joined by vertical bars).

Kept apart from the package so figure checks do not go through the engine's
own extension code.

Row lines begin and end with the row number. Bar lines join the tokens
directly above and below each bar; a '|' inside a row line passes a link
through that row untouched.
"""
from __future__ import annotations

import re
from typing import Dict, List, Sequence, Tuple

_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> List[Tuple[int, int, str]]:
    return [(m.start(), m.end(), m.group()) for m in _TOKEN.finditer(line)]


def _at(tokens, x):
    for start, end, text in tokens:
        if start <= x < end:
            return start, end, text
    return None


def parse_drawing(text: str, patterns: Dict[str, Sequence[str]]):
    """Return (row pattern ids, columns) with rows in drawing order.

    ``patterns`` maps pattern id -> symbol names; each drawn row is matched
    to the pattern with the same symbol sequence. Row 0 must be "new".
    Columns are lists of (row, position) cells.
    """
    lines = text.rstrip("\n").split("\n")
    kinds = []  # ("row", index, tokens) or ("bar", None, tokens)
    for line in lines:
        toks = _tokens(line)
        if toks and re.fullmatch(r"\d+", toks[0][2]) and toks[-1][2] == toks[0][2] and len(toks) > 1:
            kinds.append(("row", int(toks[0][2]), toks[1:-1]))
        else:
            kinds.append(("bar", None, toks))

    rows: List[List[Tuple[int, int, str]]] = []
    line_row: Dict[int, int] = {}
    for i, (kind, number, toks) in enumerate(kinds):
        if kind == "row":
            if number != len(rows):
                raise ValueError(f"row {number} out of sequence")
            line_row[i] = number
            rows.append([t for t in toks if t[2] != "|"])

    parent: Dict[Tuple[int, int], Tuple[int, int]] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def cell_of(r, tok):
        return (r, rows[r].index(tok))

    def walk(i, x, step):
        """From bar line i, move up (step -1) or down (+1) to the symbol at x."""
        j = i + step
        while 0 <= j < len(kinds):
            kind, _, toks = kinds[j]
            if kind == "row":
                hit = _at(toks, x)
                if hit is None:
                    raise ValueError(f"bar at line {i} column {x} dangles")
                if hit[2] != "|":
                    return cell_of(line_row[j], hit)
            elif _at(toks, x) is None:
                raise ValueError(f"bar at line {i} column {x} is broken")
            j += step
        raise ValueError(f"bar at line {i} column {x} runs off the drawing")

    for i, (kind, _, toks) in enumerate(kinds):
        if kind != "bar":
            continue
        for start, _, text in toks:
            if text != "|":
                raise ValueError(f"unexpected token {text!r} in a bar line")
            a, b = walk(i, start, -1), walk(i, start, +1)
            parent[find(a)] = find(b)

    ids = []
    for r, toks in enumerate(rows):
        names = tuple(t[2] for t in toks)
        if r == 0:
            if tuple(patterns["new"]) != names:
                raise ValueError("row 0 is not New")
            ids.append("new")
            continue
        found = [pid for pid, syms in patterns.items() if pid != "new" and tuple(syms) == names]
        if len(found) != 1:
            raise ValueError(f"row {r} {' '.join(names)!r} matches {len(found)} patterns")
        ids.append(found[0])

    groups: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for r, toks in enumerate(rows):
        for p in range(len(toks)):
            groups.setdefault(find((r, p)), []).append((r, p))
    columns = [sorted(g) for g in groups.values()]
    for col in columns:
        names = {rows[r][p][2] for r, p in col}
        if len(names) != 1:
            raise ValueError(f"bar joins different symbols {sorted(names)}")
    return ids, columns
