"""Grammar files, figure-style rendering and the bundled fixtures."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .patterns import NEW, OLD, FormatError, Pattern, PatternStore, add_pattern, check_name

_FREQ = re.compile(r"^\*(.*)$")


@dataclass
class ParsedLine:
    symbols: List[str]
    id_positions: frozenset
    frequency: int = 1


def parse_line(line: str) -> Optional[ParsedLine]:
    """One pattern line, or None for blank and comment lines.

    Groups between '|' bars alternate ID, content, ID, ... starting with ID.
    A line without bars is all content.
    """
    line = line.split("//", 1)[0].strip()
    if not line:
        return None
    tokens = line.split()
    frequency = 1
    m = _FREQ.match(tokens[-1])
    if m:
        try:
            frequency = int(m.group(1))
        except ValueError:
            raise FormatError(f"unparseable frequency {tokens[-1]!r}") from None
        if frequency < 1:
            raise FormatError(f"frequency must be positive, got {frequency}")
        tokens = tokens[:-1]
    if not tokens:
        raise FormatError("empty pattern")
    if "|" not in tokens:
        for t in tokens:
            check_name(t)
        return ParsedLine(tokens, frozenset(), frequency)

    groups: List[List[str]] = [[]]
    for t in tokens:
        if t == "|":
            groups.append([])
        else:
            check_name(t)
            groups[-1].append(t)
    # a leading bar opens with content and a trailing one closes an all-ID
    # pattern; any other empty group is a stray bar
    if len(groups) == 2 and not groups[1]:
        groups.pop()
    if any(not g for g in groups[1:]) or (not groups[0] and len(groups) < 2):
        raise FormatError(f"stray '|' produces an empty group in {line!r}")
    symbols, ids = [], set()
    for k, g in enumerate(groups):
        for t in g:
            if k % 2 == 0:
                ids.add(len(symbols))
            symbols.append(t)
    return ParsedLine(symbols, frozenset(ids), frequency)


def parse_lines(text: str) -> List[ParsedLine]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        try:
            parsed = parse_line(line)
        except FormatError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if parsed is not None:
            out.append(parsed)
    return out


def parse_grammar_file(text: str, store: Optional[PatternStore] = None, destination: str = OLD) -> PatternStore:
    store = store if store is not None else PatternStore()
    for parsed in parse_lines(text):
        add_pattern(store, parsed.symbols, parsed.frequency, parsed.id_positions, destination)
    return store


def format_pattern(p: Pattern) -> str:
    """Inverse of parse_line for one pattern."""
    names = list(p.names)
    if p.id_positions:
        parts: List[str] = []
        want_id = True
        if not p.is_id(0):
            parts.append("|")
            want_id = False
        i = 0
        while i < len(names):
            if p.is_id(i) != want_id:
                parts.append("|")
                want_id = not want_id
                continue
            parts.append(names[i])
            i += 1
        if len(parts) and all(p.is_id(j) for j in range(len(names))):
            parts.append("|")
        text = " ".join(parts)
    else:
        text = " ".join(names)
    if p.frequency != 1:
        text += f" *{p.frequency}"
    return text


def serialize_patterns(patterns: Sequence[Pattern]) -> str:
    return "".join(format_pattern(p) + "\n" for p in patterns)


def load_store(old_text: str, new_text: str) -> PatternStore:
    """Old from one grammar file plus exactly one New pattern."""
    store = parse_grammar_file(old_text)
    news = parse_lines(new_text)
    if not news:
        raise FormatError("empty New")
    if len(news) > 1:
        raise FormatError(f"New must hold one pattern, found {len(news)}")
    add_pattern(store, news[0].symbols, 1, (), NEW)
    return store


# -- context-free rules -------------------------------------------------------


def parse_bnf(text: str) -> List[Tuple[str, List[str]]]:
    """Rules written ``X -> a Y b``; '//' comments; one rule per line."""
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("//", 1)[0].strip()
        if not line:
            continue
        lhs, arrow, rhs = line.partition("->")
        lhs = lhs.strip()
        if not arrow or not lhs or len(lhs.split()) != 1:
            raise FormatError(f"line {lineno}: expected 'X -> ...', got {line!r}")
        rules.append((lhs, rhs.split()))
    return rules


def format_bnf(rules: Sequence[Tuple[str, Sequence[str]]]) -> str:
    return "".join(f"{lhs} -> {' '.join(rhs)}\n" for lhs, rhs in rules)


# -- rendering ------------------------------------------------------------------


def display_order(a) -> List[int]:
    """Row order for printing: New first, then the order that puts the most
    bars between neighbouring rows (earliest such order on ties).

    Exact over subsets up to 12 Old rows, greedy beyond that.
    """
    n = len(a.rows)
    shared = [[0] * n for _ in range(n)]
    for col in a.columns:
        rows_here = [r for r, _ in col]
        for r in rows_here:
            for q in rows_here:
                if r != q:
                    shared[r][q] += 1
    if n <= 1:
        return list(range(n))
    if n - 1 > 12:
        order, left = [0], set(range(1, n))
        while left:
            nxt = min(left, key=lambda r: (-shared[order[-1]][r], r))
            order.append(nxt)
            left.remove(nxt)
        return order

    # best[(mask, last)] = (score, path) over Old rows; path compares
    # lexicographically so ties resolve to the earliest order
    best: Dict[Tuple[int, int], Tuple[int, Tuple[int, ...]]] = {}
    for r in range(1, n):
        best[(1 << r, r)] = (shared[0][r], (r,))
    full = 0
    for r in range(1, n):
        full |= 1 << r
    for mask in range(1, full + 1):
        if mask & 1:
            continue
        for last in range(1, n):
            entry = best.get((mask, last))
            if entry is None:
                continue
            score, path = entry
            for r in range(1, n):
                if mask >> r & 1:
                    continue
                cand = (score + shared[last][r], path + (r,))
                key = (mask | 1 << r, r)
                old = best.get(key)
                if old is None or cand[0] > old[0] or (cand[0] == old[0] and cand[1] < old[1]):
                    best[key] = cand
    finals = [best[(full, r)] for r in range(1, n)]
    top = max(score for score, _ in finals)
    return [0] + list(min(path for score, path in finals if score == top))


def render_alignment(a) -> str:
    order = display_order(a)
    widths = [len(a.symbol(c).name) for c in range(len(a.columns))]
    offsets, pos = [], 0
    for w in widths:
        offsets.append(pos)
        pos += w + 1
    body_w = max(pos - 1, 0)
    label_w = len(str(len(order) - 1))
    pad = " " * (label_w + 2)

    grids: List[Dict[int, str]] = []
    for r in order:
        grids.append({a.cell_column[(r, p)]: sym.name for p, sym in enumerate(a.rows[r].symbols)})

    lines = []
    for k, cells in enumerate(grids):
        if k:
            above = grids[k - 1]
            bar = [" "] * body_w
            for c in cells:
                if c in above:
                    bar[offsets[c] + (widths[c] - 1) // 2] = "|"
            lines.append((pad + "".join(bar)).rstrip())
        row = [" "] * body_w
        for c, name in cells.items():
            row[offsets[c]:offsets[c] + len(name)] = name
        lines.append(f"{str(k).rjust(label_w)}  {''.join(row)}  {k}")
    return "\n".join(lines) + "\n"


# -- bundled fixtures -------------------------------------------------------------

FIXTURES = ("fig1", "fig4", "fig6", "fig8", "fig9", "fig11", "fig13", "fig15", "fig16", "chain-AB-BC")


def fixture_text(name: str) -> str:
    return resources.files("icmaus").joinpath("fixtures").joinpath(name).read_text(encoding="utf-8")


@dataclass
class Fixture:
    name: str
    store: PatternStore
    canonical: str
    params: Dict[str, int] = field(default_factory=dict)


def load_fixture(name: str) -> Fixture:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}")
    store = load_store(fixture_text(f"{name}.old"), fixture_text(f"{name}.new"))
    params: Dict[str, int] = {}
    try:
        for line in fixture_text(f"{name}.params").splitlines():
            key, _, value = line.partition("=")
            if key.strip():
                params[key.strip()] = int(value)
    except FileNotFoundError:
        pass
    try:
        canonical = fixture_text(f"{name}.canonical")
    except FileNotFoundError:
        canonical = ""
    return Fixture(name, store, canonical, params)
