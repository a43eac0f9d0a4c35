"""Interned symbols, patterns and the New/Old pattern store."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

OLD = "old"
NEW = "new"


class FormatError(ValueError):
    """Raised for malformed symbol names or pattern definitions."""


@dataclass(frozen=True)
class Symbol:
    name: str
    type_id: int

    def __str__(self) -> str:
        return self.name


@dataclass
class SymbolTable:
    """name -> (type_id, weighted frequency)."""

    entries: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, name: str) -> Symbol:
        return Symbol(name, self.entries[name][0])

    def frequency(self, name: str) -> int:
        return self.entries[name][1]

    def _bump(self, name: str, amount: int) -> None:
        type_id, count = self.entries[name]
        self.entries[name] = (type_id, count + amount)


def check_name(name: str) -> None:
    if not isinstance(name, str) or not name:
        raise FormatError(f"empty symbol name: {name!r}")
    if "|" in name or any(ch.isspace() for ch in name):
        raise FormatError(f"malformed symbol name: {name!r}")


def intern_symbol(table: SymbolTable, name: str) -> Symbol:
    check_name(name)
    if name not in table.entries:
        table.entries[name] = (len(table.entries), 0)
    return table.lookup(name)


@dataclass(frozen=True)
class Pattern:
    """An ordered, immutable array of symbols.

    ``id_positions`` holds the indices that act as identifiers or
    delimiters (``code`` symbols); every other position is content.
    """

    id: str
    symbols: Tuple[Symbol, ...]
    frequency: int = 1
    id_positions: frozenset = frozenset()

    def __post_init__(self):
        if not self.symbols:
            raise FormatError(f"pattern {self.id} has no symbols")
        if self.frequency < 1:
            raise FormatError(f"pattern {self.id} has frequency {self.frequency} < 1")
        bad = [p for p in self.id_positions if not 0 <= p < len(self.symbols)]
        if bad:
            raise FormatError(f"pattern {self.id}: ID positions {sorted(bad)} out of range")

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.symbols)

    def is_id(self, pos: int) -> bool:
        return pos in self.id_positions

    @cached_property
    def id_pairs(self) -> Tuple[Tuple[int, int], ...]:
        """ID positions ``(i, j)`` holding a bracket pair ``X`` ... ``#X``."""
        out = []
        for i in sorted(self.id_positions):
            name = self.symbols[i].name
            if name.startswith("#"):
                continue
            for j in sorted(self.id_positions):
                if j > i and self.symbols[j].name == "#" + name:
                    out.append((i, j))
                    break
        return tuple(out)

    def __str__(self) -> str:
        return " ".join(self.names)


@dataclass
class PatternStore:
    old_patterns: list = field(default_factory=list)
    new_patterns: list = field(default_factory=list)
    symbol_table: SymbolTable = field(default_factory=SymbolTable)

    def __post_init__(self):
        self._ids = {p.id for p in self.old_patterns + self.new_patterns}

    @property
    def new(self) -> Pattern:
        if len(self.new_patterns) != 1:
            raise ValueError(f"expected exactly one New pattern, found {len(self.new_patterns)}")
        return self.new_patterns[0]

    def pattern(self, pattern_id: str) -> Pattern:
        for p in self.old_patterns + self.new_patterns:
            if p.id == pattern_id:
                return p
        raise KeyError(pattern_id)

    def with_new(self, symbols: Sequence[str]) -> "PatternStore":
        """A copy sharing Old but with ``symbols`` as the only New pattern."""
        store = PatternStore()
        for p in self.old_patterns:
            add_pattern(store, p.names, p.frequency, p.id_positions, OLD, pattern_id=p.id)
        add_pattern(store, symbols, 1, (), NEW)
        return store


def add_pattern(
    store: PatternStore,
    symbols: Sequence[str],
    frequency: int = 1,
    id_groups: Iterable[int] = (),
    destination: str = OLD,
    pattern_id: Optional[str] = None,
) -> Pattern:
    symbols = list(symbols)
    if not symbols:
        raise FormatError("pattern has no symbols")
    if not isinstance(frequency, int) or frequency < 1:
        raise FormatError(f"frequency must be a positive integer, got {frequency!r}")
    if destination not in (OLD, NEW):
        raise ValueError(f"unknown destination {destination!r}")
    target = store.old_patterns if destination == OLD else store.new_patterns
    if pattern_id is None:
        prefix = "old" if destination == OLD else "new"
        n = len(target) + 1
        while f"{prefix}{n}" in store._ids:
            n += 1
        pattern_id = f"{prefix}{n}"
    if pattern_id in store._ids:
        raise FormatError(f"duplicate pattern id {pattern_id!r}")
    interned = tuple(intern_symbol(store.symbol_table, s) for s in symbols)
    pattern = Pattern(pattern_id, interned, frequency, frozenset(id_groups))
    for s in interned:
        store.symbol_table._bump(s.name, frequency)
    target.append(pattern)
    store._ids.add(pattern_id)
    return pattern


def symbol_frequencies(store: PatternStore) -> Dict[int, int]:
    counts: Counter = Counter()
    for p in store.old_patterns + store.new_patterns:
        for s in p.symbols:
            counts[s.type_id] += p.frequency
    return dict(counts)


def frequencies_by_name(store: PatternStore) -> Mapping[str, int]:
    return {name: count for name, (_, count) in store.symbol_table.entries.items() if count}
