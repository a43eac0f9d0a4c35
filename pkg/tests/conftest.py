from __future__ import annotations

from pathlib import Path

import pytest

from figparse import parse_drawing
from icmaus import build_cost_model, load_fixture, symbol_frequencies
from icmaus.alignment import Alignment, order_columns

FIGURES = Path(__file__).parent / "figures"
FIGURE_FIXTURES = ("fig1", "fig4", "fig6", "fig9", "fig11", "fig13", "fig15", "fig16")


def figure_alignment(name: str, store) -> Alignment:
    """The alignment drawn in the figure, read from its text copy."""
    patterns = {p.id: p.names for p in store.old_patterns}
    patterns["new"] = store.new.names
    ids, columns = parse_drawing((FIGURES / f"{name}.txt").read_text(encoding="utf-8"), patterns)
    by_id = {p.id: p for p in store.old_patterns}
    by_id["new"] = store.new
    rows = [by_id[i] for i in ids]
    return Alignment(tuple(rows), order_columns(rows, [tuple(c) for c in columns]))


def fixture_model(name: str):
    fx = load_fixture(name)
    return fx, build_cost_model(symbol_frequencies(fx.store))


@pytest.fixture
def fig1():
    return fixture_model("fig1")


# acceptance criteria: number -> (title, [(ok, detail, seconds)])
_CRITERIA: dict = {}


@pytest.fixture
def criterion():
    """Record one checked part of an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str, seconds: float) -> None:
        _CRITERIA.setdefault(number, (title, []))[1].append((ok, detail, seconds))
        print(f"{'PASS' if ok else 'FAIL'} criterion {number} {title}: {detail} ({seconds:.2f} s)")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, parts = _CRITERIA[number]
        ok = all(p[0] for p in parts)
        seconds = sum(p[2] for p in parts)
        details = "; ".join(p[1] for p in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number}. {title}: {details} ({seconds:.2f} s)")
