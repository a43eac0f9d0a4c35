from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from conftest import figure_alignment, fixture_model
from icmaus import (
    Alignment,
    RetrievalError,
    alignment_probabilities,
    build_cost_model,
    derive_encoding,
    load_fixture,
    retrieve_by_code,
)
from icmaus.alignment import canonicalize

counts = st.dictionaries(st.integers(0, 20), st.integers(1, 50), min_size=1, max_size=12)


def is_subsequence(needle, hay) -> bool:
    it = iter(hay)
    return all(x in it for x in needle)


def test_uniform_pair():
    m = build_cost_model({0: 1, 1: 1})
    assert m.costs[0] == m.costs[1] == 1.0


def test_three_to_one():
    m = build_cost_model({0: 3, 1: 1})
    assert m.costs[1] == pytest.approx(2.0, abs=1e-12)
    assert m.costs[0] == pytest.approx(-math.log2(0.75), abs=1e-12)


def test_single_type_costs_nothing():
    assert build_cost_model({0: 5}).costs[0] == 0.0


def test_empty_table_is_an_error():
    with pytest.raises(ValueError):
        build_cost_model({})


@given(counts)
def test_costs_normalise(freqs):
    m = build_cost_model(freqs)
    assert math.fsum(2.0 ** -c for c in m.costs.values()) == pytest.approx(1.0, abs=1e-9)
    assert math.fsum(m.probs.values()) == pytest.approx(1.0, abs=1e-9)


@given(counts)
def test_costs_fall_as_counts_rise(freqs):
    m = build_cost_model(freqs)
    for a in freqs:
        for b in freqs:
            if freqs[a] >= freqs[b]:
                assert m.costs[a] <= m.costs[b]


def test_fig1_code(fig1):
    fx, model = fig1
    enc = derive_encoding(figure_alignment("fig1", fx.store), model)
    assert str(enc) == "S 0 1 #S"
    assert enc.bits == pytest.approx(sum(model.cost(s) for s in enc.code_symbols))


def test_code_symbols_come_from_old_id_positions(fig1):
    fx, model = fig1
    a = figure_alignment("fig1", fx.store)
    enc = derive_encoding(a, model)
    sources = [a.rows[col[0][0]].is_id(col[0][1]) and col[0][0] > 0 for col in a.columns if len(col) == 1]
    assert len(enc.code_symbols) == sum(sources)


def test_new_only_alignment_has_empty_code(fig1):
    fx, model = fig1
    enc = derive_encoding(Alignment.of_new(fx.store.new), model)
    assert enc.code_symbols == () and enc.bits == 0.0


def test_fig11_has_empty_code():
    fx, model = fixture_model("fig11")
    assert derive_encoding(figure_alignment("fig11", fx.store), model).code_symbols == ()


def test_encoding_is_deterministic(fig1):
    fx, model = fig1
    a = figure_alignment("fig1", fx.store)
    b = figure_alignment("fig1", fx.store)
    assert canonicalize(a) == canonicalize(b)
    assert derive_encoding(a, model) == derive_encoding(b, model)


def test_retrieve_fig1_sentence(fig1):
    fx, model = fig1
    enc = derive_encoding(figure_alignment("fig1", fx.store), model)
    unified = retrieve_by_code(enc, fx.store)
    assert is_subsequence(fx.store.new.names, unified.names)


def test_retrieve_noun_only():
    store = load_fixture("fig1").store
    unified = retrieve_by_code(["N", "0", "#N"], store)
    assert is_subsequence(["j", "o", "h", "n"], unified.names)


def test_retrieve_nothing():
    with pytest.raises(RetrievalError, match="nothing to retrieve"):
        retrieve_by_code([], load_fixture("fig1").store)


def test_retrieve_unknown_symbol():
    with pytest.raises(RetrievalError):
        retrieve_by_code(["zz"], load_fixture("fig1").store)


def test_probabilities_analytic():
    assert alignment_probabilities([(None, 3.0)]) == [1.0]
    assert alignment_probabilities([(None, 2.0), (None, 2.0)]) == [0.5, 0.5]
    p = alignment_probabilities([(None, 5.0), (None, 4.0)])
    assert p[0] == pytest.approx(2 / 3, abs=1e-9) and p[1] == pytest.approx(1 / 3, abs=1e-9)


@given(st.lists(st.floats(-200, 200), min_size=1, max_size=20))
def test_probabilities_sum_to_one(cds):
    probs = alignment_probabilities([(None, cd) for cd in cds])
    assert math.fsum(probs) == pytest.approx(1.0, abs=1e-9)
    best = max(range(len(cds)), key=lambda i: cds[i])
    assert probs[best] == max(probs)


@pytest.mark.parametrize("bad", [[], [(None, float("nan"))], [(None, float("inf"))]])
def test_probabilities_reject_bad_input(bad):
    with pytest.raises(ValueError):
        alignment_probabilities(bad)
