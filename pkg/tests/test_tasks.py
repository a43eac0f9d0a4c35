from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from icmaus.io import fixture_text, parse_bnf
from icmaus.tasks import (
    GrammarError,
    bag_to_set,
    format_set,
    recast_grammar,
    set_union_intersection,
    unrecast,
)

FIG3 = [
    "F 1 a #F",
    "F 2 ( F #F R #R F #F ) #F",
    "F 3 ( ~ F #F ) #F",
    "R 1 => #R",
    "R 2 ^ #R",
    "R 3 v #R",
]


def test_fig2_recasts_to_fig3():
    patterns = recast_grammar(parse_bnf(fixture_text("fig2.bnf")))
    assert [" ".join(p.names) for p in patterns] == FIG3


def test_second_f_rule():
    rules = [("F", ["a"]), ("F", ["(", "F", "R", "F", ")"]), ("R", ["=>"])]
    p = recast_grammar(rules)[1]
    assert " ".join(p.names) == "F 2 ( F #F R #R F #F ) #F"
    assert sorted(p.id_positions) == [0, 1, 10]


def test_first_r_rule():
    assert " ".join(recast_grammar([("R", ["=>"])])[0].names) == "R 1 => #R"


def test_no_arrow_and_one_terminator_per_rule_and_call():
    rules = parse_bnf(fixture_text("fig2.bnf"))
    heads = {lhs for lhs, _ in rules}
    for (lhs, rhs), p in zip(rules, recast_grammar(rules)):
        assert "->" not in p.names
        calls = sum(1 for t in rhs if t in heads)
        assert sum(1 for n in p.names if n.startswith("#")) == 1 + calls


@pytest.mark.parametrize(
    "rules",
    [[("F", [])], [("F", ["G"])], [("F", ["#x"])], [("#F", ["a"])]],
)
def test_recast_errors(rules):
    with pytest.raises(GrammarError):
        recast_grammar(rules)


terminal = st.sampled_from(["a", "b", "(", ")", "=>", "~", "x1"])


@st.composite
def grammars(draw):
    heads = draw(st.lists(st.sampled_from(["S", "NP", "VP", "F", "R"]), min_size=1, max_size=4, unique=True))
    token = st.one_of(terminal, st.sampled_from(heads))
    rules = []
    for head in heads:
        for _ in range(draw(st.integers(1, 3))):
            rules.append((head, draw(st.lists(token, min_size=1, max_size=6))))
    return draw(st.permutations(rules))


@given(grammars())
def test_unrecast_inverts_recast(rules):
    rules = [(lhs, list(rhs)) for lhs, rhs in rules]
    assert unrecast(recast_grammar(rules)) == rules


BAG = "A B C D A D B A C C A C".split()


def test_bag_to_set():
    out = bag_to_set([(x,) for x in BAG])
    assert format_set([x for x, _ in out]) == "{(A)(B)(C)(D)}"
    assert dict(out) == {("A",): 4, ("B",): 2, ("C",): 4, ("D",): 2}


def test_distinct_bag_is_identity():
    items = [("a", "b"), ("c",), ("a",)]
    assert bag_to_set(items) == [(x, 1) for x in items]


def test_union_and_intersection():
    new = [(x,) for x in "BCDFG"]
    old = [(x,) for x in "ABCEF"]
    union, both = set_union_intersection(new, old)
    assert format_set(union) == "{(A)(B)(C)(D)(E)(F)(G)}"
    assert format_set(both) == "{(B)(C)(F)}"


def test_disjoint_and_identical_sets():
    a, b = [("x",), ("y",)], [("z",)]
    assert set_union_intersection(a, b) == (a + b, [])
    assert set_union_intersection(a, a) == (a, a)


def test_sets_reject_duplicates():
    with pytest.raises(ValueError):
        set_union_intersection([("a",), ("a",)], [])


small_sets = st.lists(st.tuples(st.sampled_from("abcdef")), unique=True, max_size=6)


@given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("xy")), max_size=20))
def test_bag_counts_add_up(bag):
    out = bag_to_set(bag)
    assert sum(n for _, n in out) == len(bag)
    assert len({x for x, _ in out}) == len(out)


@given(small_sets, small_sets)
def test_set_laws(a, b):
    union, both = set_union_intersection(a, b)
    assert len(union) == len(a) + len(b) - len(both)
    assert set(both) <= set(a) and set(both) <= set(b)
    assert set(union) == set(a) | set(b)
