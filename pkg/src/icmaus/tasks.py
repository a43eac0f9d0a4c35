"""Grammar recasting and set operations built on whole-pattern unification."""
from __future__ import annotations

from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

from .alignment import build_alignment, unify
from .coding import build_cost_model
from .matcher import pairwise_match_kbest
from .patterns import NEW, OLD, FormatError, Pattern, PatternStore, add_pattern, symbol_frequencies

Rule = Tuple[str, List[str]]
Names = Tuple[str, ...]


class GrammarError(FormatError):
    pass


def _looks_nonterminal(token: str) -> bool:
    return token[:1].isascii() and token[:1].isupper()


def recast_grammar(rules: Sequence[Rule], store: Optional[PatternStore] = None) -> List[Pattern]:
    """Rewrite rules ``X -> body`` as patterns ``X i body' #X``.

    ``i`` numbers the alternatives for ``X`` in input order and ``body'``
    follows each call ``Y`` with its terminator ``#Y``. ``X``, ``i`` and
    ``#X`` are the ID symbols; calls stay content so that they can match
    the ID symbols of the rule they call.

    Nonterminals are the left-hand sides. A right-hand token that starts
    with an upper-case ASCII letter but has no rule is an error.
    """
    store = store if store is not None else PatternStore()
    heads = {lhs for lhs, _ in rules}
    counter: Counter = Counter()
    out = []
    for lhs, rhs in rules:
        if not rhs:
            raise GrammarError(f"rule for {lhs!r} has an empty right-hand side")
        if lhs.startswith("#"):
            raise GrammarError(f"nonterminal {lhs!r} may not start with '#'")
        counter[lhs] += 1
        symbols = [lhs, str(counter[lhs])]
        for token in rhs:
            if token in heads:
                symbols += [token, "#" + token]
            elif _looks_nonterminal(token) or token.startswith("#"):
                raise GrammarError(f"undefined nonterminal {token!r} in rule for {lhs!r}")
            else:
                symbols.append(token)
        symbols.append("#" + lhs)
        ids = (0, 1, len(symbols) - 1)
        out.append(add_pattern(store, symbols, 1, ids, OLD))
    return out


def unrecast(patterns: Sequence[Pattern]) -> List[Rule]:
    """Inverse of recast_grammar: drop numbers and terminators."""
    rules = []
    for p in patterns:
        names = list(p.names)
        if len(names) < 4 or names[-1] != "#" + names[0]:
            raise GrammarError(f"pattern {p} is not a recast rule")
        lhs, body = names[0], names[2:-1]
        rhs, k = [], 0
        while k < len(body):
            rhs.append(body[k])
            if k + 1 < len(body) and body[k + 1] == "#" + body[k]:
                k += 2
            else:
                k += 1
        rules.append((lhs, rhs))
    return rules


def _names(item) -> Names:
    return tuple(getattr(item, "names", item))


def bag_to_set(bag: Sequence) -> List[Tuple[Names, int]]:
    """Distinct patterns with their counts, in order of first occurrence.

    Items are Patterns or sequences of symbol names; two items unify when
    their symbol sequences are equal.
    """
    counts: Dict[Names, int] = {}
    for item in bag:
        key = _names(item)
        counts[key] = counts.get(key, 0) + 1
    return list(counts.items())


def set_union_intersection(new_set: Sequence, old_set: Sequence) -> Tuple[List[Names], List[Names]]:
    """Union and intersection by aligning the two sets as sequences.

    Each element is one symbol; the best order-preserving match pairs the
    shared elements, and the unified alignment lists every element once:
    that is the union. The matched elements are the intersection. Where
    both sets have unmatched elements between two shared ones, New's come
    first.
    """
    old = [_names(x) for x in old_set]
    new = [_names(x) for x in new_set]
    for label, items in (("Old", old), ("New", new)):
        if len(set(items)) != len(items):
            raise ValueError(f"{label} set has duplicates; reduce it with bag_to_set first")
    if not old or not new:
        return (old or new)[:], []
    keys = {x: f"e{k}" for k, x in enumerate(dict.fromkeys(old + new))}
    elements = {v: x for x, v in keys.items()}
    store = PatternStore()
    old_row = add_pattern(store, [keys[x] for x in old], 1, (), OLD)
    new_row = add_pattern(store, [keys[x] for x in new], 1, (), NEW)
    model = build_cost_model(symbol_frequencies(store))
    match = pairwise_match_kbest(new_row.symbols, old_row.symbols, model, 1)[0]
    columns = [((0, i), (1, j)) for i, j in match.pairs]
    matched_new = {i for i, _ in match.pairs}
    matched_old = {j for _, j in match.pairs}
    columns += [((0, i),) for i in range(len(new)) if i not in matched_new]
    columns += [((1, j),) for j in range(len(old)) if j not in matched_old]
    a = build_alignment([new_row, old_row], columns)
    union = [elements[s.name] for s in unify(a).symbols]
    both = [elements[a.symbol(c).name] for c, col in enumerate(a.columns) if len(col) == 2]
    return union, both


def format_set(items: Sequence[Names]) -> str:
    return "{" + "".join("(" + " ".join(x) + ")" for x in items) + "}"
