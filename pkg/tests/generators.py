"""Random instances shared by the oracle tests and the acceptance suite."""
from __future__ import annotations

import random

from icmaus import NEW, PatternStore, SymbolTable, add_pattern, build_cost_model, intern_symbol


def random_store(rng: random.Random) -> PatternStore:
    """A small store within the exhaustive oracle's bounds."""
    alpha = "abcd"[: rng.randint(2, 4)]
    store = PatternStore()
    for _ in range(rng.randint(1, 3)):
        n = rng.randint(1, 4)
        names = [rng.choice(alpha) for _ in range(n)]
        if n >= 2 and rng.random() < 0.5:
            x = rng.choice("XY")
            names = [x] + names + ["#" + x]
            ids = {0, len(names) - 1}
        else:
            ids = {i for i in range(n) if rng.random() < 0.3}
        add_pattern(store, names, rng.randint(1, 3), ids)
    add_pattern(store, [rng.choice(alpha) for _ in range(rng.randint(1, 4))], 1, (), NEW)
    return store


def random_pair(rng: random.Random, max_len: int = 8, max_alpha: int = 4):
    """Two random sequences and a cost model over their symbols."""
    alpha = "abcd"[: rng.randint(1, max_alpha)]
    table = SymbolTable()
    left = [intern_symbol(table, rng.choice(alpha)) for _ in range(rng.randint(1, max_len))]
    right = [intern_symbol(table, rng.choice(alpha)) for _ in range(rng.randint(1, max_len))]
    freqs = {}
    for s in left + right:
        freqs[s.type_id] = freqs.get(s.type_id, 0) + rng.randint(1, 3)
    return left, right, build_cost_model(freqs)


def random_grammar(rng: random.Random):
    """A well-formed grammar: nonterminals S, A, B, C with terminal or
    nonterminal right-hand sides."""
    heads = ["S"] + [h for h in "ABC" if rng.random() < 0.7]
    terminals = "abcdxyz01"
    rules = []
    for head in heads:
        for _ in range(rng.randint(1, 3)):
            body = []
            for _ in range(rng.randint(1, 4)):
                if rng.random() < 0.3:
                    body.append(rng.choice(heads))
                else:
                    body.append(rng.choice(terminals))
            rules.append((head, body))
    rng.shuffle(rules)
    return rules
