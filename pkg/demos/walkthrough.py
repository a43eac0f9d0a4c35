"""Use the library directly: search, score, encode, decode and read results."""
from __future__ import annotations

from icmaus import (
    SearchParams,
    beam_search,
    build_cost_model,
    derive_encoding,
    load_fixture,
    read_result,
    render_alignment,
    retrieve_by_code,
    symbol_frequencies,
    unify,
)


def show(name: str) -> None:
    fx = load_fixture(name)
    model = build_cost_model(symbol_frequencies(fx.store))
    outcome = beam_search(fx.store, model, SearchParams(**fx.params))
    best, score = outcome.best
    print(f"--- {name}: New = {' '.join(fx.store.new.names)}")
    print(render_alignment(best))
    print(f"cd {score.cd:.3f} bits after {outcome.cycles_run} cycles")
    print("unified:", " ".join(unify(best).names))
    result = read_result(best)
    if result:
        print("result:", " ".join(s.name for s in result))
    enc = derive_encoding(best, model)
    if enc.code_symbols:
        back = retrieve_by_code(enc, fx.store)
        print(f"code: {enc} ({enc.bits:.2f} bits) -> {' '.join(back.names)}")
    print()


if __name__ == "__main__":
    for name in ("fig1", "fig11", "fig13", "fig15", "fig16"):
        show(name)
