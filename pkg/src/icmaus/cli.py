"""Command-line driver: align, retrieve, recast and setops."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .coding import RetrievalError, alignment_probabilities, build_cost_model, retrieve_by_code
from .io import (
    FIXTURES,
    load_fixture,
    load_store,
    parse_bnf,
    parse_grammar_file,
    parse_lines,
    render_alignment,
    serialize_patterns,
)
from .patterns import FormatError, symbol_frequencies
from .search import SearchParams, beam_search
from .tasks import GrammarError, bag_to_set, format_set, recast_grammar, set_union_intersection


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _search_params(args, base: dict) -> SearchParams:
    fields = dict(base)
    for name, flag in (("beam_width", "beam"), ("kbest_per_pair", "kbest"), ("max_cycles", "max_cycles"), ("max_rows", "max_rows")):
        value = getattr(args, flag)
        if value is not None:
            fields[name] = value
    if getattr(args, "full_coverage", False):
        fields["require_full_new_coverage"] = True
    if getattr(args, "no_left_to_right", False):
        fields["left_to_right"] = False
    return SearchParams(**fields)


def cmd_align(args) -> str:
    if args.fixture:
        if args.old or args.new:
            raise UsageError("--fixture replaces --old and --new")
        fixture = load_fixture(args.fixture)
        store, base = fixture.store, fixture.params
    else:
        if not (args.old and args.new):
            raise UsageError("align needs --old and --new, or --fixture")
        store, base = load_store(_read(args.old), _read(args.new)), {}
    if args.top < 1:
        raise UsageError("--top must be at least 1")
    model = build_cost_model(symbol_frequencies(store))
    outcome = beam_search(store, model, _search_params(args, base))
    shown = outcome.ranked[: args.top]
    if not shown:
        return "no alignment covers all of New\n"
    parts = []
    for rank, (a, score) in enumerate(shown, 1):
        body = a.canonical.text() if args.canonical else render_alignment(a)
        parts.append(f"# alignment {rank}: cd {score.cd:.4f} bits (new {score.b_new:.4f}, code {score.b_enc:.4f})\n{body}")
    out = "\n".join(parts)
    if args.probs:
        probs = alignment_probabilities(shown)
        out += "\n# probabilities: " + " ".join(f"{p:.6f}" for p in probs) + "\n"
    return out


def cmd_retrieve(args) -> str:
    store = parse_grammar_file(_read(args.old))
    code = args.code.split()
    unified = retrieve_by_code(code, store, _search_params(args, {}))
    return " ".join(unified.names) + "\n"


def cmd_recast(args) -> str:
    return serialize_patterns(recast_grammar(parse_bnf(_read(args.bnf))))


def _bag(path: str) -> List[tuple]:
    return [tuple(p.symbols) for p in parse_lines(_read(path))]


def cmd_setops(args) -> str:
    new = bag_to_set(_bag(args.new))
    if args.op == "toset":
        return "".join(f"({' '.join(x)}) {n}\n" for x, n in new)
    if not args.old:
        raise UsageError(f"--op {args.op} needs --old")
    old = bag_to_set(_bag(args.old))
    union, both = set_union_intersection([x for x, _ in new], [x for x, _ in old])
    return format_set(union if args.op == "union" else both) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icmaus", description="Compression by multiple alignment of symbol patterns.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log search progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def search_flags(p):
        p.add_argument("--beam", type=int, help="beam width")
        p.add_argument("--kbest", type=int, help="matches kept per alignment and Old pattern")
        p.add_argument("--max-cycles", type=int, help="search cycles")
        p.add_argument("--max-rows", type=int, help="rows per alignment, New included")
        p.add_argument("--no-left-to-right", action="store_true", help="drop the left-to-right constraint on New")

    p = sub.add_parser("align", help="find the best alignments of New against Old")
    p.add_argument("--old", help="grammar file of Old patterns")
    p.add_argument("--new", help="file holding the one New pattern")
    p.add_argument("--fixture", choices=FIXTURES, help="use a bundled fixture instead of --old/--new")
    p.add_argument("--top", type=int, default=1, help="how many alignments to print")
    p.add_argument("--full-coverage", action="store_true", help="only alignments that match every New symbol")
    p.add_argument("--probs", action="store_true", help="append relative probabilities of the printed alignments")
    p.add_argument("--canonical", action="store_true", help="print canonical text instead of pictures")
    search_flags(p)
    p.set_defaults(run=cmd_align)

    p = sub.add_parser("retrieve", help="recover a pattern from its code")
    p.add_argument("--old", required=True)
    p.add_argument("--code", required=True, help="code symbols separated by spaces")
    search_flags(p)
    p.set_defaults(run=cmd_retrieve)

    p = sub.add_parser("recast", help="rewrite 'X -> ...' rules as patterns")
    p.add_argument("--bnf", required=True)
    p.set_defaults(run=cmd_recast)

    p = sub.add_parser("setops", help="set reduction, union and intersection")
    p.add_argument("--old")
    p.add_argument("--new", required=True)
    p.add_argument("--op", choices=("toset", "union", "intersect"), required=True)
    p.set_defaults(run=cmd_setops)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        out = args.run(args)
    except (UsageError, FormatError, GrammarError, RetrievalError, ValueError) as exc:
        print(f"icmaus: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
