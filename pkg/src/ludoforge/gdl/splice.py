"""Replace one parenthetical expression of a game with another subtree."""

from __future__ import annotations

from .ast import GameTree, Node
from .grammar import DEFAULT_GRAMMAR, Grammar
from .lexer import GdlError
from .parser import parse_source
from .printer import print_canonical
from .validate import ExpressionSite, _Validator


class CategoryMismatch(GdlError):
    pass


def _fragment_matches(node: Node, category: str, grammar: Grammar) -> bool:
    v = _Validator(grammar)
    v.check_node(node, category)
    return not v.errors


def splice(
    tree: GameTree,
    site: ExpressionSite,
    replacement: Node | str,
    grammar: Grammar = DEFAULT_GRAMMAR,
) -> GameTree:
    """Return a new tree with ``site`` replaced by ``replacement``.

    ``replacement`` may be a parsed node or raw text (parsed here). It must
    validate at the site's syntactic category. Bytes outside the site span
    are untouched; the result is reparsed so every span is fresh.
    """
    if isinstance(replacement, str):
        node = parse_source(replacement).root
    else:
        # synthesized nodes carry placeholder spans; reparse so the
        # validator's span-keyed bookkeeping sees unique spans
        node = parse_source(print_canonical(replacement)).root
    if not _fragment_matches(node, site.category, grammar):
        raise CategoryMismatch(
            f"replacement '{node.head}' does not fit category '{site.category}'",
            site.span[0],
        )
    start, end = site.span
    text = print_canonical(node).rstrip("\n")
    new_source = tree.source[:start] + text + tree.source[end:]
    return parse_source(new_source)
